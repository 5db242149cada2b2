#![allow(dead_code)]

use std::collections::BTreeSet;

use fracdim::digit_sets::{DigitSetSpec, ScheduleSpec};
use fracdim::rational::ratio;
use fracdim::Rational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` in `(0, 1)` with `2 <= q <= max_den`.
pub fn random_param(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let q = rng.gen_range(2..=max_den);
    let p = rng.gen_range(1..q);
    ratio(p, q)
}

/// `p/q` in `[lo, lo + 1)` with `q <= max_den`.
pub fn random_shifted(rng: &mut ChaCha8Rng, lo: &Rational, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(0..q);
    lo + ratio(p, q)
}

pub fn random_spec(rng: &mut ChaCha8Rng) -> DigitSetSpec {
    let a1 = random_param(rng, 20);
    let a2 = random_param(rng, 20);
    DigitSetSpec::with_default_schedule(a1, a2)
}

pub fn demo_schedule() -> ScheduleSpec {
    ScheduleSpec::recurrence(5)
}

pub fn demo_s() -> DigitSetSpec {
    DigitSetSpec::new(demo_schedule(), ratio(1, 2), ratio(1, 4))
}

pub fn demo_t() -> DigitSetSpec {
    DigitSetSpec::new(demo_schedule(), ratio(1, 4), ratio(1, 3))
}

fn as_u64_pair(a: &Rational) -> (u64, u64) {
    (a.numer().to_u64().unwrap(), a.denom().to_u64().unwrap())
}

/// The digit set up to `limit`, built straight from the block definition
/// with machine integers: block `n` holds `k_{n-1} + floor(m q / p)` for
/// `1 <= m < ceil(a (k_n - k_{n-1}))`, plus `k_n` itself.
pub fn oracle_set(spec: &DigitSetSpec, limit: u64) -> BTreeSet<u64> {
    let ks: Vec<u64> = match &spec.schedule {
        ScheduleSpec::Recurrence { k0 } => {
            let mut ks = vec![k0.to_u64().unwrap()];
            let mut n = 0u64;
            while *ks.last().unwrap() < limit {
                let next = ks.last().unwrap() * (n + 2);
                ks.push(next);
                n += 1;
            }
            ks
        }
        ScheduleSpec::Explicit(list) => list.iter().map(|k| k.to_u64().unwrap()).collect(),
    };
    let mut set = BTreeSet::new();
    for n in 1..ks.len() {
        let a = if n % 2 == 1 { &spec.a1 } else { &spec.a2 };
        let (p, q) = as_u64_pair(a);
        let span = ks[n] - ks[n - 1];
        let blocks = (p * span).div_ceil(q);
        for m in 1..blocks {
            set.insert(ks[n - 1] + m * q / p);
        }
        set.insert(ks[n]);
    }
    set.retain(|&x| x <= limit);
    set
}

/// Integration tests have no `lib.rs` beside them to anchor regression files.
pub fn proptest_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}

mod common;

use std::cmp::Ordering;

use fracdim::density::{
    checkpoint_densities, density, envelope_bounds, extremal_density_estimates, pair_envelope, single_envelope,
    EnvelopeCase,
};
use fracdim::digit_sets::{DigitSetSpec, ValidatedSpec};
use fracdim::rational::ratio;
use fracdim::Rational;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use common::{demo_s, demo_schedule, demo_t};

const DEPTH: usize = 17;

/// Offsets `0..=50`, two hundred evenly spaced points, and the last offset.
fn m_grid(last: &BigUint) -> Vec<BigUint> {
    let mut grid: Vec<BigUint> = (0u32..=50).map(BigUint::from).filter(|m| m <= last).collect();
    for i in 0u32..=200 {
        grid.push(last * BigUint::from(i) / BigUint::from(200u32));
    }
    grid.sort();
    grid.dedup();
    grid
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Trend {
    NonIncreasing,
    NonDecreasing,
}

fn follows(values: &[Rational], trend: Trend) -> bool {
    values.windows(2).all(|w| match trend {
        Trend::NonIncreasing => w[1] <= w[0],
        Trend::NonDecreasing => w[1] >= w[0],
    })
}

/// Expected trends of `(lower, upper)` given the active and finished parameters.
fn expected(active: &Rational, finished: &Rational) -> (Trend, Trend) {
    match active.cmp(finished) {
        Ordering::Less => (Trend::NonIncreasing, Trend::NonIncreasing),
        Ordering::Greater => (Trend::NonDecreasing, Trend::NonDecreasing),
        Ordering::Equal => (Trend::NonDecreasing, Trend::NonIncreasing),
    }
}

fn block(case: EnvelopeCase, j: usize) -> usize {
    match case {
        EnvelopeCase::One => 2 * j + 1,
        EnvelopeCase::Two => 2 * j + 2,
    }
}

fn single_monotone(spec: &ValidatedSpec, case: EnvelopeCase, j: usize) -> bool {
    let n = block(case, j);
    let last = spec.block_size(n) - BigUint::one();
    let (lo, hi): (Vec<_>, Vec<_>) = m_grid(&last).iter().map(|m| single_envelope(spec, case, j, m)).unzip();
    let (tl, th) = expected(spec.param(n), spec.param(n - 1));
    follows(&lo, tl) && follows(&hi, th)
}

fn pair_monotone(s: &ValidatedSpec, t: &ValidatedSpec, case: EnvelopeCase, j: usize) -> bool {
    let n = block(case, j);
    let last = s.block_size(n) - BigUint::one();
    let (lo, hi): (Vec<_>, Vec<_>) = m_grid(&last).iter().map(|m| pair_envelope(s, t, case, j, m)).unzip();
    let active = s.param(n) + t.param(n);
    let finished = s.param(n - 1) + t.param(n - 1);
    let (tl, th) = expected(&active, &finished);
    follows(&lo, tl) && follows(&hi, th)
}

fn specs() -> Vec<ValidatedSpec> {
    let equal = DigitSetSpec::new(demo_schedule(), ratio(1, 3), ratio(1, 3));
    let close = DigitSetSpec::new(demo_schedule(), ratio(2, 5), ratio(1, 2));
    [demo_s(), demo_t(), equal, close]
        .iter()
        .map(|s| s.validate(DEPTH).unwrap())
        .collect()
}

#[test]
fn single_envelopes_are_monotone_for_large_j() {
    let mut transient = Vec::new();
    for spec in specs() {
        for case in [EnvelopeCase::One, EnvelopeCase::Two] {
            for j in 1..=7 {
                let ok = single_monotone(&spec, case, j);
                if j >= 5 {
                    assert!(ok, "{} case {} j={j}", spec.spec(), case.number());
                } else if !ok {
                    transient.push(format!("{} case {} j={j}", spec.spec(), case.number()));
                }
            }
        }
    }
    println!("small-j transients: {transient:?}");
}

#[test]
fn pair_envelopes_are_monotone_for_large_j() {
    let all = specs();
    let pairs = [(0, 1), (1, 0), (2, 2), (0, 3), (3, 1)];
    let mut transient = Vec::new();
    for (a, b) in pairs {
        let (s, t) = (&all[a], &all[b]);
        for case in [EnvelopeCase::One, EnvelopeCase::Two] {
            for j in 1..=7 {
                let ok = pair_monotone(s, t, case, j);
                if j >= 5 {
                    assert!(ok, "pair ({a},{b}) case {} j={j}", case.number());
                } else if !ok {
                    transient.push(format!("pair ({a},{b}) case {} j={j}", case.number()));
                }
            }
        }
    }
    println!("small-j transients: {transient:?}");
}

#[test]
fn checkpoint_sandwich_holds_exactly() {
    for spec in specs() {
        for c in checkpoint_densities(&spec, DEPTH).unwrap() {
            assert!(c.sandwich.0 <= c.density && c.density <= c.sandwich.1, "n={}", c.n);
            assert!(c.error() <= c.bound, "n={}", c.n);
        }
    }
}

#[test]
fn extremal_estimates_bracket_window() {
    for spec in specs() {
        let r = extremal_density_estimates(&[&spec], DEPTH, Some(4)).unwrap();
        for c in r.checkpoints.iter().filter(|c| c.n >= r.n_burn) {
            assert!(r.lower <= c.density && c.density <= r.upper);
        }
    }
    let equal = &specs()[2];
    let r = extremal_density_estimates(&[equal], DEPTH, None).unwrap();
    assert_eq!(r.target_lower, r.target_upper);
    assert_eq!(r.target_lower, ratio(1, 3));
}

fn param_strategy() -> impl Strategy<Value = Rational> {
    (2i64..=20).prop_flat_map(|q| (1..q).prop_map(move |p| ratio(p, q)))
}

proptest! {
    #![proptest_config(common::proptest_config(64))]

    #[test]
    fn envelope_contains_density(a1 in param_strategy(), a2 in param_strategy(), frac in 0.0f64..1.0) {
        let spec = DigitSetSpec::with_default_schedule(a1, a2).validate(6).unwrap();
        let lo = spec.k(2).to_f64().unwrap();
        let hi = spec.k(6).to_f64().unwrap() - 1.0;
        let k = BigUint::from((lo + frac * (hi - lo)) as u64);
        let e = envelope_bounds(&spec, &k).unwrap();
        let d = density(&spec, &k).unwrap();
        prop_assert!(e.contains(&d), "k={} lower={} d={} upper={}", k, e.lower, d, e.upper);
    }
}

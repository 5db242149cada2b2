//! Oscillating digit sets `S({k_n}, a1, a2)`.
//!
//! Between consecutive schedule points `k_{n-1} < k_n` the set holds one block
//! of `M_n = ceil(a_i (k_n - k_{n-1}))` integers, spaced roughly `1/a_i`
//! apart and ending exactly at `k_n`. Odd blocks use `a1`, even blocks `a2`.
//! Every position is a `BigUint` because `k_n` grows factorially under the
//! default recurrence `k_{n+1} = (n + 2) k_n`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_mul, floor_div, floor_uint, from_uint, in_open_unit, show, Rational};

/// Cap on the number of integers a single call may materialize.
pub const ELEMENT_CAP: u64 = 1_000_000;

/// Smallest `k_0` the default schedule will use.
pub const MIN_DEFAULT_K0: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleSpec {
    /// `k_0` given, then `k_{n+1} = (n + 2) k_n`.
    Recurrence { k0: BigUint },
    /// A finite strictly increasing list `k_0, k_1, ...`.
    Explicit(Vec<BigUint>),
}

impl ScheduleSpec {
    pub fn recurrence(k0: u64) -> Self {
        ScheduleSpec::Recurrence {
            k0: BigUint::from(k0),
        }
    }

    pub fn explicit<I: IntoIterator<Item = u64>>(ks: I) -> Self {
        ScheduleSpec::Explicit(ks.into_iter().map(BigUint::from).collect())
    }

    /// Recurrence schedule whose first gap `k_1 - k_0 = k_0` already exceeds
    /// `1 / min(params)`: `k_0 = max(5, floor(1/min) + 1)`.
    pub fn default_for<'a, I>(params: I) -> Self
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        let min = params
            .into_iter()
            .min()
            .cloned()
            .unwrap_or_else(Rational::one);
        let mut k0 = BigUint::from(MIN_DEFAULT_K0);
        if min > Rational::zero() {
            let needed = floor_uint(&min.recip()) + 1u32;
            if needed > k0 {
                k0 = needed;
            }
        }
        ScheduleSpec::Recurrence { k0 }
    }

    /// Explicit lists only certify `k_n / k_{n+1} -> 0` up to their length.
    pub fn is_finite_horizon(&self) -> bool {
        matches!(self, ScheduleSpec::Explicit(_))
    }

    /// Largest depth this schedule can generate, if finite.
    pub fn max_depth(&self) -> Option<usize> {
        match self {
            ScheduleSpec::Recurrence { .. } => None,
            ScheduleSpec::Explicit(ks) => Some(ks.len().saturating_sub(1)),
        }
    }

    /// `k_0, ..., k_depth`, checked for positivity and strict increase.
    pub fn generate(&self, depth: usize) -> Result<Vec<BigUint>> {
        let ks = match self {
            ScheduleSpec::Recurrence { k0 } => {
                if k0.is_zero() {
                    return Err(Error::NonPositiveSchedule);
                }
                let mut ks = Vec::with_capacity(depth + 1);
                ks.push(k0.clone());
                for n in 0..depth {
                    let next = &ks[n] * BigUint::from(n as u64 + 2);
                    ks.push(next);
                }
                ks
            }
            ScheduleSpec::Explicit(list) => {
                if list.len() <= depth {
                    return Err(Error::depth(
                        format!("schedule depth {depth}"),
                        format!("explicit list of {} entries", list.len()),
                    ));
                }
                list[..=depth].to_vec()
            }
        };
        if ks[0].is_zero() {
            return Err(Error::NonPositiveSchedule);
        }
        if let Some(index) = ks.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingSchedule { index: index + 1 });
        }
        Ok(ks)
    }
}

impl fmt::Display for ScheduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleSpec::Recurrence { k0 } => write!(f, "recurrence k0={k0}"),
            ScheduleSpec::Explicit(ks) => {
                let items: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                write!(f, "explicit {}", items.join(","))
            }
        }
    }
}

/// Unvalidated parameters of a digit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSetSpec {
    pub schedule: ScheduleSpec,
    pub a1: Rational,
    pub a2: Rational,
}

impl DigitSetSpec {
    pub fn new(schedule: ScheduleSpec, a1: Rational, a2: Rational) -> Self {
        DigitSetSpec { schedule, a1, a2 }
    }

    /// Parameters on the default schedule for `(a1, a2)` alone.
    pub fn with_default_schedule(a1: Rational, a2: Rational) -> Self {
        let schedule = ScheduleSpec::default_for([&a1, &a2]);
        DigitSetSpec { schedule, a1, a2 }
    }

    pub fn min_param(&self) -> &Rational {
        std::cmp::min(&self.a1, &self.a2)
    }

    pub fn max_param(&self) -> &Rational {
        std::cmp::max(&self.a1, &self.a2)
    }

    pub fn validate(&self, depth: usize) -> Result<ValidatedSpec> {
        validate_spec(self, depth)
    }

    /// Validates to the smallest depth whose horizon `k_depth` reaches `k`
    /// (at least depth 1). Explicit schedules are validated in full.
    pub fn validate_covering(&self, k: &BigUint) -> Result<ValidatedSpec> {
        let depth = match &self.schedule {
            ScheduleSpec::Explicit(list) => list.len().saturating_sub(1).max(1),
            ScheduleSpec::Recurrence { k0 } => {
                let mut depth = 1usize;
                let mut kn = k0 * 2u32;
                while &kn < k {
                    kn *= BigUint::from(depth as u64 + 2);
                    depth += 1;
                }
                depth
            }
        };
        let spec = validate_spec(self, depth)?;
        if k > spec.horizon() {
            return Err(Error::depth(format!("k = {k}"), spec.horizon()));
        }
        Ok(spec)
    }
}

impl fmt::Display for DigitSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S({}, a1={}, a2={})",
            self.schedule,
            show(&self.a1),
            show(&self.a2)
        )
    }
}

/// Block sizes and cumulative counts, indexed by block `n` (index 0 unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTable {
    ks: Vec<BigUint>,
    sizes: Vec<BigUint>,
    cumulative: Vec<BigUint>,
}

impl BlockTable {
    pub fn depth(&self) -> usize {
        self.ks.len() - 1
    }

    pub fn schedule(&self) -> &[BigUint] {
        &self.ks
    }

    /// `M_n`; zero for `n = 0`.
    pub fn size(&self, n: usize) -> &BigUint {
        &self.sizes[n]
    }

    /// `C_n = M_1 + ... + M_n`.
    pub fn cumulative(&self, n: usize) -> &BigUint {
        &self.cumulative[n]
    }
}

/// A digit set whose schedule prefix `k_0..k_depth` has been generated and
/// checked. Immutable; every query is a pure read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedSpec {
    spec: DigitSetSpec,
    table: BlockTable,
}

/// Checks `a1, a2 in (0, 1)`, the schedule shape, and the gap condition
/// `(k_{n+1} - k_n) * min(a1, a2) > 1` for every generated pair.
pub fn validate_spec(spec: &DigitSetSpec, depth: usize) -> Result<ValidatedSpec> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    for (name, value) in [("a1", &spec.a1), ("a2", &spec.a2)] {
        if !in_open_unit(value) {
            return Err(Error::ParameterOutOfRange {
                name,
                value: show(value),
            });
        }
    }
    let ks = spec.schedule.generate(depth)?;
    let min = spec.min_param();
    for n in 0..depth {
        let gap = &ks[n + 1] - &ks[n];
        let product = min * from_uint(&gap);
        if product <= Rational::one() {
            return Err(Error::GapConditionViolated {
                n,
                current: ks[n].to_string(),
                next: ks[n + 1].to_string(),
                min_param: show(min),
                product: show(&product),
            });
        }
    }

    let mut sizes = vec![BigUint::zero()];
    let mut cumulative = vec![BigUint::zero()];
    for n in 1..=depth {
        let a = if n % 2 == 1 { &spec.a1 } else { &spec.a2 };
        let gap = &ks[n] - &ks[n - 1];
        let size = ceil_mul(a, &gap);
        // [(M-1)/a] < k_n - k_{n-1}: the last regular element stays below k_n.
        debug_assert!(floor_div(&(&size - 1u32), a) < gap);
        let total = &cumulative[n - 1] + &size;
        sizes.push(size);
        cumulative.push(total);
    }

    Ok(ValidatedSpec {
        spec: spec.clone(),
        table: BlockTable {
            ks,
            sizes,
            cumulative,
        },
    })
}

impl ValidatedSpec {
    pub fn spec(&self) -> &DigitSetSpec {
        &self.spec
    }

    pub fn table(&self) -> &BlockTable {
        &self.table
    }

    pub fn a1(&self) -> &Rational {
        &self.spec.a1
    }

    pub fn a2(&self) -> &Rational {
        &self.spec.a2
    }

    pub fn depth(&self) -> usize {
        self.table.depth()
    }

    /// `k_0, ..., k_depth`.
    pub fn schedule(&self) -> &[BigUint] {
        &self.table.ks
    }

    pub fn k(&self, n: usize) -> &BigUint {
        &self.table.ks[n]
    }

    /// `k_depth`, the largest position any query may ask about.
    pub fn horizon(&self) -> &BigUint {
        self.table.ks.last().expect("depth >= 1")
    }

    pub fn is_finite_horizon(&self) -> bool {
        self.spec.schedule.is_finite_horizon()
    }

    /// Parameter governing block `n`: `a1` for odd `n`, `a2` for even.
    pub fn param(&self, n: usize) -> &Rational {
        if n % 2 == 1 {
            &self.spec.a1
        } else {
            &self.spec.a2
        }
    }

    pub fn block_size(&self, n: usize) -> &BigUint {
        self.table.size(n)
    }

    pub fn cumulative(&self, n: usize) -> &BigUint {
        self.table.cumulative(n)
    }

    pub fn shares_schedule(&self, other: &ValidatedSpec) -> bool {
        self.spec.schedule == other.spec.schedule
    }

    /// Block `n` with `k_{n-1} < k <= k_n`, or `None` when `k <= k_0`.
    pub(crate) fn block_containing(&self, k: &BigUint) -> Result<Option<usize>> {
        if k > self.horizon() {
            return Err(Error::depth(format!("k = {k}"), self.horizon()));
        }
        let n = self.table.ks.partition_point(|kn| kn < k);
        Ok(if n == 0 { None } else { Some(n) })
    }

    /// `#{m in [1, M_n - 1] : k_{n-1} + [m/a] <= k_{n-1} + x}`: how many of
    /// block `n`'s regular elements lie within `x` of its left end.
    pub(crate) fn offset_in_block(&self, n: usize, x: &BigUint) -> BigUint {
        let a = self.param(n);
        let last = self.block_size(n) - 1u32;
        let fits = |m: &BigUint| floor_div(m, a) <= *x;
        let mut m = ceil_mul(a, x).min(last.clone());
        while !m.is_zero() && !fits(&m) {
            m -= 1u32;
        }
        while m < last && fits(&(&m + 1u32)) {
            m += 1u32;
        }
        m
    }

    /// The members of block `n`, in increasing order.
    pub fn block_elements(&self, n: usize) -> Result<Vec<BigUint>> {
        self.block_elements_capped(n, ELEMENT_CAP)
    }

    pub fn block_elements_capped(&self, n: usize, cap: u64) -> Result<Vec<BigUint>> {
        if n == 0 || n > self.depth() {
            return Err(Error::depth(format!("block {n}"), format!("blocks 1..={}", self.depth())));
        }
        let size = self.block_size(n);
        if *size > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                what: format!("block {n}"),
                needed: size.to_string(),
                cap: cap.to_string(),
            });
        }
        let size = size.to_u64().expect("below cap");
        let a = self.param(n);
        let base = self.k(n - 1);
        let mut out = Vec::with_capacity(size as usize);
        for m in 1..size {
            out.push(base + floor_div(&BigUint::from(m), a));
        }
        out.push(self.k(n).clone());
        Ok(out)
    }

    pub fn membership(&self, k: &BigUint) -> Result<bool> {
        let Some(n) = self.block_containing(k)? else {
            return Ok(false);
        };
        if k == self.k(n) {
            return Ok(true);
        }
        let a = self.param(n);
        let x = k - self.k(n - 1);
        // [m/a] = x has at most one solution m, and it must be ceil(a x).
        let m = ceil_mul(a, &x);
        let last = self.block_size(n) - 1u32;
        Ok(!m.is_zero() && m <= last && floor_div(&m, a) == x)
    }

    /// `#(S ∩ {1..k})` from the block table, without enumeration.
    pub fn count_prefix(&self, k: &BigUint) -> Result<BigUint> {
        let Some(n) = self.block_containing(k)? else {
            return Ok(BigUint::zero());
        };
        if k == self.k(n) {
            return Ok(self.cumulative(n).clone());
        }
        let x = k - self.k(n - 1);
        Ok(self.cumulative(n - 1) + self.offset_in_block(n, &x))
    }

    /// `S ∩ {1..k}` by scanning every integer through [`Self::membership`].
    pub fn enumerate_prefix(&self, k: &BigUint) -> Result<Vec<BigUint>> {
        self.enumerate_prefix_capped(k, ELEMENT_CAP)
    }

    pub fn enumerate_prefix_capped(&self, k: &BigUint, cap: u64) -> Result<Vec<BigUint>> {
        if k > self.horizon() {
            return Err(Error::depth(format!("k = {k}"), self.horizon()));
        }
        if *k > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                what: "prefix enumeration".into(),
                needed: k.to_string(),
                cap: cap.to_string(),
            });
        }
        let k = k.to_u64().expect("below cap");
        let mut out = Vec::new();
        for candidate in 1..=k {
            let candidate = BigUint::from(candidate);
            if self.membership(&candidate)? {
                out.push(candidate);
            }
        }
        Ok(out)
    }
}

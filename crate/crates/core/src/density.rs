//! Density sequences `d_k(S) = #(S ∩ {1..k}) / k` and the bounds that pin
//! their liminf and limsup.
//!
//! Everything here works on a slice of factors sharing one schedule, so the
//! same code handles a single set, a pair `d_k(S) + d_k(T)`, and the `d`-fold
//! sums behind product dimensions.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::digit_sets::ValidatedSpec;
use crate::error::{Error, Result};
use crate::rational::{format_sig, from_uint, to_f64, uint_ratio, Rational};

pub const DENSITY_CSV_HEADER: &str = "k,count,density_num,density_den,density_float";

/// `d_k(S)` in lowest terms.
pub fn density(spec: &ValidatedSpec, k: &BigUint) -> Result<Rational> {
    if k.is_zero() {
        return Err(Error::InvalidArgument("density needs k >= 1".into()));
    }
    let count = spec.count_prefix(k)?;
    Ok(uint_ratio(&count, k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityEntry {
    pub k: BigUint,
    pub count: BigUint,
    pub density: Rational,
}

/// Exact `(k, count, d_k)` rows, sorted by distinct `k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DensityProfile {
    pub entries: Vec<DensityEntry>,
}

impl DensityProfile {
    /// Every `k` in `first..=last`.
    pub fn sweep(spec: &ValidatedSpec, first: u64, last: u64) -> Result<Self> {
        let first = first.max(1);
        let mut entries = Vec::with_capacity(last.saturating_sub(first) as usize + 1);
        for k in first..=last {
            let k = BigUint::from(k);
            let count = spec.count_prefix(&k)?;
            let density = uint_ratio(&count, &k);
            entries.push(DensityEntry { k, count, density });
        }
        Ok(DensityProfile { entries })
    }

    /// One row per schedule point `k_1..k_{n_max}`.
    pub fn at_checkpoints(spec: &ValidatedSpec, n_max: usize) -> Result<Self> {
        let entries = checkpoint_densities(spec, n_max)?
            .into_iter()
            .map(|c| DensityEntry {
                k: c.k,
                count: c.count,
                density: c.density,
            })
            .collect();
        Ok(DensityProfile { entries })
    }

    /// CSV with [`DENSITY_CSV_HEADER`]; the float column is a 12-digit
    /// rendering of the exact rational.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{DENSITY_CSV_HEADER}")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{}",
                e.k,
                e.count,
                e.density.numer(),
                e.density.denom(),
                format_sig(to_f64(&e.density), 12)
            )?;
        }
        Ok(())
    }
}

/// Summed density at a schedule point `k_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: usize,
    pub k: BigUint,
    /// Total count over all factors.
    pub count: BigUint,
    pub density: Rational,
    /// Limit along this parity: the sum of each factor's `a_i` for block `n`.
    pub target: Rational,
    /// `A(1 - r) <= density <= A + (d - A) r + d/k_n`, `r = k_{n-1}/k_n`.
    pub sandwich: (Rational, Rational),
    /// Certified bound on `|density - target|`, from the count estimates of
    /// blocks `n` and `n - 1`.
    pub bound: Rational,
}

impl Checkpoint {
    pub fn error(&self) -> Rational {
        (&self.density - &self.target).abs()
    }
}

pub(crate) fn require_shared_schedule(factors: &[&ValidatedSpec]) -> Result<()> {
    match factors.split_first() {
        None => Err(Error::InvalidArgument("at least one factor is required".into())),
        Some((first, rest)) => {
            if rest.iter().all(|f| f.shares_schedule(first)) {
                Ok(())
            } else {
                Err(Error::ScheduleMismatch)
            }
        }
    }
}

fn min_depth(factors: &[&ValidatedSpec]) -> usize {
    factors.iter().map(|f| f.depth()).min().unwrap_or(0)
}

fn sum_params(factors: &[&ValidatedSpec], n: usize) -> Rational {
    factors.iter().map(|f| f.param(n).clone()).sum()
}

/// Checkpoint `n >= 1` of `Σ d_k(S_i)` over factors sharing a schedule.
///
/// With `C_n = C_{n-2} + M_{n-1} + M_n`, `0 <= C_{n-2} <= k_{n-2}` and
/// `a (k_n - k_{n-1}) <= M_n < a (k_n - k_{n-1}) + 1`, the summed density
/// minus its target `A` lies in
/// `[(A' - A) r - A' s, (A' - A) r + (d - A') s + 2d/k_n]`
/// where `A'` is the previous parity's target, `r = k_{n-1}/k_n` and
/// `s = k_{n-2}/k_n`. For `n = 1` there is no earlier block:
/// `[-A r, -A r + d/k_1]`.
fn sum_checkpoint(factors: &[&ValidatedSpec], n: usize) -> Checkpoint {
    let lead = factors[0];
    let kn = lead.k(n);
    let d = Rational::from_integer(factors.len().into());
    let k_rat = from_uint(kn);
    let r = from_uint(lead.k(n - 1)) / &k_rat;
    let count: BigUint = factors.iter().map(|f| f.cumulative(n).clone()).sum();
    let density = uint_ratio(&count, kn);
    let target = sum_params(factors, n);

    let sandwich = (
        &target * (Rational::one() - &r),
        &target + (&d - &target) * &r + &d / &k_rat,
    );

    let (lo, hi) = if n == 1 {
        let lo = -(&target * &r);
        let hi = &lo + &d / &k_rat;
        (lo, hi)
    } else {
        let prev = sum_params(factors, n - 1);
        let s = from_uint(lead.k(n - 2)) / &k_rat;
        let drift = (&prev - &target) * &r;
        let lo = &drift - &prev * &s;
        let hi = drift + (&d - &prev) * &s + Rational::from_integer(2.into()) * &d / &k_rat;
        (lo, hi)
    };
    let bound = std::cmp::max(lo.abs(), hi.abs());

    Checkpoint {
        n,
        k: kn.clone(),
        count,
        density,
        target,
        sandwich,
        bound,
    }
}

/// Checkpoints `1..=n_max` of the summed density of `factors`.
pub fn sum_checkpoints(factors: &[&ValidatedSpec], n_max: usize) -> Result<Vec<Checkpoint>> {
    require_shared_schedule(factors)?;
    let depth = min_depth(factors);
    if n_max > depth {
        return Err(Error::depth(format!("checkpoint n = {n_max}"), format!("depth {depth}")));
    }
    Ok((1..=n_max).map(|n| sum_checkpoint(factors, n)).collect())
}

/// `d_{k_n}(S)` for `n = 1..=n_max`, each with its parity target and bounds.
pub fn checkpoint_densities(spec: &ValidatedSpec, n_max: usize) -> Result<Vec<Checkpoint>> {
    sum_checkpoints(&[spec], n_max)
}

/// Checkpoint-window estimates of liminf and limsup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityLimitsReport {
    pub n_burn: usize,
    pub n_max: usize,
    pub lower: Rational,
    pub upper: Rational,
    /// `min` and `max` over parities of the summed parameters.
    pub target_lower: Rational,
    pub target_upper: Rational,
    /// Largest checkpoint bound in the window; certifies both
    /// `|lower - target_lower|` and `|upper - target_upper|`.
    pub bound: Rational,
    pub checkpoints: Vec<Checkpoint>,
}

impl DensityLimitsReport {
    pub fn lower_error(&self) -> Rational {
        (&self.lower - &self.target_lower).abs()
    }

    pub fn upper_error(&self) -> Rational {
        (&self.upper - &self.target_upper).abs()
    }

    /// Both estimates lie within the certified bound of their targets.
    pub fn is_certified(&self) -> bool {
        self.lower_error() <= self.bound && self.upper_error() <= self.bound
    }

    /// Both estimates within `tol` of their targets.
    pub fn within(&self, tol: &Rational) -> bool {
        self.lower_error() <= *tol && self.upper_error() <= *tol
    }
}

/// Default burn-in: half the checkpoints, and never checkpoint 0.
pub fn default_burn(n_max: usize) -> usize {
    (n_max / 2).max(1)
}

/// Minimum and maximum of the summed checkpoint densities over
/// `n_burn..=n_max`. Works for one set (`factors = [S]`), a pair, or more.
pub fn extremal_density_estimates(
    factors: &[&ValidatedSpec],
    n_max: usize,
    n_burn: Option<usize>,
) -> Result<DensityLimitsReport> {
    require_shared_schedule(factors)?;
    if n_max < 2 {
        return Err(Error::depth(
            format!("estimates with n_max = {n_max}"),
            "at least two checkpoints (both parities) are needed",
        ));
    }
    let n_burn = n_burn.unwrap_or_else(|| default_burn(n_max));
    if n_burn == 0 || n_burn >= n_max {
        return Err(Error::InvalidArgument(format!(
            "burn-in {n_burn} must satisfy 1 <= n_burn < n_max = {n_max}"
        )));
    }
    let window: Vec<Checkpoint> = sum_checkpoints(factors, n_max)?
        .into_iter()
        .filter(|c| c.n >= n_burn)
        .collect();

    let lower = window.iter().map(|c| &c.density).min().cloned().expect("non-empty");
    let upper = window.iter().map(|c| &c.density).max().cloned().expect("non-empty");
    let bound = window.iter().map(|c| &c.bound).max().cloned().expect("non-empty");
    let odd = sum_params(factors, 1);
    let even = sum_params(factors, 2);
    let (target_lower, target_upper) = if odd <= even { (odd, even) } else { (even, odd) };

    Ok(DensityLimitsReport {
        n_burn,
        n_max,
        lower,
        upper,
        target_lower,
        target_upper,
        bound,
        checkpoints: window,
    })
}

/// Which half of the period `[k_{2j}, k_{2j+2})` a position falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeCase {
    /// `k_{2j} <= k < k_{2j+1}`, inside an `a1` block.
    One,
    /// `k_{2j+1} <= k < k_{2j+2}`, inside an `a2` block.
    Two,
}

impl EnvelopeCase {
    pub fn number(self) -> u8 {
        match self {
            EnvelopeCase::One => 1,
            EnvelopeCase::Two => 2,
        }
    }
}

/// Rational bounds on a density (or density sum) at one position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopePoint {
    pub k: BigUint,
    pub case: EnvelopeCase,
    pub j: usize,
    /// Offset inside the active block: `k_base + [m/a] <= k < k_base + [(m+1)/a]`.
    pub m: BigUint,
    pub lower: Rational,
    pub upper: Rational,
}

impl EnvelopePoint {
    pub fn contains(&self, value: &Rational) -> bool {
        self.lower <= *value && *value <= self.upper
    }
}

/// Schedule anchors and parameters of the active half-period.
struct Anchors<'a> {
    /// `k_{2j-1}` (case 1) or `k_{2j}` (case 2).
    previous: Rational,
    /// `k_{2j}` (case 1) or `k_{2j+1}` (case 2): where the active block starts.
    base: Rational,
    active: &'a Rational,
    finished: &'a Rational,
}

fn anchors(spec: &ValidatedSpec, case: EnvelopeCase, j: usize) -> Anchors<'_> {
    let (prev_idx, base_idx) = match case {
        EnvelopeCase::One => (2 * j - 1, 2 * j),
        EnvelopeCase::Two => (2 * j, 2 * j + 1),
    };
    Anchors {
        previous: from_uint(spec.k(prev_idx)),
        base: from_uint(spec.k(base_idx)),
        active: spec.param(base_idx + 1),
        finished: spec.param(base_idx),
    }
}

/// `(f_j(m), g_j(m))` in case 1 or `(f̃_j(m), g̃_j(m))` in case 2.
///
/// Case 1 reads
/// `f_j(m) = a1 (a2 (k_{2j} - k_{2j-1}) + m) / (a1 k_{2j} + 1 + m)` and
/// `g_j(m) = a1 (k_{2j-1} + a2 (k_{2j} - k_{2j-1}) + 1 + m) / (a1 k_{2j} - a1 + m)`;
/// case 2 swaps the roles of `a1`, `a2` and shifts the anchors by one.
/// Requires `j >= 1` in case 1 and `2j + 1 <= depth` in case 2.
pub fn single_envelope(
    spec: &ValidatedSpec,
    case: EnvelopeCase,
    j: usize,
    m: &BigUint,
) -> (Rational, Rational) {
    let Anchors {
        previous,
        base,
        active: a,
        finished: b,
    } = anchors(spec, case, j);
    let m = from_uint(m);
    let one = Rational::one();
    let span = &base - &previous;
    let lower = a * (b * &span + &m) / (a * &base + &one + &m);
    let upper = a * (&previous + b * &span + &one + &m) / (a * &base - a + &m);
    (lower, upper)
}

/// `(F_j(m), G_j(m))` in case 1 or `(F̃_j(m), G̃_j(m))` in case 2, bounding
/// `d_k(S) + d_k(T)` for `S, T` on one schedule. `m` is the offset in `S`'s
/// active block; `T`'s offset is eliminated through the coupling
/// `(b/a) m - b - 1 <= n <= (b/a) m + b/a + b`.
pub fn pair_envelope(
    s: &ValidatedSpec,
    t: &ValidatedSpec,
    case: EnvelopeCase,
    j: usize,
    m: &BigUint,
) -> (Rational, Rational) {
    let Anchors {
        previous,
        base,
        active: a,
        finished: a_done,
    } = anchors(s, case, j);
    let t_anchors = anchors(t, case, j);
    let b = t_anchors.active;
    let b_done = t_anchors.finished;

    let m = from_uint(m);
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let span = &base - &previous;
    let active_sum = a + b;
    let done_sum = a_done + b_done;

    let lower = (a * &done_sum * &span - a - a * b + &active_sum * &m) / (a * &base + &one + &m);
    // Case 2 needs the active parameter here too: k > k_{2j+1} + m/a2 - 1.
    let upper = (&two * a * &previous + a * &done_sum * &span + b + a * b + &two * a + &active_sum * &m)
        / (a * &base - a + &m);
    (lower, upper)
}

/// Locates `k` as `(case, j, m)`: `k_n <= k < k_{n+1}` with `n >= 2`.
fn locate(spec: &ValidatedSpec, k: &BigUint) -> Result<(EnvelopeCase, usize, BigUint)> {
    let depth = spec.depth();
    let out_of_range = || Error::OutOfEnvelopeRange {
        k: k.to_string(),
        low: if depth >= 2 { spec.k(2).to_string() } else { "k_2".into() },
        high: spec.horizon().to_string(),
    };
    if depth < 3 || k < spec.k(2) || k >= spec.horizon() {
        return Err(out_of_range());
    }
    let n = spec.schedule().partition_point(|kn| kn <= k) - 1;
    let (case, j) = if n % 2 == 0 {
        (EnvelopeCase::One, n / 2)
    } else {
        (EnvelopeCase::Two, (n - 1) / 2)
    };
    let m = spec.offset_in_block(n + 1, &(k - spec.k(n)));
    Ok((case, j, m))
}

/// Envelope of `d_k(S)` for `k_2 <= k < k_depth`.
pub fn envelope_bounds(spec: &ValidatedSpec, k: &BigUint) -> Result<EnvelopePoint> {
    let (case, j, m) = locate(spec, k)?;
    let (lower, upper) = single_envelope(spec, case, j, &m);
    Ok(EnvelopePoint {
        k: k.clone(),
        case,
        j,
        m,
        lower,
        upper,
    })
}

/// Envelope of `d_k(S) + d_k(T)` for two sets on the same schedule.
pub fn pair_envelope_bounds(s: &ValidatedSpec, t: &ValidatedSpec, k: &BigUint) -> Result<EnvelopePoint> {
    if !s.shares_schedule(t) {
        return Err(Error::ScheduleMismatch);
    }
    if k >= t.horizon() {
        return Err(Error::OutOfEnvelopeRange {
            k: k.to_string(),
            low: t.k(2.min(t.depth())).to_string(),
            high: t.horizon().to_string(),
        });
    }
    let (case, j, m) = locate(s, k)?;
    let (lower, upper) = pair_envelope(s, t, case, j, &m);
    Ok(EnvelopePoint {
        k: k.clone(),
        case,
        j,
        m,
        lower,
        upper,
    })
}

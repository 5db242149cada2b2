//! Finite products `E_{S_1} × ... × E_{S_d}` seen through dyadic cubes.
//!
//! A `k`-level dyadic cube meets the product iff each coordinate's first `k`
//! binary digits vanish off `S_i`, so exactly `2^{E_k}` cubes meet it with
//! `E_k = Σ_i #(S_i ∩ {1..k})`. Counts are kept as the exponent `E_k`.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::density::{extremal_density_estimates, DensityLimitsReport};
use crate::digit_sets::ValidatedSpec;
use crate::error::{Error, Result};
use crate::rational::{format_sig, show, to_f64, uint_ratio, Rational};

pub const COVERING_CSV_HEADER: &str = "k,exponent,quotient_num,quotient_den,quotient_float";

/// Ordered factors of a product; repetition allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpec {
    factors: Vec<Arc<ValidatedSpec>>,
}

impl ProductSpec {
    pub fn new(factors: Vec<Arc<ValidatedSpec>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("a product needs at least one factor".into()));
        }
        Ok(ProductSpec { factors })
    }

    pub fn from_specs<I: IntoIterator<Item = ValidatedSpec>>(specs: I) -> Result<Self> {
        Self::new(specs.into_iter().map(Arc::new).collect())
    }

    pub fn single(spec: ValidatedSpec) -> Self {
        ProductSpec {
            factors: vec![Arc::new(spec)],
        }
    }

    pub fn factors(&self) -> &[Arc<ValidatedSpec>] {
        &self.factors
    }

    /// Number of factors `d`.
    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    /// Largest `k` every factor can answer for.
    pub fn horizon(&self) -> &BigUint {
        self.factors
            .iter()
            .map(|f| f.horizon())
            .min()
            .expect("non-empty")
    }

    pub fn shares_schedule(&self) -> bool {
        let first = &self.factors[0];
        self.factors.iter().all(|f| f.shares_schedule(first))
    }

    /// `self × other`, factors concatenated.
    pub fn times(&self, other: &ProductSpec) -> ProductSpec {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        ProductSpec { factors }
    }

    /// The `d`-fold product `self^d`.
    pub fn power(&self, d: usize) -> Result<ProductSpec> {
        power_product(self, d)
    }

    /// Factors reordered as `order[0], order[1], ...`; `order` must be a
    /// permutation of `0..dimension()`.
    pub fn permuted(&self, order: &[usize]) -> Result<ProductSpec> {
        let mut seen = vec![false; self.factors.len()];
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
            }
        }
        if order.len() != seen.len() {
            return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
        }
        Ok(ProductSpec {
            factors: order.iter().map(|&i| self.factors[i].clone()).collect(),
        })
    }

    /// `E_k = Σ_i #(S_i ∩ {1..k})`: `2^{E_k}` cubes of side `2^{-k}` meet
    /// the product.
    pub fn covering_exponent(&self, k: &BigUint) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for f in &self.factors {
            total += f.count_prefix(k)?;
        }
        Ok(total)
    }

    pub fn covering_profile<I>(&self, ks: I) -> Result<CoveringProfile>
    where
        I: IntoIterator<Item = BigUint>,
    {
        let mut entries = Vec::new();
        for k in ks {
            if k.is_zero() {
                continue;
            }
            let exponent = self.covering_exponent(&k)?;
            let quotient = uint_ratio(&exponent, &k);
            entries.push(CoveringEntry { k, exponent, quotient });
        }
        Ok(CoveringProfile { entries })
    }

    /// Lower and upper dimension estimates from checkpoints
    /// `n_burn..=n_max` of `Σ_i d_{k_n}(S_i)`.
    pub fn dimension_report(&self, n_max: usize, n_burn: Option<usize>) -> Result<DimensionReport> {
        if !self.shares_schedule() {
            return Err(Error::ScheduleMismatch);
        }
        let refs: Vec<&ValidatedSpec> = self.factors.iter().map(|f| f.as_ref()).collect();
        let limits = extremal_density_estimates(&refs, n_max, n_burn)?;
        Ok(DimensionReport {
            dimension: self.dimension(),
            limits,
        })
    }

    /// `log μ(I_k) / log |I_k|` for the measure giving mass `2^{-E_k}` to
    /// each `k`-level cube, whose diameter is `√d · 2^{-k}`.
    pub fn billingsley_local_dimension(&self, k: &BigUint) -> Result<LocalDimension> {
        let exponent = self.covering_exponent(k)?;
        let d = self.dimension();
        let half_log2_d = 0.5 * (d as f64).log2();
        if k.is_zero() || k.to_f64().unwrap_or(f64::INFINITY) <= half_log2_d {
            return Err(Error::InvalidArgument(format!(
                "cube level {k} must exceed (1/2) log2 {d} so the diameter is below 1"
            )));
        }
        // For d = 2^t the correction is t/2 and the quotient stays rational.
        let exact = d.is_power_of_two().then(|| {
            let t = d.trailing_zeros() as i64;
            let k = Rational::from_integer(k.clone().into());
            Rational::from_integer(exponent.clone().into()) / (k - Rational::new(t.into(), 2.into()))
        });
        let value = match &exact {
            Some(q) => to_f64(q),
            None => {
                let naive = to_f64(&uint_ratio(&exponent, k));
                let k = k.to_f64().unwrap_or(f64::INFINITY);
                naive / (1.0 - half_log2_d / k)
            }
        };
        Ok(LocalDimension {
            exponent,
            k: k.clone(),
            dimension: d,
            value,
            exact,
        })
    }
}

/// The `d`-fold repetition of `prod`'s factor list. Its covering exponent is
/// `d` times the original at every `k`.
pub fn power_product(prod: &ProductSpec, d: usize) -> Result<ProductSpec> {
    if d == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let mut factors = Vec::with_capacity(prod.factors.len() * d);
    for _ in 0..d {
        factors.extend(prod.factors.iter().cloned());
    }
    Ok(ProductSpec { factors })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringEntry {
    pub k: BigUint,
    pub exponent: BigUint,
    /// `E_k / k`.
    pub quotient: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoveringProfile {
    pub entries: Vec<CoveringEntry>,
}

impl CoveringProfile {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{COVERING_CSV_HEADER}")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{}",
                e.k,
                e.exponent,
                e.quotient.numer(),
                e.quotient.denom(),
                format_sig(to_f64(&e.quotient), 12)
            )?;
        }
        Ok(())
    }
}

/// Dimension estimates for a product. The lower estimate stands for the
/// Hausdorff and lower box dimensions, the upper for packing and upper box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub dimension: usize,
    pub limits: DensityLimitsReport,
}

impl DimensionReport {
    pub fn lower(&self) -> &Rational {
        &self.limits.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.limits.upper
    }

    pub fn target_lower(&self) -> &Rational {
        &self.limits.target_lower
    }

    pub fn target_upper(&self) -> &Rational {
        &self.limits.target_upper
    }

    pub fn bound(&self) -> &Rational {
        &self.limits.bound
    }

    /// `(1/2) log2 d`, the shift between `E_k / k` and the Billingsley
    /// quotient. It vanishes relative to `k` and is left out of the estimates.
    pub fn metric_correction(&self) -> f64 {
        0.5 * (self.dimension as f64).log2()
    }

    pub fn render(&self) -> String {
        let l = &self.limits;
        let mut s = String::new();
        let _ = writeln!(s, "factors: {}", self.dimension);
        let _ = writeln!(s, "checkpoints: n = {}..={}", l.n_burn, l.n_max);
        let _ = writeln!(
            s,
            "lower (Hausdorff / lower box): {} (target {}, |error| {})",
            format_sig(to_f64(&l.lower), 12),
            show(&l.target_lower),
            format_sig(to_f64(&l.lower_error()), 6)
        );
        let _ = writeln!(
            s,
            "upper (packing / upper box):   {} (target {}, |error| {})",
            format_sig(to_f64(&l.upper), 12),
            show(&l.target_upper),
            format_sig(to_f64(&l.upper_error()), 6)
        );
        let _ = writeln!(s, "certified bound: {}", format_sig(to_f64(&l.bound), 6));
        let _ = writeln!(
            s,
            "metric correction (1/2) log2 d = {} (excluded from the estimates)",
            format_sig(self.metric_correction(), 6)
        );
        s
    }
}

/// Billingsley quotient at one cube level, with its exact ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDimension {
    pub exponent: BigUint,
    pub k: BigUint,
    pub dimension: usize,
    pub value: f64,
    /// `E_k / (k - t/2)` when `d = 2^t`; for `d = 1` this is `E_k / k`.
    pub exact: Option<Rational>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digit_sets::{DigitSetSpec, ScheduleSpec};
    use crate::rational::ratio;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn spec(a1: Rational, a2: Rational, depth: usize) -> ValidatedSpec {
        DigitSetSpec::new(ScheduleSpec::recurrence(5), a1, a2)
            .validate(depth)
            .unwrap()
    }

    fn demo_pair(depth: usize) -> ProductSpec {
        ProductSpec::from_specs([
            spec(ratio(1, 2), ratio(1, 4), depth),
            spec(ratio(1, 4), ratio(1, 3), depth),
        ])
        .unwrap()
    }

    #[test]
    fn covering_exponents() {
        let pair = demo_pair(6);
        assert_eq!(pair.covering_exponent(&big(30)).unwrap(), big(17));
        let single = ProductSpec::single(spec(ratio(1, 2), ratio(1, 4), 6));
        assert_eq!(single.covering_exponent(&big(10)).unwrap(), big(3));
        assert_eq!(pair.covering_exponent(&big(6)).unwrap(), big(0));
    }

    #[test]
    fn powers() {
        let pair = demo_pair(6);
        assert_eq!(pair.power(2).unwrap().covering_exponent(&big(30)).unwrap(), big(34));
        assert_eq!(pair.power(1).unwrap(), pair);
        assert_eq!(pair.power(3).unwrap().covering_exponent(&big(10)).unwrap(), big(15));
        assert!(pair.power(0).is_err());
    }

    #[test]
    fn permutations() {
        let pair = demo_pair(4);
        let swapped = pair.permuted(&[1, 0]).unwrap();
        for k in 1..=600u64 {
            let k = big(k);
            assert_eq!(pair.covering_exponent(&k).unwrap(), swapped.covering_exponent(&k).unwrap());
        }
        assert!(pair.permuted(&[0, 0]).is_err());
        assert!(pair.permuted(&[0]).is_err());
        assert!(pair.permuted(&[0, 2]).is_err());
    }

    #[test]
    fn dimension_reports() {
        let pair = demo_pair(60);
        let report = pair.dimension_report(60, Some(50)).unwrap();
        let tol = ratio(1, 50);
        assert_eq!(report.target_lower(), &ratio(7, 12));
        assert_eq!(report.target_upper(), &ratio(3, 4));
        assert!(report.limits.within(&tol) && *report.bound() <= tol);

        let s = spec(ratio(1, 2), ratio(1, 4), 60);
        let single = ProductSpec::single(s.clone());
        let report = single.dimension_report(60, Some(50)).unwrap();
        assert_eq!(report.target_lower(), &ratio(1, 4));
        assert!(report.limits.within(&tol));

        let square = single.power(2).unwrap().dimension_report(60, Some(50)).unwrap();
        assert_eq!(square.target_lower(), &ratio(1, 2));
        assert_eq!(square.target_upper(), &ratio(1, 1));
        assert!(square.limits.is_certified());
        assert!(square.lower() <= square.upper());
    }

    #[test]
    fn mixed_schedules_count_but_do_not_report() {
        let other = DigitSetSpec::new(ScheduleSpec::recurrence(7), ratio(1, 2), ratio(1, 2))
            .validate(4)
            .unwrap();
        let mixed = ProductSpec::from_specs([spec(ratio(1, 2), ratio(1, 4), 4), other]).unwrap();
        assert!(mixed.covering_exponent(&big(100)).is_ok());
        assert!(matches!(mixed.dimension_report(4, None), Err(Error::ScheduleMismatch)));
    }

    #[test]
    fn billingsley() {
        let pair = demo_pair(6);
        let local = pair.billingsley_local_dimension(&big(30)).unwrap();
        assert_eq!(local.exponent, big(17));
        assert_eq!(local.exact, Some(ratio(34, 59)));
        assert!((local.value - 17.0 / 29.5).abs() < 1e-12);

        let single = ProductSpec::single(spec(ratio(1, 2), ratio(1, 4), 6));
        let local = single.billingsley_local_dimension(&big(10)).unwrap();
        assert_eq!(local.exact, Some(ratio(3, 10)));

        let local = pair.billingsley_local_dimension(&big(3)).unwrap();
        assert_eq!(local.value, 0.0);

        let triple = pair.times(&ProductSpec::single(spec(ratio(1, 2), ratio(1, 4), 6)));
        let local = triple.billingsley_local_dimension(&big(30)).unwrap();
        assert!(local.exact.is_none());
        let expected = 25.0 / (30.0 - 0.5 * 3f64.log2());
        assert!((local.value - expected).abs() < 1e-12);
    }

    #[test]
    fn covering_csv() {
        let single = ProductSpec::single(spec(ratio(1, 2), ratio(1, 4), 3));
        let profile = single.covering_profile([big(0), big(10)]).unwrap();
        let mut out = Vec::new();
        profile.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "k,exponent,quotient_num,quotient_den,quotient_float\n10,3,3,10,0.3\n"
        );
    }
}

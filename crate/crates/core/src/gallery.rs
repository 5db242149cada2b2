//! Parameter constructions realizing prescribed product dimensions.
//!
//! Each construction picks two oscillating digit sets `S, T` on one schedule
//! and a power `d`, then takes `E = E_S^d`, `F = E_T^d`. The dimensions of
//! `E`, `F` and `E × F` are `d` times the min/max of the relevant parameter
//! pairs (or their pairwise sums), so each instance can be checked
//! symbolically and then estimated numerically from checkpoint densities.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::digit_sets::{DigitSetSpec, ScheduleSpec, ValidatedSpec};
use crate::error::{Error, Result};
use crate::product::{DimensionReport, ProductSpec};
use crate::rational::{abs_diff, floor_uint, format_sig, ratio, show, to_f64, Rational};

/// Tolerance for the counterexample report at desk scale.
pub fn remark_tolerance() -> Rational {
    ratio(1, 50)
}

/// Tolerance for numeric estimates of theorem instances.
pub fn theorem_tolerance() -> Rational {
    ratio(3, 100)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `dim_H E = α, dim_H F = β, dim_P F = γ, dim_H(E×F) = λ`.
    One,
    /// `dim_H E = α, dim_P F = β, dim_P E = γ, dim_P(E×F) = λ`.
    Two,
    /// Theorem two's sets, read with lower and upper box dimensions.
    Three,
}

impl Theorem {
    pub fn from_number(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Theorem::One),
            2 => Ok(Theorem::Two),
            3 => Ok(Theorem::Three),
            other => Err(Error::InvalidArgument(format!("theorem must be 1, 2 or 3, not {other}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Theorem::One => 1,
            Theorem::Two => 2,
            Theorem::Three => 3,
        }
    }

    /// Names of the four prescribed quantities, in `(α, β, γ, λ)` order.
    pub fn quantities(self) -> [&'static str; 4] {
        match self {
            Theorem::One => ["dim_H E", "dim_H F", "dim_P F", "dim_H(E x F)"],
            Theorem::Two => ["dim_H E", "dim_P F", "dim_P E", "dim_P(E x F)"],
            Theorem::Three => ["lower dim_B E", "upper dim_B F", "upper dim_B E", "upper dim_B(E x F)"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Targets {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub lambda: Rational,
}

impl Targets {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, lambda: Rational) -> Self {
        Targets {
            alpha,
            beta,
            gamma,
            lambda,
        }
    }

    fn as_array(&self) -> [&Rational; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.lambda]
    }
}

impl fmt::Display for Targets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={}, beta={}, gamma={}, lambda={}",
            show(&self.alpha),
            show(&self.beta),
            show(&self.gamma),
            show(&self.lambda)
        )
    }
}

/// A solved construction: `E = E_S^d`, `F = E_T^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremInstance {
    pub theorem: Theorem,
    pub targets: Targets,
    pub d: usize,
    pub s: (Rational, Rational),
    pub t: (Rational, Rational),
}

fn require(holds: bool, statement: &str) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::ConstraintViolated(statement.to_string()))
    }
}

/// Solves the construction for `theorem` with the smallest admissible `d`.
pub fn solve_theorem(theorem: Theorem, targets: Targets) -> Result<TheoremInstance> {
    let Targets {
        alpha,
        beta,
        gamma,
        lambda,
    } = &targets;
    for (name, v) in ["alpha", "beta", "gamma", "lambda"].iter().zip(targets.as_array()) {
        require(v.is_positive(), &format!("{name} > 0 (got {})", show(v)))?;
    }
    match theorem {
        Theorem::One => {
            require(beta <= gamma, "beta <= gamma")?;
            require(alpha + beta <= *lambda, "alpha + beta <= lambda")?;
            require(*lambda <= alpha + gamma, "lambda <= alpha + gamma")?;
        }
        Theorem::Two | Theorem::Three => {
            require(alpha <= gamma, "alpha <= gamma")?;
            require(alpha + beta <= *lambda, "alpha + beta <= lambda")?;
            require(*lambda <= gamma + beta, "lambda <= gamma + beta")?;
            if lambda <= gamma {
                return Err(Error::DegenerateLambda {
                    lambda: show(lambda),
                    gamma: show(gamma),
                });
            }
        }
    }

    // Smallest d with every target / d < 1; the derived entries
    // (lambda - beta)/d and (lambda - gamma)/d are then in (0, 1) as well.
    let largest = targets.as_array().into_iter().max().expect("four targets").clone();
    let d_big = floor_uint(&largest) + 1u32;
    let d: usize = d_big
        .try_into()
        .map_err(|_| Error::ConstraintViolated("targets too large for an ambient power".into()))?;
    let scale = Rational::from_integer(BigInt::from(d));
    let scaled = |x: Rational| x / &scale;

    let (s, t) = match theorem {
        Theorem::One => (
            (scaled(lambda - beta), scaled(alpha.clone())),
            (scaled(beta.clone()), scaled(gamma.clone())),
        ),
        Theorem::Two | Theorem::Three => (
            (scaled(alpha.clone()), scaled(gamma.clone())),
            (scaled(beta.clone()), scaled(lambda - gamma)),
        ),
    };
    let instance = TheoremInstance {
        theorem,
        targets,
        d,
        s,
        t,
    };
    debug_assert!(instance.params().iter().all(|p| crate::rational::in_open_unit(p)));
    Ok(instance)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicCheck {
    pub quantity: String,
    pub expected: Rational,
    pub realized: Rational,
}

impl SymbolicCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.realized
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// The estimate is certified, but the certificate is wider than the tolerance.
    Inconclusive,
    /// The estimate falls outside its own certified bound.
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericCheck {
    pub quantity: String,
    pub target: Rational,
    pub estimate: Rational,
    pub bound: Rational,
}

impl NumericCheck {
    pub fn error(&self) -> Rational {
        abs_diff(&self.estimate, &self.target)
    }

    pub fn verdict(&self, tolerance: &Rational) -> Verdict {
        let error = self.error();
        if error > self.bound {
            Verdict::Fail
        } else if error <= *tolerance && self.bound <= *tolerance {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactClaim {
    pub statement: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalleryReport {
    pub title: String,
    pub tolerance: Rational,
    pub symbolic: Vec<SymbolicCheck>,
    pub numeric: Vec<NumericCheck>,
    pub claims: Vec<ExactClaim>,
    pub notes: Vec<String>,
}

impl GalleryReport {
    /// Symbolic identities and exact claims hold, and no estimate escapes
    /// its certified bound.
    pub fn passed(&self) -> bool {
        self.symbolic.iter().all(SymbolicCheck::holds)
            && self.claims.iter().all(|c| c.holds)
            && self.numeric.iter().all(|c| c.verdict(&self.tolerance) != Verdict::Fail)
    }

    /// Every numeric estimate is certified within the tolerance.
    pub fn conclusive(&self) -> bool {
        self.numeric.iter().all(|c| c.verdict(&self.tolerance) == Verdict::Pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.title);
        let _ = writeln!(s, "{}", "=".repeat(self.title.chars().count()));
        if !self.symbolic.is_empty() {
            let _ = writeln!(s, "\nsymbolic checks (exact):");
            for c in &self.symbolic {
                let _ = writeln!(
                    s,
                    "  {:<22} expected {:<8} realized {:<8} {}",
                    c.quantity,
                    show(&c.expected),
                    show(&c.realized),
                    if c.holds() { "ok" } else { "MISMATCH" }
                );
            }
        }
        if !self.numeric.is_empty() {
            let _ = writeln!(
                s,
                "\nnumeric estimates (tolerance {}):",
                format_sig(to_f64(&self.tolerance), 6)
            );
            for c in &self.numeric {
                let verdict = match c.verdict(&self.tolerance) {
                    Verdict::Pass => "pass",
                    Verdict::Inconclusive => "inconclusive at this depth",
                    Verdict::Fail => "FAIL",
                };
                let _ = writeln!(
                    s,
                    "  {:<22} target {:<8} estimate {:<16} |error| {:<12} bound {:<12} {}",
                    c.quantity,
                    show(&c.target),
                    format_sig(to_f64(&c.estimate), 10),
                    format_sig(to_f64(&c.error()), 4),
                    format_sig(to_f64(&c.bound), 4),
                    verdict
                );
            }
        }
        if !self.claims.is_empty() {
            let _ = writeln!(s, "\nexact claims:");
            for c in &self.claims {
                let _ = writeln!(s, "  {} {}", c.statement, if c.holds { "holds" } else { "FAILS" });
            }
        }
        for note in &self.notes {
            let _ = writeln!(s, "\nnote: {note}");
        }
        let status = if !self.passed() {
            "FAIL"
        } else if self.conclusive() {
            "PASS"
        } else {
            "PASS (inconclusive at this depth)"
        };
        let _ = writeln!(s, "\nstatus: {status}");
        s
    }
}

fn min_of(p: &(Rational, Rational)) -> Rational {
    std::cmp::min(&p.0, &p.1).clone()
}

fn max_of(p: &(Rational, Rational)) -> Rational {
    std::cmp::max(&p.0, &p.1).clone()
}

fn sums(a: &(Rational, Rational), b: &(Rational, Rational)) -> (Rational, Rational) {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn numeric(quantity: &str, target: &Rational, estimate: &Rational, bound: &Rational) -> NumericCheck {
    NumericCheck {
        quantity: quantity.to_string(),
        target: target.clone(),
        estimate: estimate.clone(),
        bound: bound.clone(),
    }
}

impl TheoremInstance {
    pub fn params(&self) -> [&Rational; 4] {
        [&self.s.0, &self.s.1, &self.t.0, &self.t.1]
    }

    /// One recurrence schedule shared by `S` and `T`, with `k_0` adapted to
    /// the smallest parameter.
    pub fn schedule(&self) -> ScheduleSpec {
        ScheduleSpec::default_for(self.params())
    }

    pub fn specs(&self) -> (DigitSetSpec, DigitSetSpec) {
        let schedule = self.schedule();
        (
            DigitSetSpec::new(schedule.clone(), self.s.0.clone(), self.s.1.clone()),
            DigitSetSpec::new(schedule, self.t.0.clone(), self.t.1.clone()),
        )
    }

    /// The four prescribed quantities recomputed from the closed forms:
    /// min/max of each parameter pair (or of the pairwise sums for `E × F`),
    /// scaled by `d`.
    pub fn realized(&self) -> [Rational; 4] {
        let d = Rational::from_integer(BigInt::from(self.d));
        let st = sums(&self.s, &self.t);
        match self.theorem {
            Theorem::One => [
                &d * min_of(&self.s),
                &d * min_of(&self.t),
                &d * max_of(&self.t),
                &d * min_of(&st),
            ],
            Theorem::Two | Theorem::Three => [
                &d * min_of(&self.s),
                &d * max_of(&self.t),
                &d * max_of(&self.s),
                &d * max_of(&st),
            ],
        }
    }

    pub fn symbolic_checks(&self) -> Vec<SymbolicCheck> {
        self.theorem
            .quantities()
            .iter()
            .zip(self.targets.as_array())
            .zip(self.realized())
            .map(|((q, expected), realized)| SymbolicCheck {
                quantity: q.to_string(),
                expected: expected.clone(),
                realized,
            })
            .collect()
    }

    /// Checkpoint estimates for the four quantities on `E = E_S^d`, `F = E_T^d`.
    pub fn numeric_checks(&self, n_max: usize, n_burn: Option<usize>) -> Result<Vec<NumericCheck>> {
        if n_max < 2 {
            return Err(Error::depth(format!("n_max = {n_max}"), "at least 2 checkpoints"));
        }
        let (s, t) = self.specs();
        let s = ProductSpec::single(s.validate(n_max)?);
        let t = ProductSpec::single(t.validate(n_max)?);
        let e = s.power(self.d)?;
        let f = t.power(self.d)?;
        let ef = e.times(&f);
        let re = e.dimension_report(n_max, n_burn)?;
        let rf = f.dimension_report(n_max, n_burn)?;
        let ref_ = ef.dimension_report(n_max, n_burn)?;

        // (report, upper limit?) for each prescribed quantity.
        let picks: [(&DimensionReport, bool); 4] = match self.theorem {
            Theorem::One => [(&re, false), (&rf, false), (&rf, true), (&ref_, false)],
            Theorem::Two | Theorem::Three => [(&re, false), (&rf, true), (&re, true), (&ref_, true)],
        };
        Ok(self
            .theorem
            .quantities()
            .iter()
            .zip(self.targets.as_array())
            .zip(picks)
            .map(|((q, target), (report, upper))| {
                let estimate = if upper { report.upper() } else { report.lower() };
                numeric(q, target, estimate, report.bound())
            })
            .collect())
    }

    pub fn report(&self, n_max: usize) -> Result<GalleryReport> {
        let numeric = self.numeric_checks(n_max, None)?;
        let mut notes = vec![format!(
            "d = {}, S = ({}, {}), T = ({}, {}), schedule {}",
            self.d,
            show(&self.s.0),
            show(&self.s.1),
            show(&self.t.0),
            show(&self.t.1),
            self.schedule()
        )];
        if self.theorem == Theorem::One {
            let d = Rational::from_integer(BigInt::from(self.d));
            notes.push(format!(
                "dim_P E is not prescribed; this construction realizes {}",
                show(&(d * max_of(&self.s)))
            ));
        }
        Ok(GalleryReport {
            title: format!("Theorem {} instance: {}", self.theorem.number(), self.targets),
            tolerance: theorem_tolerance(),
            symbolic: self.symbolic_checks(),
            numeric,
            claims: Vec::new(),
            notes,
        })
    }
}

/// `S = S({k_n}, 1/2, 1/4)`, `T = S({k_n}, 1/4, 1/3)` on the default schedule.
pub fn remark1_specs(depth: usize) -> Result<(ValidatedSpec, ValidatedSpec)> {
    let (a, b) = ((ratio(1, 2), ratio(1, 4)), (ratio(1, 4), ratio(1, 3)));
    let schedule = ScheduleSpec::default_for([&a.0, &a.1, &b.0, &b.1]);
    let s = DigitSetSpec::new(schedule.clone(), a.0, a.1).validate(depth)?;
    let t = DigitSetSpec::new(schedule, b.0, b.1).validate(depth)?;
    Ok((s, t))
}

/// Two sets of Hausdorff dimension 1/4 whose product has dimension 7/12, so
/// `E = E_S ∪ E_T` has `dim_H(E × E) > 2 dim_H E`.
pub fn remark1_report(n_max: usize) -> Result<GalleryReport> {
    if n_max < 2 {
        return Err(Error::depth(format!("n_max = {n_max}"), "at least 2 checkpoints"));
    }
    let (s, t) = remark1_specs(n_max)?;
    let ps = ProductSpec::single(s.clone());
    let pt = ProductSpec::single(t.clone());
    let pair = ps.times(&pt);
    let rs = ps.dimension_report(n_max, None)?;
    let rt = pt.dimension_report(n_max, None)?;
    let rp = pair.dimension_report(n_max, None)?;

    let quarter = ratio(1, 4);
    let seven_twelfths = ratio(7, 12);
    let dim_s = min_of(&(s.a1().clone(), s.a2().clone()));
    let dim_t = min_of(&(t.a1().clone(), t.a2().clone()));
    let st = sums(&(s.a1().clone(), s.a2().clone()), &(t.a1().clone(), t.a2().clone()));
    let dim_pair = min_of(&st);
    let dim_union = std::cmp::max(&dim_s, &dim_t).clone();
    let twice = &dim_union * Rational::from_integer(2.into());

    let symbolic = vec![
        SymbolicCheck {
            quantity: "dim_H E_S".into(),
            expected: quarter.clone(),
            realized: dim_s.clone(),
        },
        SymbolicCheck {
            quantity: "dim_H E_T".into(),
            expected: quarter.clone(),
            realized: dim_t.clone(),
        },
        SymbolicCheck {
            quantity: "dim_H(E_S x E_T)".into(),
            expected: seven_twelfths.clone(),
            realized: dim_pair.clone(),
        },
        SymbolicCheck {
            quantity: "dim_P(E_S x E_T)".into(),
            expected: ratio(3, 4),
            realized: max_of(&st),
        },
    ];
    let numeric = vec![
        numeric("dim_H E_S", &quarter, rs.lower(), rs.bound()),
        numeric("dim_H E_T", &quarter, rt.lower(), rt.bound()),
        numeric("dim_H(E_S x E_T)", &seven_twelfths, rp.lower(), rp.bound()),
        numeric("dim_P(E_S x E_T)", &ratio(3, 4), rp.upper(), rp.bound()),
    ];
    let claims = vec![
        ExactClaim {
            statement: format!(
                "E = E_S u E_T: dim_H E = max{{{}, {}}} = {}",
                show(&dim_s),
                show(&dim_t),
                show(&dim_union)
            ),
            holds: dim_union == quarter,
        },
        ExactClaim {
            statement: format!(
                "dim_H(E x E) >= dim_H(E_S x E_T) = {} > {} = 2 dim_H E",
                show(&dim_pair),
                show(&twice)
            ),
            holds: dim_pair > twice,
        },
    ];
    debug_assert!(!(&dim_pair - &twice).is_zero());
    Ok(GalleryReport {
        title: "Product of two dimension-1/4 sets with dimension 7/12".into(),
        tolerance: remark_tolerance(),
        symbolic,
        numeric,
        claims,
        notes: vec![format!(
            "schedule {}, checkpoints n = {}..={}",
            s.spec().schedule,
            rs.limits.n_burn,
            n_max
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn targets(a: (i64, i64), b: (i64, i64), g: (i64, i64), l: (i64, i64)) -> Targets {
        Targets::new(ratio(a.0, a.1), ratio(b.0, b.1), ratio(g.0, g.1), ratio(l.0, l.1))
    }

    #[test]
    fn theorem_one_unit_scale() {
        let inst = solve_theorem(Theorem::One, targets((3, 10), (1, 5), (1, 2), (3, 5))).unwrap();
        assert_eq!(inst.d, 1);
        assert_eq!(inst.s, (ratio(2, 5), ratio(3, 10)));
        assert_eq!(inst.t, (ratio(1, 5), ratio(1, 2)));
        assert!(inst.symbolic_checks().iter().all(SymbolicCheck::holds));
        assert_eq!(inst.realized()[0], ratio(3, 10));
        assert_eq!(inst.realized()[3], ratio(3, 5));
    }

    #[test]
    fn theorem_one_needs_power_three() {
        let inst = solve_theorem(Theorem::One, targets((6, 5), (1, 2), (1, 1), (2, 1))).unwrap();
        assert_eq!(inst.d, 3);
        assert_eq!(inst.s, (ratio(1, 2), ratio(2, 5)));
        assert_eq!(inst.t, (ratio(1, 6), ratio(1, 3)));
        assert!(inst.symbolic_checks().iter().all(SymbolicCheck::holds));
    }

    #[test]
    fn theorem_two() {
        let inst = solve_theorem(Theorem::Two, targets((1, 5), (3, 10), (3, 5), (7, 10))).unwrap();
        assert_eq!(inst.d, 1);
        assert_eq!(inst.s, (ratio(1, 5), ratio(3, 5)));
        assert_eq!(inst.t, (ratio(3, 10), ratio(1, 10)));
        assert_eq!(inst.realized()[3], ratio(7, 10));
        assert_eq!(inst.realized()[1], ratio(3, 10));
        assert!(inst.symbolic_checks().iter().all(SymbolicCheck::holds));
        let three = solve_theorem(Theorem::Three, inst.targets.clone()).unwrap();
        assert_eq!((three.s.clone(), three.t.clone()), (inst.s, inst.t));
    }

    #[test]
    fn inadmissible_targets() {
        let err = solve_theorem(Theorem::Two, targets((1, 5), (3, 10), (3, 5), (1, 2))).unwrap_err();
        assert!(matches!(err, Error::DegenerateLambda { .. }), "{err}");
        let err = solve_theorem(Theorem::One, targets((1, 5), (1, 2), (1, 3), (1, 1))).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolated(ref s) if s == "beta <= gamma"));
        let err = solve_theorem(Theorem::One, targets((1, 5), (1, 5), (1, 3), (1, 5))).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolated(ref s) if s == "alpha + beta <= lambda"));
        let err = solve_theorem(Theorem::Three, targets((0, 1), (1, 5), (1, 3), (1, 5))).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolated(_)));
        assert!(Theorem::from_number(4).is_err());
    }

    #[test]
    fn boundary_d_is_strict() {
        // lambda = 2 exactly needs d = 3 so that lambda / d < 1.
        let inst = solve_theorem(Theorem::Two, targets((1, 2), (1, 1), (1, 1), (2, 1))).unwrap();
        assert_eq!(inst.d, 3);
    }

    #[test]
    fn theorem_report_is_conclusive_at_sixty() {
        let inst = solve_theorem(Theorem::One, targets((6, 5), (1, 2), (1, 1), (2, 1))).unwrap();
        let report = inst.report(60).unwrap();
        assert!(report.passed(), "{}", report.render());
        for c in &report.numeric {
            assert!(c.error() <= theorem_tolerance(), "{}", report.render());
        }
    }

    #[test]
    fn remark_report() {
        let report = remark1_report(60).unwrap();
        assert!(report.passed() && report.conclusive(), "{}", report.render());
        assert_eq!(report.numeric.len(), 4);
        assert!(report.claims.iter().all(|c| c.holds));

        let shallow = remark1_report(4).unwrap();
        assert!(shallow.passed());
        assert!(!shallow.conclusive());
        assert!(shallow.render().contains("inconclusive at this depth"));

        assert!(matches!(remark1_report(0), Err(Error::DepthExceeded { .. })));
    }
}

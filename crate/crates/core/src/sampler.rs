//! Truncated points of `∏ E_{S_i}` and empirical dyadic box counts.
//!
//! A point is stored as one numerator per coordinate over the common
//! denominator `2^K`; binary digit `p` (1-based) is bit `K - p` of the
//! numerator. Digits past `K` are zero, which leaves every `k`-level cube
//! with `k <= K` unchanged. Cube keys are the top `k` bits of each
//! coordinate, so no floating point is involved.

use std::collections::HashSet;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digit_sets::ValidatedSpec;
use crate::error::{Error, Result};
use crate::product::ProductSpec;

/// Default cap on fully enumerated points.
pub const DEFAULT_POINT_CAP: u64 = 1 << 20;

pub const BOX_COUNT_CSV_HEADER: &str = "k,empirical,analytic_exponent,match";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Every truncated point; box counts must match `2^{E_k}` exactly.
    Full,
    /// Independent fair digits on allowed positions; counts can only fall short.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    pub truncation: usize,
    pub dimension: usize,
    /// Coordinate numerators over `2^truncation`.
    pub points: Vec<Vec<BigUint>>,
    pub mode: SampleMode,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Cube of level `k` containing `point`: top `k` bits of each coordinate.
    fn cube_key(&self, point: &[BigUint], k: usize) -> Vec<BigUint> {
        let shift = self.truncation - k;
        point.iter().map(|x| x >> shift).collect()
    }

    /// Points lying in the `level`-cube `key`.
    pub fn restrict(&self, level: usize, key: &[BigUint]) -> Result<PointCloud> {
        self.check_level(level)?;
        let points = self
            .points
            .iter()
            .filter(|p| self.cube_key(p, level) == key)
            .cloned()
            .collect();
        Ok(PointCloud {
            points,
            ..self.clone()
        })
    }

    /// Distinct `level`-cubes met by the cloud.
    pub fn cubes(&self, level: usize) -> Result<HashSet<Vec<BigUint>>> {
        self.check_level(level)?;
        Ok(self.points.iter().map(|p| self.cube_key(p, level)).collect())
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.truncation {
            return Err(Error::LevelExceedsTruncation {
                level,
                truncation: self.truncation,
            });
        }
        Ok(())
    }

    /// `x1,...,xd` rows of exact dyadic strings `p/2^K`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.dimension).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x}/2^{}", self.truncation)).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Bit weights `2^{K-p}` of the allowed digit positions `p <= K`, most
/// significant first.
fn digit_weights(spec: &ValidatedSpec, truncation: usize) -> Result<Vec<BigUint>> {
    let positions = spec.enumerate_prefix(&BigUint::from(truncation))?;
    Ok(positions
        .iter()
        .map(|p| BigUint::one() << (truncation - p.to_usize().expect("p <= K")))
        .collect())
}

fn check_truncation(prod: &ProductSpec, truncation: usize) -> Result<()> {
    let k = BigUint::from(truncation);
    if &k > prod.horizon() {
        return Err(Error::depth(format!("truncation K = {truncation}"), prod.horizon()));
    }
    Ok(())
}

/// Every truncated point of the product, ordered lexicographically by digit
/// vectors (first coordinate most significant).
pub fn enumerate_points(prod: &ProductSpec, truncation: usize, cap: u64) -> Result<PointCloud> {
    check_truncation(prod, truncation)?;
    let exponent = prod.covering_exponent(&BigUint::from(truncation))?;
    let total = exponent
        .to_u32()
        .filter(|&e| e < 64)
        .map(|e| 1u64 << e)
        .filter(|&n| n <= cap);
    let Some(total) = total else {
        return Err(Error::CapExceeded {
            what: "full enumeration (use random sampling instead)".into(),
            needed: format!("2^{exponent}"),
            cap: cap.to_string(),
        });
    };

    // Each coordinate's values in increasing order: the value of a digit
    // vector read as a binary counter over the allowed positions.
    let mut axes = Vec::with_capacity(prod.dimension());
    for f in prod.factors() {
        let weights = digit_weights(f, truncation)?;
        let count = 1u64 << weights.len();
        let values: Vec<BigUint> = (0..count)
            .map(|mask| {
                weights
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> (weights.len() - 1 - i) & 1 == 1)
                    .map(|(_, w)| w.clone())
                    .sum()
            })
            .collect();
        axes.push(values);
    }

    let mut points = Vec::with_capacity(total as usize);
    let mut index = vec![0usize; axes.len()];
    loop {
        points.push(index.iter().zip(&axes).map(|(&i, axis)| axis[i].clone()).collect());
        // odometer, last coordinate fastest
        let mut pos = axes.len();
        loop {
            if pos == 0 {
                return Ok(PointCloud {
                    truncation,
                    dimension: prod.dimension(),
                    points,
                    mode: SampleMode::Full,
                });
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < axes[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }
}

/// `count` points with independent fair digits on allowed positions.
pub fn sample_points(prod: &ProductSpec, truncation: usize, count: usize, seed: u64) -> Result<PointCloud> {
    check_truncation(prod, truncation)?;
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let weights: Vec<Vec<BigUint>> = prod
        .factors()
        .iter()
        .map(|f| digit_weights(f, truncation))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| {
            weights
                .iter()
                .map(|ws| {
                    let mut x = BigUint::zero();
                    for w in ws {
                        if rng.gen::<bool>() {
                            x += w;
                        }
                    }
                    x
                })
                .collect()
        })
        .collect();
    Ok(PointCloud {
        truncation,
        dimension: prod.dimension(),
        points,
        mode: SampleMode::Random { seed },
    })
}

/// Number of distinct `k`-level dyadic cubes holding at least one point.
pub fn empirical_box_count(cloud: &PointCloud, k: usize) -> Result<u64> {
    Ok(cloud.cubes(k)?.len() as u64)
}

/// True iff every coordinate's digits vanish off its digit set.
pub fn digits_respect(prod: &ProductSpec, cloud: &PointCloud) -> Result<bool> {
    let masks: Vec<BigUint> = prod
        .factors()
        .iter()
        .map(|f| digit_weights(f, cloud.truncation).map(|ws| ws.into_iter().sum()))
        .collect::<Result<_>>()?;
    let limit = BigUint::one() << cloud.truncation;
    Ok(cloud.points.iter().all(|p| {
        p.len() == masks.len()
            && p.iter().zip(&masks).all(|(x, mask)| x < &limit && (x & mask) == *x)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    pub k: usize,
    pub empirical: u64,
    pub analytic_exponent: BigUint,
    /// Equality for full clouds, `empirical <= 2^E` for samples.
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub mode: SampleMode,
    pub points: usize,
    pub levels: Vec<LevelCheck>,
}

impl CrosscheckReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &LevelCheck> {
        self.levels.iter().filter(|l| !l.matches)
    }

    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{BOX_COUNT_CSV_HEADER}")?;
        for l in &self.levels {
            writeln!(out, "{},{},{},{}", l.k, l.empirical, l.analytic_exponent, l.matches)?;
        }
        Ok(())
    }
}

/// Compares empirical box counts of `cloud` with `2^{covering_exponent}` at
/// every level `0..=K`.
pub fn compare_counts(prod: &ProductSpec, cloud: &PointCloud) -> Result<CrosscheckReport> {
    let mut levels = Vec::with_capacity(cloud.truncation + 1);
    for k in 0..=cloud.truncation {
        let empirical = empirical_box_count(cloud, k)?;
        let analytic_exponent = prod.covering_exponent(&BigUint::from(k))?;
        // A u64 count can only reach 2^E when E < 64.
        let analytic = analytic_exponent.to_u32().filter(|&e| e < 64).map(|e| 1u64 << e);
        let matches = match (cloud.mode, analytic) {
            (SampleMode::Full, Some(a)) => empirical == a,
            (SampleMode::Full, None) => false,
            (SampleMode::Random { .. }, Some(a)) => empirical <= a,
            (SampleMode::Random { .. }, None) => true,
        };
        levels.push(LevelCheck {
            k,
            empirical,
            analytic_exponent,
            matches,
        });
    }
    Ok(CrosscheckReport {
        mode: cloud.mode,
        points: cloud.len(),
        levels,
    })
}

/// Full enumeration at truncation `K`, then exact comparison at every level.
pub fn crosscheck(prod: &ProductSpec, truncation: usize, cap: u64) -> Result<CrosscheckReport> {
    let cloud = enumerate_points(prod, truncation, cap)?;
    compare_counts(prod, &cloud)
}

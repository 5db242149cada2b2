//! Exact-arithmetic workbench for digit-restriction Cantor sets.
//!
//! A digit set `S ⊂ ℕ` defines `E_S ⊂ [0, 1]`, the numbers whose binary
//! digits vanish off `S`. The Hausdorff and packing dimensions of `E_S` (and
//! of finite products of such sets) are the lower and upper densities of the
//! digit sets involved. This crate builds the oscillating sets
//! `S({k_n}, a1, a2)`, computes their density sequences and dyadic covering
//! counts with big integers and exact rationals, and reproduces the
//! constructions showing that product dimensions can take every value the
//! classical product inequalities allow.

pub mod cli;
pub mod config;
pub mod density;
pub mod digit_sets;
pub mod error;
pub mod gallery;
pub mod product;
pub mod rational;
pub mod sampler;

pub use density::{
    checkpoint_densities, density, envelope_bounds, extremal_density_estimates,
    pair_envelope_bounds, Checkpoint, DensityLimitsReport, DensityProfile, EnvelopeCase,
    EnvelopePoint,
};
pub use digit_sets::{validate_spec, BlockTable, DigitSetSpec, ScheduleSpec, ValidatedSpec};
pub use error::{Error, Result};
pub use gallery::{remark1_report, solve_theorem, GalleryReport, Theorem, TheoremInstance, Targets};
pub use product::{CoveringProfile, DimensionReport, LocalDimension, ProductSpec};
pub use rational::Rational;
pub use sampler::{CrosscheckReport, PointCloud, SampleMode};

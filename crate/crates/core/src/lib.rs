//! Numerical free probability: transforms of discrete measures, freely
//! infinitely divisible laws, free convolution powers through subordination,
//! and density convergence experiments for triangular arrays.

pub mod convpow;
pub mod error;
pub mod freeid;
pub mod measures;
pub mod roots;
pub mod superconv;
pub mod transforms;

pub use convpow::ConvPow;
pub use error::{FreeError, Result};
pub use freeid::{AtomReport, DensityTable, FreeIdLaw, PhiSpec, StableParams};
pub use measures::{DiscreteMeasure, GeneratingPair, MomentVector, WeightedNodeSet};
pub use superconv::{ConvergenceReport, Scheme};

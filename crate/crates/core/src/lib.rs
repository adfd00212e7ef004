//! Lévy-process martingale transforms and the Fourier multipliers they
//! project to, on R^n and on the compact groups T1, T2 and SU(2).
//!
//! The numerical core is generic over the scalar (`f32` or `f64`) through
//! [`Scalar`]. The crate root re-exports `f64` instantiations of the main
//! types under the same names; the generic versions live in their modules.

pub mod apply;
pub mod constants;
pub mod error;
pub mod euclid;
pub mod group;
pub mod levy;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod sim;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use apply::ZeroMode;
pub use group::{GroupKind, IrrepLabel};
pub use verify::{Criterion, CriterionOutcome, VerifyOptions};

pub type Mat = linalg::Mat<f64>;
pub type CMat = linalg::CMat<f64>;
pub type LevyTriple = levy::LevyTriple<f64>;
pub type LevyMeasureRn = levy::LevyMeasureRn<f64>;
pub type BernsteinSpec = levy::BernsteinSpec<f64>;
pub type MultiplierSpec = euclid::MultiplierSpec<f64>;
pub type GroupElement = group::GroupElement<f64>;
pub type Irrep = group::Irrep<f64>;
pub type PeterWeylCoeffs = group::PeterWeylCoeffs<f64>;
pub type GroupLevyMeasure = group::GroupLevyMeasure<f64>;
pub type GridFunction = apply::GridFunction<f64>;
pub type GroupProcessSpec = sim::GroupProcessSpec<f64>;
pub type PathRecord = sim::PathRecord<f64>;
pub type MartingaleTranscript = sim::MartingaleTranscript<f64>;
pub type ConstantReport = constants::ConstantReport<f64>;

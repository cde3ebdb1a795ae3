//! Topological dynamics on one- and two-dimensional tori: rotations, the Weyl
//! skew product and a cocycle skew product, with bounded searches for
//! proximal, regionally proximal and AP-regionally proximal pairs, dynamical
//! parallelepipeds, and multiple ergodic averages.
//!
//! Phase-space coordinates are 128-bit fixed point ([`FixedAngle`]), so orbit
//! points and distances are exact. Real-valued quantities (cocycle values,
//! averages) are generic over [`Real`], with `f64` aliases below.

pub mod angle;
pub mod averages;
pub mod cocycle;
pub mod cubes;
mod error;
pub mod relations;
mod scalar;
pub mod sum;
pub mod system;
pub mod torus;

pub use angle::{FixedAngle, StrictBound};
pub use error::{Error, Result};
pub use scalar::Real;
pub use sum::{compensated_sum, CompensatedSum};
pub use system::{SystemDescription, SystemSpec, MAX_TIME};
pub use torus::{torus_dist, torus_dist_raw, TorusPoint};

pub type System = SystemSpec<f64>;
pub type System32 = SystemSpec<f32>;
pub type Cocycle = cocycle::CocycleParams<f64>;
pub type Cocycle32 = cocycle::CocycleParams<f32>;
pub type Series = averages::AverageSeries<f64>;
pub type Report = cocycle::DeviationReport<f64>;

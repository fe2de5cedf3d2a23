//! The assembled transform `A = B D H D'`, distortion checks and file formats.

mod distortion;
pub mod io;
mod plan;

pub use distortion::{check_jl, DistortionReport};
pub use plan::{FjltPlan, PointSet, SignVector};

//! Concentration experiments on the transform: tail curves over random
//! plans, exact l4-flattening and Rademacher-sum distributions, tail-shape
//! fits and timing.

mod bench;
mod coordinate;
pub mod csv;
mod fit;
mod flatten;
mod tail;
mod vectors;

pub use bench::{bench_apply, BenchRow};
pub use coordinate::{
    coordinate_tail_exact, coordinate_tail_exact_with_limit, hoeffding_bound, CoordinateTail,
    MAX_COORDINATE_LEN,
};
pub use fit::{fit_tail_constants, fit_tail_points, FittedConstants, TailModel};
pub use flatten::{flatten_tail, FlattenBin, FlattenDistribution, FlattenMode, MAX_EXHAUSTIVE_D};
pub use tail::{sample_norms, tail_estimate, TailCurve};
pub use vectors::{adversarial_vector, random_unit, VectorKind};

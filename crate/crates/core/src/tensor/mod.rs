//! Coordinate charts, dense covariant tensors, metrics and tensor algebra.

mod chart;
mod covariant;
mod metric;
pub mod ops;

pub use chart::Chart;
pub use covariant::{index_label, index_tuples, one_based, CovariantTensor, Symmetry};
pub use metric::MetricData;

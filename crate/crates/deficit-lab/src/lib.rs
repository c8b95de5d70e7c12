//! Quantitative stability of the spherical isoperimetric inequality for
//! zonal sets: perturbation families, deficits, distance to the nearest
//! cap, the `|log δ|^{−c}` bound tracker and the point-wise scans behind it.

pub mod error;
pub mod experiment;
pub mod family;
pub mod measure;
pub mod pipeline;
pub mod projection;
pub mod scans;

pub use error::{DeficitError, Result};
pub use experiment::{deficit_experiment, log_grid, DeltaKind, Experiment, ExperimentPoint};
pub use family::{make_perturbed_set, Family};
pub use measure::{deficit_measure, sym_diff, DeficitRecord, Pole};
pub use pipeline::{mn_bound_pipeline, trivial_threshold, PipelineConstants, PipelineTrace};
pub use projection::{linear_part, projection_distance_check, rounding, LinearPart, ProjectionCheck, Rounding};
pub use scans::{
    cap_measure_gap, hypothesis_h_scan, kernel_bound_scan, CapGapRow, HCell, HScan, KernelRow, KernelScan,
};

//! Diffusion `L = d²/dx² − V′ d/dx` on a truncated interval with weight
//! `e^{−V}`, for convex `V` with `κ ≤ V″ ≤ K`.

pub mod error;
pub mod functional;
pub mod operator;
pub mod potential;

pub use error::{LineError, Result};
pub use functional::{functional_report, stein_gap, FunctionalReport};
pub use operator::{discretize_generator, DiscreteOperator, Spectrum, WeightedLineMeasure, MASS_LOSS_TOL};
pub use potential::{Potential, PotentialTable};

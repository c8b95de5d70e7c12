//! Spectral Ornstein–Uhlenbeck machinery on the one-dimensional Gaussian space.
//!
//! Smooth functions live in the orthonormal Hermite basis of `L²(γ₁)`, where
//! `Q_t` multiplies the degree-`k` coefficient by `e^{−kt}`. Indicators and
//! other non-smooth data only enter through the Mehler kernel at `t > 0`.

pub mod engine;
pub mod error;
pub mod hermite;
pub mod mehler;

pub use engine::{GammaCalculus, GaussEngine, TransformInput, TransformOutput};
pub use error::{GaussError, Result};
pub use hermite::HermiteFunction;
pub use mehler::{mehler_apply, FlowGrid, MehlerData};

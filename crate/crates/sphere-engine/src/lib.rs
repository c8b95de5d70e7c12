//! Zonal heat flow on the model sphere `𝕊ⁿ` of radius `√(n−1)`.
//!
//! Rotation-invariant functions reduce to functions of the colatitude `θ`
//! with weight `sin^{n−1}θ`. They are expanded in the Gegenbauer
//! polynomials in `cos θ`, which are the zonal eigenfunctions of `Δ`.
//! Indicators of caps and bands have closed-form coefficients, so the heat
//! flow of a set is exact up to the chosen truncation.

pub mod bands;
pub mod basis;
pub mod engine;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod zonal;

pub use bands::BandSet;
pub use basis::GegenbauerBasis;
pub use engine::{SphereEngine, ZonalGamma, ZonalInput, ZonalOutput};
pub use error::{Result, SphereError};
pub use grid::{arc_jet, ArcJet, ThetaGrid};
pub use kernel::{heat_kernel_zonal, KernelSample};
pub use zonal::{eigenvalue, ZonalFunction};

//! Inequalities of positively curved diffusions turned into numerical
//! reports: commutation, local Poincaré and log-Sobolev chains, reverse
//! isoperimetry, the Bobkov flow, perimeter by heat flow, second-order
//! Poincaré, Stein gaps and half-space rigidity.

pub mod checks;
pub mod error;
pub mod flow;
pub mod report;
pub mod subject;

pub use checks::{
    c_kappa, check_commutation, check_l1_contraction, check_local_bounds, check_reverse_bobkov, check_reverse_iso,
    d_kappa, halfspace_flow_check, second_order_poincare_gauss, second_order_poincare_line,
    second_order_poincare_sphere, stein_gap, CommutationCheck, HalfspaceFit, LocalBounds, LocalKind, ReverseIso,
    SecondOrder, SpectrumSource,
};
pub use error::{LabError, Result};
pub use flow::{bobkov_flow, ergodic_time, flow_times, minkowski_content, perimeter_via_flow, PerimeterEstimate};
pub use report::{FlowTrace, InequalityReport, Verdict};
pub use subject::Subject;

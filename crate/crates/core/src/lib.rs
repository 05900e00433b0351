//! Numerical toolkit for the sharp trilinear commutator inequality on
//! (anti-)self-dual so(N)-valued 2-forms over flat R^4, the basic SU(2)
//! instanton, and the associated L2 gap thresholds.
//!
//! The crate is organized around a small set of value types:
//!
//! - [`AlgebraContext`] / [`LieElement`] — the matrix algebra so(N) with the
//!   scaled trace inner product `<A, B> = -c tr(AB)` and the quaternion basis
//!   of su(2) embedded in so(N).
//! - [`TwoForm`] — so(N)-valued 2-forms on oriented R^4 with Hodge star,
//!   duality projections, and the trilinear bracket functional.
//! - [`GaugeField`] / [`CurvatureField`] — closed-form fields on R^4, with
//!   finite-difference curvature and Yang-Mills residual oracles.
//! - [`QuatTriple`] — the quaternion normal form recovered by the equality
//!   classifier.
//! - [`GapReport`] — serializable verdicts for the gap-threshold evaluator.
//!
//! Everything is deterministic: random inputs come from explicit-seed
//! generators and all parallel reductions run in fixed order.

pub mod algebra;
pub mod error;
pub mod extremize;
pub mod forms;
pub mod gap;
pub mod instanton;
pub mod quadrature;
pub mod quat;
pub mod rng;

pub use algebra::{
    bracket_norm_constant, commutator_bound_margin, quaternion_basis, AlgebraContext, LieElement,
};
pub use error::Error;
pub use extremize::{
    component_norm_profile, maximize_ratio, maximize_ratio_opts, Classification, ExtremizeOptions,
    ExtremizerResult, TraceRow,
};
pub use forms::{
    gamma, random_form, trilinear, trilinear_gradient, trilinear_margin, Duality, TwoForm,
};
pub use gap::{
    bochner_equality_residual, bochner_inequality_margins, evaluate_gap_inequality, gap_threshold,
    instanton_radial_samples, sphere_volumes, yamabe_constant, ym_energy_grid, ym_energy_radial,
    BochnerSample, GapReport, GridEnergy, ModelSpace, ReportConfig, Verdict,
};
pub use instanton::{
    basic_connection, basic_curvature_closed, numeric_curvature, pointwise_equality_structure,
    theta, yang_mills_residual, CurvatureField, GaugeField, Point4,
};
pub use quat::{check_so3_basis, detect_quaternion_triple, Detection, QuatTriple, Rejection};
pub use rng::SplitMix64;

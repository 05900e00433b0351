//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Context construction rejected (N < 3 or c <= 0 or non-finite c).
    #[error("invalid algebra context: N = {n}, c = {c} (need N >= 3 and finite c > 0)")]
    InvalidContext { n: usize, c: f64 },

    /// A matrix handed to the algebra was not skew-symmetric.
    #[error("matrix is not skew-symmetric: defect {defect:.3e} exceeds {tol:.3e}")]
    NotSkew { defect: f64, tol: f64 },

    /// The quaternion embedding needs at least a 4x4 block.
    #[error("operation requires N >= 4, got N = {n}")]
    RequiresN4 { n: usize },

    /// An so(3)-specific operation was called with the wrong dimension.
    #[error("operation requires N = 3, got N = {n}")]
    RequiresN3 { n: usize },

    /// A form passed to a duality-restricted operation was neither
    /// self-dual nor anti-self-dual within tolerance.
    #[error(
        "form is neither self-dual nor anti-self-dual: defect {defect:.3e} \
         against norm {norm:.3e} (tolerance {tol:.1e} relative)"
    )]
    DualityViolation { defect: f64, norm: f64, tol: f64 },

    /// Generic parameter validation failure.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An adaptive quadrature did not settle within its refinement budget.
    #[error(
        "quadrature did not converge within budget: last two estimates \
         {previous:.12e} and {latest:.12e} (requested tolerance {tol:.1e})"
    )]
    QuadratureBudget {
        previous: f64,
        latest: f64,
        tol: f64,
    },

    /// The analytic trilinear gradient disagreed with finite differences.
    #[error(
        "trilinear gradient validation failed: relative deviation {deviation:.3e} \
         exceeds {tol:.1e} at probe {probe}"
    )]
    GradientValidation {
        deviation: f64,
        tol: f64,
        probe: usize,
    },
}

//! The matrix Lie algebra so(N) with the scaled trace inner product
//! `<A, B> = -c tr(AB)` and the quaternion basis of su(2) embedded in so(N).
//!
//! The embedded basis uses the left-multiplication representation of the
//! unit quaternions i, j, k on R^4 with basis order (1, i, j, k), padded by
//! zeros to N x N. Right multiplication would satisfy the same relations;
//! the left convention is fixed so that tests are deterministic.

use nalgebra::DMatrix;

use crate::error::Error;
use crate::rng::SplitMix64;

/// Relative skewness tolerance accepted at construction and restored by
/// [`LieElement::skew_symmetrized`] after long accumulation chains.
pub const SKEW_TOL: f64 = 1e-12;

/// Dimension N and inner-product scale c shared by all values of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraContext {
    n: usize,
    c: f64,
}

impl AlgebraContext {
    pub fn new(n: usize, c: f64) -> Result<Self, Error> {
        if n < 3 || c.is_nan() || c <= 0.0 || !c.is_finite() {
            return Err(Error::InvalidContext { n, c });
        }
        Ok(Self { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// An element of so(N): a real N x N skew-symmetric matrix tied to its
/// [`AlgebraContext`].
///
/// Values are immutable after construction. Mixing elements from different
/// contexts is a programming error and panics.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    ctx: AlgebraContext,
    mat: DMatrix<f64>,
}

impl LieElement {
    /// Wraps a matrix, requiring skewness within [`SKEW_TOL`] relative to
    /// its magnitude; the stored matrix is re-skewed to `(A - A^T)/2` so the
    /// invariant holds exactly afterwards.
    pub fn new(ctx: AlgebraContext, mat: DMatrix<f64>) -> Result<Self, Error> {
        if mat.nrows() != ctx.n || mat.ncols() != ctx.n {
            return Err(Error::InvalidInput(format!(
                "expected a {n} x {n} matrix, got {r} x {c}",
                n = ctx.n,
                r = mat.nrows(),
                c = mat.ncols()
            )));
        }
        let scale = mat.amax().max(1.0);
        let defect = (&mat + mat.transpose()).amax();
        if defect > SKEW_TOL * scale {
            return Err(Error::NotSkew {
                defect,
                tol: SKEW_TOL * scale,
            });
        }
        Ok(Self::new_unchecked(ctx, (&mat - mat.transpose()) * 0.5))
    }

    /// Internal constructor for matrices that are skew by construction.
    pub(crate) fn new_unchecked(ctx: AlgebraContext, mat: DMatrix<f64>) -> Self {
        Self { ctx, mat }
    }

    pub fn zero(ctx: AlgebraContext) -> Self {
        Self::new_unchecked(ctx, DMatrix::zeros(ctx.n, ctx.n))
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    fn assert_same_ctx(&self, other: &Self, op: &str) {
        assert!(
            self.ctx == other.ctx,
            "{op} across mismatched algebra contexts: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    /// `<A, B> = -c tr(AB)`; symmetric and positive-definite on skew matrices.
    pub fn inner(&self, other: &Self) -> f64 {
        self.assert_same_ctx(other, "inner product");
        let mut tr = 0.0;
        for i in 0..self.ctx.n {
            for k in 0..self.ctx.n {
                tr += self.mat[(i, k)] * other.mat[(k, i)];
            }
        }
        -self.ctx.c * tr
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Matrix commutator `AB - BA`. Skewness is exact: the floating-point
    /// entries of `AB - BA` satisfy antisymmetry term by term when A and B do.
    pub fn bracket(&self, other: &Self) -> Self {
        self.assert_same_ctx(other, "bracket");
        let ab = &self.mat * &other.mat;
        let ba = &other.mat * &self.mat;
        Self::new_unchecked(self.ctx, ab - ba)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new_unchecked(self.ctx, &self.mat * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ctx(other, "addition");
        Self::new_unchecked(self.ctx, &self.mat + &other.mat)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_ctx(other, "subtraction");
        Self::new_unchecked(self.ctx, &self.mat - &other.mat)
    }

    /// Conjugation `Q M Q^T`. The product of three matrices drifts off the
    /// skew subspace by rounding, so the result is re-skewed.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> Self {
        assert_eq!(q.nrows(), self.ctx.n, "conjugator has wrong dimension");
        assert_eq!(q.ncols(), self.ctx.n, "conjugator has wrong dimension");
        let m = q * &self.mat * q.transpose();
        Self::new_unchecked(self.ctx, (&m - m.transpose()) * 0.5)
    }

    /// Projects back onto the skew subspace: `(A - A^T)/2`.
    pub fn skew_symmetrized(&self) -> Self {
        Self::new_unchecked(self.ctx, (&self.mat - self.mat.transpose()) * 0.5)
    }

    /// Gaussian-entry random element: iid standard normal entries,
    /// skew-symmetrized.
    pub fn random(ctx: AlgebraContext, rng: &mut SplitMix64) -> Self {
        let mut mat = DMatrix::zeros(ctx.n, ctx.n);
        for r in 0..ctx.n {
            for c in 0..ctx.n {
                mat[(r, c)] = rng.next_gaussian();
            }
        }
        Self::new_unchecked(ctx, (&mat - mat.transpose()) * 0.5)
    }
}

/// The embedded quaternion basis (i, j, k) of su(2) in so(N), N >= 4.
///
/// Satisfies `i^2 = j^2 = k^2 = ijk = -diag(I_4, 0)` exactly (entries are
/// 0 and +/-1), and each basis vector has norm `2 sqrt(c)`.
pub fn quaternion_basis(
    ctx: AlgebraContext,
) -> Result<(LieElement, LieElement, LieElement), Error> {
    if ctx.n < 4 {
        return Err(Error::RequiresN4 { n: ctx.n });
    }
    // Left multiplication by i, j, k on (1, i, j, k): column m holds the
    // coordinates of i * e_m, etc.
    let i4 = [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ];
    let j4 = [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ];
    let k4 = [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ];
    let pad = |block: [[f64; 4]; 4]| {
        let mut m = DMatrix::zeros(ctx.n, ctx.n);
        for (r, row) in block.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        LieElement::new_unchecked(ctx, m)
    };
    Ok((pad(i4), pad(j4), pad(k4)))
}

/// The bracket-norm constant: `|[A, B]| <= bracket_norm_constant(ctx) |A| |B|` for all
/// skew A, B. Two regimes: `1/sqrt(2c)` for N = 3 and `1/sqrt(c)` for N >= 4;
/// the N = 3 constant fails on so(4) (the pair (i, j) exceeds it).
pub fn bracket_norm_constant(ctx: AlgebraContext) -> f64 {
    if ctx.n == 3 {
        1.0 / (2.0 * ctx.c).sqrt()
    } else {
        1.0 / ctx.c.sqrt()
    }
}

/// Slack in the bracket-norm bound: `bracket_norm_constant * |A| |B| - |[A, B]|`.
/// Nonnegative for every pair in one context.
pub fn commutator_bound_margin(a: &LieElement, b: &LieElement) -> f64 {
    a.assert_same_ctx(b, "commutator bound");
    bracket_norm_constant(a.ctx) * a.norm() * b.norm() - a.bracket(b).norm()
}

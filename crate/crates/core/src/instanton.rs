//! The basic SU(2) instanton on flat R^4: closed-form connection and
//! curvature, finite-difference exterior calculus as an independent oracle,
//! and pointwise equality-structure checks.
//!
//! The curvature convention is `F_ij = d_i A_j - d_j A_i + [A_i, A_j]`,
//! validated against the closed form (with the opposite sign on the bracket
//! the finite-difference oracle would not reproduce it).
//!
//! Finite differences here and in [`crate::gap`] are symmetric with stencil
//! width `h`: a first derivative reads `(f(x + h/2) - f(x - h/2)) / h`.
//! Both the truncation constant and the h^2 convergence order are measured
//! against that width.
//!
//! Fields are closed-form callables, not grids; grids appear only inside
//! quadrature and differencing.

use std::sync::Arc;

use crate::algebra::{quaternion_basis, AlgebraContext, LieElement};
use crate::error::Error;
use crate::forms::TwoForm;
use crate::quat::{detect_quaternion_triple, Detection};

/// A point of R^4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point4(pub [f64; 4]);

impl Point4 {
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    /// The point shifted by `delta` along coordinate `axis` (0-based).
    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut out = *self;
        out.0[axis] += delta;
        out
    }
}

type GaugeEval = dyn Fn(&Point4) -> [LieElement; 4] + Send + Sync;

/// A connection on R^4: four so(N)-valued components `A_1 .. A_4`.
/// Evaluation is pure and deterministic.
#[derive(Clone)]
pub struct GaugeField {
    ctx: AlgebraContext,
    eval: Arc<GaugeEval>,
}

impl GaugeField {
    pub fn new(
        ctx: AlgebraContext,
        eval: impl Fn(&Point4) -> [LieElement; 4] + Send + Sync + 'static,
    ) -> Self {
        Self {
            ctx,
            eval: Arc::new(eval),
        }
    }

    pub fn zero(ctx: AlgebraContext) -> Self {
        Self::new(ctx, move |_| std::array::from_fn(|_| LieElement::zero(ctx)))
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn eval(&self, x: &Point4) -> [LieElement; 4] {
        (self.eval)(x)
    }
}

/// A curvature field on R^4: an so(N)-valued 2-form at every point.
#[derive(Clone)]
pub struct CurvatureField {
    ctx: AlgebraContext,
    eval: Arc<dyn Fn(&Point4) -> TwoForm + Send + Sync>,
}

impl CurvatureField {
    pub fn new(
        ctx: AlgebraContext,
        eval: impl Fn(&Point4) -> TwoForm + Send + Sync + 'static,
    ) -> Self {
        Self {
            ctx,
            eval: Arc::new(eval),
        }
    }

    pub fn zero(ctx: AlgebraContext) -> Self {
        Self::new(ctx, move |_| TwoForm::zero(ctx))
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn eval(&self, x: &Point4) -> TwoForm {
        (self.eval)(x)
    }

    /// Globally gauge-rotated field: every component conjugated by `q`.
    pub fn conjugated(&self, q: nalgebra::DMatrix<f64>) -> Self {
        let inner = self.clone();
        Self::new(self.ctx, move |x| inner.eval(x).conjugated(&q))
    }
}

/// The three linear covector fields of the basic instanton, as components
/// against dx_1 .. dx_4:
///
/// ```text
/// theta_1 = x1 dx2 - x2 dx1 - x3 dx4 + x4 dx3
/// theta_2 = x1 dx3 - x3 dx1 + x2 dx4 - x4 dx2
/// theta_3 = x1 dx4 - x4 dx1 - x2 dx3 + x3 dx2
/// ```
pub fn theta(m: usize, x: &Point4) -> [f64; 4] {
    let [x1, x2, x3, x4] = x.0;
    match m {
        1 => [-x2, x1, x4, -x3],
        2 => [-x3, -x4, x1, x2],
        3 => [-x4, x3, -x2, x1],
        _ => panic!("theta index must be 1, 2 or 3, got {m}"),
    }
}

/// The basic instanton connection
/// `A = (1 + |x|^2)^-1 (theta_1 i + theta_2 j + theta_3 k)`.
pub fn basic_connection(ctx: AlgebraContext) -> Result<GaugeField, Error> {
    let (bi, bj, bk) = quaternion_basis(ctx)?;
    Ok(GaugeField::new(ctx, move |x| {
        let f = 1.0 / (1.0 + x.norm_sq());
        let t1 = theta(1, x);
        let t2 = theta(2, x);
        let t3 = theta(3, x);
        std::array::from_fn(|mu| {
            bi.scaled(f * t1[mu])
                .add(&bj.scaled(f * t2[mu]))
                .add(&bk.scaled(f * t3[mu]))
        })
    }))
}

/// The closed-form curvature of the basic instanton, with
/// `g = (1 + |x|^2)^-2`:
///
/// ```text
/// F_12 =  2g i   F_34 = -2g i
/// F_13 =  2g j   F_24 =  2g j
/// F_14 =  2g k   F_23 = -2g k
/// ```
///
/// Anti-self-dual under this crate's Hodge convention; the cancellation in
/// `sd_part` is algebraic, so `sd_part(F(x))` is exactly zero.
pub fn basic_curvature_closed(ctx: AlgebraContext) -> Result<CurvatureField, Error> {
    let (bi, bj, bk) = quaternion_basis(ctx)?;
    Ok(CurvatureField::new(ctx, move |x| {
        let s = 1.0 + x.norm_sq();
        let g2 = 2.0 / (s * s);
        TwoForm::new([
            bi.scaled(g2),
            bj.scaled(g2),
            bk.scaled(g2),
            bk.scaled(-g2),
            bj.scaled(g2),
            bi.scaled(-g2),
        ])
    }))
}

/// Curvature by second-order central differences of the connection:
/// `F_ij = d_i A_j - d_j A_i + [A_i, A_j]` with stencil width `h` (samples
/// at `x +/- h/2`). The independent oracle for [`basic_curvature_closed`].
pub fn numeric_curvature(a: &GaugeField, x: &Point4, h: f64) -> TwoForm {
    assert!(h > 0.0, "step must be positive");
    let a0 = a.eval(x);
    let half = 0.5 * h;
    let plus: [_; 4] = std::array::from_fn(|axis| a.eval(&x.shifted(axis, half)));
    let minus: [_; 4] = std::array::from_fn(|axis| a.eval(&x.shifted(axis, -half)));
    let inv = 1.0 / h;
    // d[i][j] = d_i A_j
    let deriv = |i: usize, j: usize| plus[i][j].sub(&minus[i][j]).scaled(inv);
    let comps = std::array::from_fn(|m| {
        let (i, j) = crate::forms::SLOT_PAIRS[m];
        let (i, j) = (i - 1, j - 1);
        deriv(i, j).sub(&deriv(j, i)).add(&a0[i].bracket(&a0[j]))
    });
    TwoForm::new(comps)
}

/// Yang-Mills residual `max_j | sum_i d_i F_ij + [A_i, F_ij] |` by central
/// differences; tends to zero at order h^2 when the pair `(a, f)` solves
/// the Yang-Mills equation.
pub fn yang_mills_residual(a: &GaugeField, f: &CurvatureField, x: &Point4, h: f64) -> f64 {
    assert!(h > 0.0, "step must be positive");
    let ctx = a.ctx();
    let a0 = a.eval(x);
    let f0 = f.eval(x);
    let half = 0.5 * h;
    let plus: [_; 4] = std::array::from_fn(|axis| f.eval(&x.shifted(axis, half)));
    let minus: [_; 4] = std::array::from_fn(|axis| f.eval(&x.shifted(axis, -half)));
    let inv = 1.0 / h;
    let mut worst = 0.0f64;
    for j in 0..4usize {
        let mut acc = LieElement::zero(ctx);
        for i in 0..4usize {
            if i == j {
                continue;
            }
            let df = plus[i]
                .component(i + 1, j + 1)
                .sub(&minus[i].component(i + 1, j + 1))
                .scaled(inv);
            acc = acc
                .add(&df)
                .add(&a0[i].bracket(&f0.component(i + 1, j + 1)));
        }
        worst = worst.max(acc.norm());
    }
    worst
}

/// Runs the quaternion-triple classifier on `(F_12, F_13, F_14)` at `x`.
/// For the basic instanton this recovers `|a_m| = 2 (1 + |x|^2)^-2`.
pub fn pointwise_equality_structure(
    f: &CurvatureField,
    x: &Point4,
    tol: f64,
) -> Result<Detection, Error> {
    let w = f.eval(x);
    detect_quaternion_triple(
        &w.component(1, 2),
        &w.component(1, 3),
        &w.component(1, 4),
        tol,
    )
}

//! Equality classification: decide whether a triple of so(N) values is
//! simultaneously orthogonally equivalent to multiples `(a1 i, a2 j, a3 k)`
//! of the embedded quaternion basis (N >= 4), or forms an orthogonal basis
//! of so(3) (N = 3).
//!
//! The detector is constructive so every step doubles as a certificate:
//! norms fix the magnitudes `a_m`, the su(2) structure constants are checked
//! on the commutators, `-M1^2 / a1^2` must be a rank-4 orthogonal projector
//! (the common invariant subspace), an adapted orthonormal basis of that
//! subspace is assembled into `Q`, and the final residual
//! `max_m |Q^T M_m Q - a_m e_m|` is verified directly.
//!
//! Signs are canonicalized so that `a1 >= 0` and `a2 >= 0`, with the
//! leftover sign carried by `a3`; simultaneous equivalence only determines
//! the triple up to the symmetries of the normal form.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{quaternion_basis, AlgebraContext, LieElement};
use crate::error::Error;
use crate::rng::SplitMix64;

/// Intermediate structure checks run at this multiple of the caller's
/// tolerance; the final residual is held to the tolerance itself.
const STRUCTURE_SLACK: f64 = 100.0;

/// A certified quaternion normal form: `Q^T M_m Q = a_m e_m` with
/// `(e1, e2, e3)` the embedded basis, up to `residual`.
#[derive(Debug, Clone)]
pub struct QuatTriple {
    /// Orthogonal change of basis (orthonormal within 1e-10).
    pub q: DMatrix<f64>,
    /// Multiplier per basis element; `a[0], a[1] >= 0`, `a[2]` signed.
    pub a: [f64; 3],
    /// Max over the three components of `|Q^T M_m Q - a_m e_m|`
    /// (Frobenius norm scaled by sqrt(c), matching the algebra norm on
    /// skew matrices).
    pub residual: f64,
}

impl QuatTriple {
    /// Rebuilds `(a1 i, a2 j, a3 k)` conjugated by `Q` — reproduces the
    /// detector inputs within `residual`.
    pub fn reconstruct(&self, ctx: AlgebraContext) -> Result<[LieElement; 3], Error> {
        let (i, j, k) = quaternion_basis(ctx)?;
        let qt = self.q.transpose();
        Ok([
            i.scaled(self.a[0]).conjugated_by(&self.q, &qt),
            j.scaled(self.a[1]).conjugated_by(&self.q, &qt),
            k.scaled(self.a[2]).conjugated_by(&self.q, &qt),
        ])
    }
}

impl LieElement {
    /// `Q M Q^T` with a precomputed transpose, re-skewed.
    fn conjugated_by(&self, q: &DMatrix<f64>, qt: &DMatrix<f64>) -> LieElement {
        let m = q * self.matrix() * qt;
        LieElement::new_unchecked(self.ctx(), (&m - m.transpose()) * 0.5)
    }
}

/// Why a triple failed classification; carries the first failed check.
#[derive(Debug, Clone)]
pub enum Rejection {
    /// Some component is numerically zero while another is not; no
    /// quaternion triple has that pattern.
    ZeroPattern { norms: [f64; 3] },
    /// A commutator deviated from the su(2) relation
    /// `[M_p, M_q] = +/- 2 (a_p a_q / a_r) M_r`.
    StructureConstant {
        pair: (usize, usize),
        deviation: f64,
    },
    /// `-M1^2 / a1^2` is not a rank-4 orthogonal projector.
    ProjectorRank { trace: f64, idempotency_defect: f64 },
    /// The adapted basis collapsed during orthonormalization.
    DegenerateBasis { step: usize },
    /// The assembled normal form missed the inputs.
    Residual { residual: f64, tol: f64 },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::ZeroPattern { norms } => {
                write!(f, "inconsistent zero pattern, norms {norms:?}")
            }
            Rejection::StructureConstant { pair, deviation } => write!(
                f,
                "commutator of components {} and {} off the su(2) relation by {deviation:.3e}",
                pair.0, pair.1
            ),
            Rejection::ProjectorRank {
                trace,
                idempotency_defect,
            } => write!(
                f,
                "invariant-subspace projector check failed: trace {trace:.6}, \
                 idempotency defect {idempotency_defect:.3e}"
            ),
            Rejection::DegenerateBasis { step } => {
                write!(f, "adapted basis degenerated at step {step}")
            }
            Rejection::Residual { residual, tol } => {
                write!(
                    f,
                    "final residual {residual:.3e} exceeds tolerance {tol:.3e}"
                )
            }
        }
    }
}

/// Outcome of [`detect_quaternion_triple`]. `NotEquivalent` is a valid
/// classification, not an error.
#[derive(Debug, Clone)]
pub enum Detection {
    Equivalent(QuatTriple),
    NotEquivalent(Rejection),
}

impl Detection {
    pub fn equivalent(&self) -> Option<&QuatTriple> {
        match self {
            Detection::Equivalent(t) => Some(t),
            Detection::NotEquivalent(_) => None,
        }
    }
}

fn gram_schmidt_step(v: &DVector<f64>, basis: &[DVector<f64>]) -> Option<DVector<f64>> {
    let mut w = v.clone();
    // Two passes for orthogonality at machine precision.
    for _ in 0..2 {
        for b in basis {
            let proj = w.dot(b);
            w -= b * proj;
        }
    }
    let n = w.norm();
    if n < 1e-10 {
        None
    } else {
        Some(w / n)
    }
}

/// Decides simultaneous orthogonal equivalence of `(m1, m2, m3)` to
/// `(a1 i, a2 j, a3 k)` within `tol` (absolute for unit-scale inputs,
/// scaled by the largest component norm otherwise).
pub fn detect_quaternion_triple(
    m1: &LieElement,
    m2: &LieElement,
    m3: &LieElement,
    tol: f64,
) -> Result<Detection, Error> {
    let ctx = m1.ctx();
    assert!(
        m2.ctx() == ctx && m3.ctx() == ctx,
        "detector inputs use mismatched algebra contexts"
    );
    if ctx.n() < 4 {
        return Err(Error::RequiresN4 { n: ctx.n() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let n = ctx.n();
    let c = ctx.c();
    let s2c = 2.0 * c.sqrt();
    let mats = [m1, m2, m3];
    let norms = [m1.norm(), m2.norm(), m3.norm()];
    // Magnitudes in basis units: |a_m| = |M_m| / (2 sqrt(c)).
    let a_mag = [norms[0] / s2c, norms[1] / s2c, norms[2] / s2c];
    let a_max = a_mag.iter().cloned().fold(0.0, f64::max);
    let residual_scale = tol * norms.iter().cloned().fold(1.0, f64::max);

    // The zero triple is the trivial normal form.
    if a_max <= tol {
        return Ok(Detection::Equivalent(QuatTriple {
            q: DMatrix::identity(n, n),
            a: [0.0; 3],
            residual: norms.iter().cloned().fold(0.0, f64::max),
        }));
    }
    // Mixed zero pattern cannot satisfy the su(2) relations.
    if a_mag.iter().any(|&a| a <= tol * a_max) {
        return Ok(Detection::NotEquivalent(Rejection::ZeroPattern { norms }));
    }

    // One shared sign sigma = sign(a1 a2 a3) governs all three relations
    // [M_p, M_q] = sigma * 2 (a_p a_q / a_r) M_r; estimate it from the
    // projection of [M1, M2] onto M3.
    let sigma = if m1.bracket(m2).inner(m3) >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let cyclic = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)];
    for &(p, q, r) in &cyclic {
        let coef = 2.0 * a_mag[p] * a_mag[q] / a_mag[r];
        let expected = mats[r].scaled(sigma * coef);
        let deviation = mats[p].bracket(mats[q]).sub(&expected).norm() / (coef * norms[r]);
        if deviation > STRUCTURE_SLACK * tol {
            return Ok(Detection::NotEquivalent(Rejection::StructureConstant {
                pair: (p + 1, q + 1),
                deviation,
            }));
        }
    }

    // Common invariant subspace: P = -M1^2 / a1^2 must be the orthogonal
    // projector onto the 4-dimensional quaternion block.
    let p_mat = -(m1.matrix() * m1.matrix()) / (a_mag[0] * a_mag[0]);
    let trace = p_mat.trace();
    let idem = (&p_mat * &p_mat - &p_mat).norm();
    if (trace - 4.0).abs() > STRUCTURE_SLACK * tol * 4.0 || idem > STRUCTURE_SLACK * tol * 4.0 {
        return Ok(Detection::NotEquivalent(Rejection::ProjectorRank {
            trace,
            idempotency_defect: idem,
        }));
    }

    // Adapted basis of range(P): v1 arbitrary unit vector in the range,
    // then v2 = M1 v1 / a1, v3 = M2 v1 / a2, v4 = M1 v3 / a1. Choosing the
    // images of M1 and M2 pins the signs of a1 and a2 to be nonnegative;
    // whatever sign remains lands on a3.
    let col = (0..n)
        .max_by(|&a, &b| {
            p_mat
                .column(a)
                .norm()
                .partial_cmp(&p_mat.column(b).norm())
                .unwrap()
        })
        .unwrap();
    let v1 = p_mat.column(col).clone_owned();
    let v1 = &v1 / v1.norm();
    let mut basis: Vec<DVector<f64>> = vec![v1.clone()];
    let images = [
        m1.matrix() * &v1 / a_mag[0],
        m2.matrix() * &v1 / a_mag[1],
        m1.matrix() * (m2.matrix() * &v1) / (a_mag[0] * a_mag[1]),
    ];
    for (step, img) in images.into_iter().enumerate() {
        match gram_schmidt_step(&img, &basis) {
            Some(v) => basis.push(v),
            None => {
                return Ok(Detection::NotEquivalent(Rejection::DegenerateBasis {
                    step: step + 2,
                }))
            }
        }
    }
    // Complete with an orthonormal basis of the complement.
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let e = DVector::from_fn(n, |r, _| if r == k { 1.0 } else { 0.0 });
        if let Some(v) = gram_schmidt_step(&e, &basis) {
            basis.push(v);
        }
    }
    if basis.len() != n {
        return Ok(Detection::NotEquivalent(Rejection::DegenerateBasis {
            step: basis.len(),
        }));
    }
    let q = DMatrix::from_columns(&basis);

    // Sign of a3 from the projection of Q^T M3 Q onto the k slot
    // (|e_k|_F^2 = 4).
    let (bi, bj, bk) = quaternion_basis(ctx)?;
    let qt = q.transpose();
    let b3 = &qt * m3.matrix() * &q;
    let mut proj = 0.0;
    for r in 0..4 {
        for s in 0..4 {
            proj += b3[(r, s)] * bk.matrix()[(r, s)];
        }
    }
    let a = [a_mag[0], a_mag[1], (proj / 4.0).signum() * a_mag[2]];

    let mut residual = 0.0f64;
    for (m, (basis_elem, am)) in mats.iter().zip([(&bi, a[0]), (&bj, a[1]), (&bk, a[2])]) {
        let diff = &qt * m.matrix() * &q - basis_elem.matrix() * am;
        residual = residual.max(c.sqrt() * diff.norm());
    }
    if residual > residual_scale {
        return Ok(Detection::NotEquivalent(Rejection::Residual {
            residual,
            tol: residual_scale,
        }));
    }
    Ok(Detection::Equivalent(QuatTriple { q, a, residual }))
}

/// For N = 3: true iff the three values are nonzero and pairwise orthogonal
/// under the algebra inner product (three such vectors necessarily span
/// so(3)). Nonzero means norm above `tol`; orthogonality is relative.
pub fn check_so3_basis(
    m1: &LieElement,
    m2: &LieElement,
    m3: &LieElement,
    tol: f64,
) -> Result<bool, Error> {
    let ctx = m1.ctx();
    assert!(
        m2.ctx() == ctx && m3.ctx() == ctx,
        "so(3) basis check inputs use mismatched algebra contexts"
    );
    if ctx.n() != 3 {
        return Err(Error::RequiresN3 { n: ctx.n() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mats = [m1, m2, m3];
    if mats.iter().any(|m| m.norm() <= tol) {
        return Ok(false);
    }
    for p in 0..3 {
        for q in (p + 1)..3 {
            let cos = mats[p].inner(mats[q]).abs() / (mats[p].norm() * mats[q].norm());
            if cos > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the R
/// diagonal sign fix. Deterministic for a fixed stream.
pub fn random_orthogonal(n: usize, rng: &mut SplitMix64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.next_gaussian());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

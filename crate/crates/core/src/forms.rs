//! so(N)-valued 2-forms on flat oriented R^4: Hodge star, duality
//! projections, norms, the trilinear bracket functional and its sharp
//! constant, and deterministic random-form generation.
//!
//! Index convention for the Hodge star in oriented orthonormal coordinates:
//!
//! ```text
//! (*w)_12 =  w_34   (*w)_13 = -w_24   (*w)_14 =  w_23
//! (*w)_34 =  w_12   (*w)_24 = -w_13   (*w)_23 =  w_14
//! ```
//!
//! This is the sign choice under which the curvature of the basic instanton
//! (see [`crate::instanton`]) comes out anti-self-dual, which pins the
//! convention against the one checkable reference computation.

use nalgebra::DMatrix;

use crate::algebra::{AlgebraContext, LieElement};
use crate::error::Error;
use crate::rng::SplitMix64;

/// Relative tolerance of the duality precondition in [`trilinear_margin`].
pub const DUALITY_TOL: f64 = 1e-10;

/// The six canonical component slots in order.
pub const SLOT_PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Eigenspaces of the Hodge star on 2-forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duality {
    SelfDual,
    AntiSelfDual,
}

impl Duality {
    /// Hodge eigenvalue: +1 for self-dual, -1 for anti-self-dual.
    pub fn sign(self) -> f64 {
        match self {
            Duality::SelfDual => 1.0,
            Duality::AntiSelfDual => -1.0,
        }
    }
}

/// A 2-form on R^4 with values in so(N), stored as the six components
/// `w_ij` for `1 <= i < j <= 4`. Access with swapped indices yields the
/// negated component; diagonal access yields zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    ctx: AlgebraContext,
    comps: [LieElement; 6],
}

/// Canonical slot for an ordered index pair: `(slot, sign)` with
/// `w_ij = sign * comps[slot]`. `None` on the diagonal.
fn slot_of(i: usize, j: usize) -> Option<(usize, f64)> {
    let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let m = match (lo, hi) {
        (1, 2) => 0,
        (1, 3) => 1,
        (1, 4) => 2,
        (2, 3) => 3,
        (2, 4) => 4,
        (3, 4) => 5,
        _ => return None,
    };
    Some((m, sign))
}

impl TwoForm {
    /// Assembles a form from its six canonical components, in the order of
    /// [`SLOT_PAIRS`]. All components must share one context.
    pub fn new(comps: [LieElement; 6]) -> Self {
        let ctx = comps[0].ctx();
        assert!(
            comps.iter().all(|m| m.ctx() == ctx),
            "two-form components use mismatched algebra contexts"
        );
        Self { ctx, comps }
    }

    pub fn zero(ctx: AlgebraContext) -> Self {
        Self {
            ctx,
            comps: std::array::from_fn(|_| LieElement::zero(ctx)),
        }
    }

    pub fn ctx(&self) -> AlgebraContext {
        self.ctx
    }

    /// Borrow canonical component `m` (order of [`SLOT_PAIRS`]).
    pub fn slot(&self, m: usize) -> &LieElement {
        &self.comps[m]
    }

    /// Component `w_ij` for 1-based indices: negated when `i > j`, zero on
    /// the diagonal. Indices outside 1..=4 panic.
    pub fn component(&self, i: usize, j: usize) -> LieElement {
        assert!(
            (1..=4).contains(&i) && (1..=4).contains(&j),
            "index out of range"
        );
        match slot_of(i, j) {
            None => LieElement::zero(self.ctx),
            Some((m, sign)) => {
                if sign > 0.0 {
                    self.comps[m].clone()
                } else {
                    self.comps[m].scaled(-1.0)
                }
            }
        }
    }

    /// Hodge star with the module's fixed index table. An involution.
    pub fn hodge(&self) -> Self {
        let c = &self.comps;
        Self {
            ctx: self.ctx,
            comps: [
                c[5].clone(),      // (*w)_12 =  w_34
                c[4].scaled(-1.0), // (*w)_13 = -w_24
                c[3].clone(),      // (*w)_14 =  w_23
                c[2].clone(),      // (*w)_23 =  w_14
                c[1].scaled(-1.0), // (*w)_24 = -w_13
                c[0].clone(),      // (*w)_34 =  w_12
            ],
        }
    }

    /// Self-dual part `(w + *w)/2`. The three dependent slots share the
    /// computed matrices exactly, so `hodge(sd_part(w)) == sd_part(w)`
    /// holds bitwise.
    pub fn sd_part(&self) -> Self {
        self.duality_part(Duality::SelfDual)
    }

    /// Anti-self-dual part `(w - *w)/2`.
    pub fn asd_part(&self) -> Self {
        self.duality_part(Duality::AntiSelfDual)
    }

    fn duality_part(&self, duality: Duality) -> Self {
        let s = duality.sign();
        let c = &self.comps;
        let p12 = c[0].add(&c[5].scaled(s)).scaled(0.5);
        let p13 = c[1].sub(&c[4].scaled(s)).scaled(0.5);
        let p14 = c[2].add(&c[3].scaled(s)).scaled(0.5);
        let p23 = p14.scaled(s);
        let p24 = p13.scaled(-s);
        let p34 = p12.scaled(s);
        Self {
            ctx: self.ctx,
            comps: [p12, p13, p14, p23, p24, p34],
        }
    }

    /// `|w - sign * (*w)|`: how far the form sits from the requested
    /// duality eigenspace.
    pub fn duality_defect(&self, duality: Duality) -> f64 {
        let other = self.duality_part(match duality {
            Duality::SelfDual => Duality::AntiSelfDual,
            Duality::AntiSelfDual => Duality::SelfDual,
        });
        2.0 * other.norm()
    }

    /// `|w|^2 = sum over i < j of |w_ij|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.comps.iter().map(|m| m.norm_sq()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Slotwise inner product of two forms in one context.
    pub fn form_inner(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .zip(other.comps.iter())
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            ctx: self.ctx,
            comps: std::array::from_fn(|m| self.comps[m].add(&other.comps[m])),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            ctx: self.ctx,
            comps: std::array::from_fn(|m| self.comps[m].scaled(s)),
        }
    }

    /// Conjugates every component by the same matrix `q`.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> Self {
        Self {
            ctx: self.ctx,
            comps: std::array::from_fn(|m| self.comps[m].conjugated(q)),
        }
    }
}

/// `tr(A B C) - tr(B A C)` contracted against the scaled inner product:
/// `<[A, B], C> = -c (tr(ABC) - tr(BAC))`.
fn bracket_inner(a: &DMatrix<f64>, b: &DMatrix<f64>, c_mat: &DMatrix<f64>, c: f64) -> f64 {
    let ab = a * b;
    let ba = b * a;
    let n = a.nrows();
    let mut tr = 0.0;
    for r in 0..n {
        for s in 0..n {
            tr += (ab[(r, s)] - ba[(r, s)]) * c_mat[(s, r)];
        }
    }
    -c * tr
}

/// The trilinear bracket functional
/// `T(w) = sum over ordered triples (i, j, k) of <[w_ij, w_jk], w_ki>`.
///
/// The sum runs over all ordered triples in 1..=4; triples with a repeated
/// index contribute zero (`w_ii = 0`) and are skipped.
pub fn trilinear(w: &TwoForm) -> f64 {
    let c = w.ctx().c();
    let mut total = 0.0;
    for i in 1..=4usize {
        for j in 1..=4usize {
            if j == i {
                continue;
            }
            for k in 1..=4usize {
                if k == i || k == j {
                    continue;
                }
                let (mi, si) = slot_of(i, j).unwrap();
                let (mj, sj) = slot_of(j, k).unwrap();
                let (mk, sk) = slot_of(k, i).unwrap();
                total += si
                    * sj
                    * sk
                    * bracket_inner(
                        w.slot(mi).matrix(),
                        w.slot(mj).matrix(),
                        w.slot(mk).matrix(),
                        c,
                    );
            }
        }
    }
    total
}

/// Gradient of [`trilinear`] with respect to the six canonical components,
/// under the form inner product: `dT(w)[eta] = form_inner(grad, eta)`.
///
/// By cyclicity of `<[A, B], C>` the derivative collapses to
/// `grad_ik = -6 sum over j of [w_ij, w_jk]` per canonical slot `(i, k)`.
pub fn trilinear_gradient(w: &TwoForm) -> TwoForm {
    let ctx = w.ctx();
    let comps = std::array::from_fn(|m| {
        let (i, k) = SLOT_PAIRS[m];
        let mut acc = DMatrix::zeros(ctx.n(), ctx.n());
        for j in 1..=4usize {
            if j == i || j == k {
                continue;
            }
            let (ma, sa) = slot_of(i, j).unwrap();
            let (mb, sb) = slot_of(j, k).unwrap();
            let br = w.slot(ma).bracket(w.slot(mb));
            acc += br.matrix() * (sa * sb);
        }
        LieElement::new_unchecked(ctx, acc * -6.0)
    });
    TwoForm::new(comps)
}

/// The sharp constant of the trilinear inequality
/// `|T(w)| <= gamma |w|^3` on (anti-)self-dual forms:
/// `4/sqrt(12 c)` for N = 3 and `4/sqrt(6 c)` for N >= 4.
pub fn gamma(ctx: AlgebraContext) -> f64 {
    if ctx.n() == 3 {
        4.0 / (12.0 * ctx.c()).sqrt()
    } else {
        4.0 / (6.0 * ctx.c()).sqrt()
    }
}

/// Slack in the sharp trilinear inequality: `gamma |w|^3 - |T(w)|`.
///
/// The bound only holds on the duality eigenspaces, so the input must be
/// self-dual or anti-self-dual within [`DUALITY_TOL`] relative; anything
/// else is rejected with the measured defect.
pub fn trilinear_margin(w: &TwoForm) -> Result<f64, Error> {
    let norm = w.norm();
    let defect = w
        .duality_defect(Duality::SelfDual)
        .min(w.duality_defect(Duality::AntiSelfDual));
    if defect > DUALITY_TOL * norm {
        return Err(Error::DualityViolation {
            defect,
            norm,
            tol: DUALITY_TOL,
        });
    }
    Ok(gamma(w.ctx()) * norm.powi(3) - trilinear(w).abs())
}

/// Deterministic random form: six components with iid standard-normal
/// entries, skew-symmetrized, then projected onto the requested duality
/// eigenspace (`None` leaves the form unprojected).
pub fn random_form(ctx: AlgebraContext, seed: u64, duality: Option<Duality>) -> TwoForm {
    let mut rng = SplitMix64::new(seed);
    random_form_from(ctx, &mut rng, duality)
}

/// As [`random_form`], drawing from a caller-owned stream. Sampling loops
/// use one derived stream per sample so partitioning does not change output.
pub fn random_form_from(
    ctx: AlgebraContext,
    rng: &mut SplitMix64,
    duality: Option<Duality>,
) -> TwoForm {
    let raw = TwoForm::new(std::array::from_fn(|_| LieElement::random(ctx, rng)));
    match duality {
        None => raw,
        Some(Duality::SelfDual) => raw.sd_part(),
        Some(Duality::AntiSelfDual) => raw.asd_part(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quaternion_basis;

    fn ctx(n: usize, c: f64) -> AlgebraContext {
        AlgebraContext::new(n, c).unwrap()
    }

    /// The self-dual quaternion form: w_12 = w_34 = a*i, w_13 = -w_24 = a*j,
    /// w_14 = w_23 = a*k.
    pub(crate) fn quaternion_form(ctx: AlgebraContext, a: f64) -> TwoForm {
        let (i, j, k) = quaternion_basis(ctx).unwrap();
        TwoForm::new([
            i.scaled(a),
            j.scaled(a),
            k.scaled(a),
            k.scaled(a),
            j.scaled(-a),
            i.scaled(a),
        ])
    }

    #[test]
    fn hodge_fixes_dual_pair_form() {
        let ctx = ctx(4, 1.0);
        let (i, _, _) = quaternion_basis(ctx).unwrap();
        let mut comps = std::array::from_fn(|_| LieElement::zero(ctx));
        comps[0] = i.clone();
        comps[5] = i.clone();
        let w = TwoForm::new(comps);
        assert_eq!(w.hodge(), w);
    }

    #[test]
    fn hodge_is_involution() {
        let ctx = ctx(5, 0.5);
        for seed in 0..1_000u64 {
            let w = random_form(ctx, seed, None);
            let ww = w.hodge().hodge();
            let diff = w.add(&ww.scaled(-1.0)).norm();
            assert!(diff <= 1e-14 * w.norm());
        }
    }

    #[test]
    fn duality_split_reassembles() {
        let ctx = ctx(4, 1.0);
        for seed in 0..100u64 {
            let w = random_form(ctx, seed, None);
            let back = w.sd_part().add(&w.asd_part());
            assert!(w.add(&back.scaled(-1.0)).norm() <= 1e-14 * w.norm());
            // Eigenspace membership is exact by construction.
            assert_eq!(w.sd_part().hodge(), w.sd_part());
            assert_eq!(w.asd_part().hodge(), w.asd_part().scaled(-1.0));
            // Orthogonal decomposition of the norm.
            let lhs = w.norm_sq();
            let rhs = w.sd_part().norm_sq() + w.asd_part().norm_sq();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
        }
    }

    #[test]
    fn hodge_eigenspaces_have_rank_three() {
        // Scalar coefficient matrix of the SD projector on the 6 slots.
        let mut proj = nalgebra::DMatrix::<f64>::zeros(6, 6);
        let ctx = ctx(4, 1.0);
        let (i, _, _) = quaternion_basis(ctx).unwrap();
        for m in 0..6 {
            let mut comps = std::array::from_fn(|_| LieElement::zero(ctx));
            comps[m] = i.clone();
            let sd = TwoForm::new(comps).sd_part();
            for r in 0..6 {
                // Coefficient of i in slot r, read off via the inner product.
                proj[(r, m)] = sd.slot(r).inner(&i) / i.norm_sq();
            }
        }
        assert_eq!(proj.rank(1e-12), 3);
        let asd = nalgebra::DMatrix::<f64>::identity(6, 6) - proj;
        assert_eq!(asd.rank(1e-12), 3);
    }

    #[test]
    fn norm_sq_of_quaternion_form() {
        let w = quaternion_form(ctx(4, 1.0), 2.0);
        assert!((w.norm_sq() - 24.0 * 4.0).abs() < 1e-12);
        assert_eq!(TwoForm::zero(ctx(4, 1.0)).norm_sq(), 0.0);
    }

    #[test]
    fn trilinear_on_quaternion_form() {
        let c = 1.0;
        let w = quaternion_form(ctx(4, c), 1.0);
        let t = trilinear(&w);
        assert!((t - 192.0).abs() < 1e-10, "T = {t}");
        let bound = gamma(w.ctx()) * w.norm().powi(3);
        assert!(
            (t - bound).abs() < 1e-9,
            "equality case: T = {t}, bound = {bound}"
        );
        // General scale: T = 192 c a^3.
        for (cc, a) in [(0.5, 1.5), (2.0, 0.3)] {
            let w = quaternion_form(ctx(6, cc), a);
            assert!((trilinear(&w) - 192.0 * cc * a.powi(3)).abs() < 1e-9);
            assert!(trilinear_margin(&w).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn trilinear_vanishes_on_single_dual_pair() {
        let ctx = ctx(4, 1.0);
        let (i, _, _) = quaternion_basis(ctx).unwrap();
        let mut comps = std::array::from_fn(|_| LieElement::zero(ctx));
        comps[0] = i.clone();
        comps[5] = i.scaled(1.0);
        let w = TwoForm::new(comps);
        assert_eq!(trilinear(&w), 0.0);
    }

    #[test]
    fn trilinear_reduces_to_single_term_on_dual_forms() {
        for (n, duality) in [
            (3, Duality::SelfDual),
            (4, Duality::SelfDual),
            (6, Duality::AntiSelfDual),
        ] {
            let ctx = ctx(n, 1.0);
            for seed in 0..1_000u64 {
                let w = random_form(ctx, seed, Some(duality));
                let t = trilinear(&w);
                let q = w
                    .component(1, 2)
                    .bracket(&w.component(2, 3))
                    .inner(&w.component(3, 1));
                let scale = gamma(ctx) * w.norm().powi(3);
                assert!(
                    (t - 24.0 * q).abs() <= 1e-12 * scale.max(1e-300),
                    "N = {n}: T = {t}, 24q = {}",
                    24.0 * q
                );
            }
        }
    }

    #[test]
    fn trilinear_scales_cubically() {
        let ctx = ctx(5, 1.0);
        let w = random_form(ctx, 11, Some(Duality::SelfDual));
        let t = trilinear(&w);
        for lam in [0.5, 2.0, -3.0] {
            let tl = trilinear(&w.scaled(lam));
            assert!((tl - lam.powi(3) * t).abs() <= 1e-12 * tl.abs().max(1.0));
        }
    }

    #[test]
    fn trilinear_is_conjugation_invariant() {
        let ctx = ctx(5, 0.5);
        let mut rng = SplitMix64::new(23);
        for _ in 0..50 {
            let w = random_form_from(ctx, &mut rng, None);
            let q = crate::quat::random_orthogonal(5, &mut rng);
            let t0 = trilinear(&w);
            let t1 = trilinear(&w.conjugated(&q));
            assert!((t0 - t1).abs() <= 1e-10 * t0.abs().max(1.0));
        }
    }

    #[test]
    fn trilinear_margin_nonnegative_on_random_dual_forms() {
        for n in [3usize, 4, 6] {
            for c in [0.5, 1.0] {
                let ctx = ctx(n, c);
                for seed in 0..2_000u64 {
                    let duality = if seed % 2 == 0 {
                        Duality::SelfDual
                    } else {
                        Duality::AntiSelfDual
                    };
                    let w = random_form(ctx, seed, Some(duality));
                    let margin = trilinear_margin(&w).unwrap();
                    let scale = gamma(ctx) * w.norm().powi(3);
                    assert!(margin >= -1e-12 * scale, "N = {n}, c = {c}, seed = {seed}");
                }
            }
        }
    }

    #[test]
    fn trilinear_margin_zero_cases() {
        let ctx = ctx(4, 1.0);
        assert_eq!(trilinear_margin(&TwoForm::zero(ctx)).unwrap(), 0.0);
        let w = quaternion_form(ctx, 1.0);
        assert!(trilinear_margin(&w).unwrap().abs() < 1e-9);
    }

    #[test]
    fn trilinear_margin_rejects_generic_forms() {
        let ctx = ctx(4, 1.0);
        let w = random_form(ctx, 5, None);
        match trilinear_margin(&w) {
            Err(Error::DualityViolation { defect, .. }) => assert!(defect > 0.0),
            other => panic!("expected duality violation, got {other:?}"),
        }
    }

    #[test]
    fn n3_gamma_is_violated_at_n4() {
        // The quaternion form at N = 4 has |T| = gamma_{N>=4} |w|^3, which
        // exceeds the N = 3 constant; the regime split in gamma is real.
        let ctx4 = ctx(4, 1.0);
        let w = quaternion_form(ctx4, 1.0);
        let gamma_n3 = 4.0 / 12.0f64.sqrt();
        assert!(trilinear(&w).abs() > gamma_n3 * w.norm().powi(3) + 1.0);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(ctx(3, 1.0)) - 4.0 / 12.0f64.sqrt()).abs() < 1e-15);
        assert!((gamma(ctx(4, 1.0)) - 4.0 / 6.0f64.sqrt()).abs() < 1e-15);
        assert!((gamma(ctx(7, 0.25)) - 8.0 / 6.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn random_form_is_deterministic() {
        let ctx = ctx(6, 1.0);
        let a = random_form(ctx, 77, Some(Duality::SelfDual));
        let b = random_form(ctx, 77, Some(Duality::SelfDual));
        assert_eq!(a, b);
        assert_eq!(a.hodge(), a);
        let c = random_form(ctx, 78, Some(Duality::SelfDual));
        assert_ne!(a, c);
    }
}

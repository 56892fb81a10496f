//! The canonical vector bundle `C(n, p)` as the Cartan model `S_p ⊂ SE(n)`.
//!
//! `σ(R, X) = (J R J, J X)` is an involutive automorphism of `SE(n)`. Its
//! twisted conjugation `a • g = a g σ(a)⁻¹` moves the identity along
//! `S_p = {(A J Aᵀ J, X − A J Aᵀ X)}`, and `ρ(R, Y) = (ρ₀(R), Y)` identifies
//! `S_p` with pairs `(π, Y)`, `Y ∈ π`. Under `ρ` the twisted action becomes
//! `(A, X) ∗ (π, Y) = (A π, A Y + 2 pr_{Aπ} X)`.

use crate::error::{ensure_dim, Error, Result};
use crate::grassmann::{
    cartan_embed0, dp_log0, rho0, CartanRotation, DpGenerator, Plane, Signature,
};
use crate::liegroup::{se_exp, se_inv, se_mul, y_omega_matrix, Motion, Rotation, Screw};
use crate::matcore::{complete_to_special_orthogonal, projector, svd, Frame, Mat, Vector};
use crate::tol::Tolerances;

/// A point `(π, Y)` of the canonical bundle: `Y` lies in `π`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint {
    plane: Plane,
    fiber: Vector,
}

impl BundlePoint {
    /// Requires `‖P Y − Y‖ ≤ tol.fiber · (‖Y‖ + 1)`.
    pub fn new(plane: Plane, fiber: Vector, tol: &Tolerances) -> Result<Self> {
        ensure_dim("fiber dimension", plane.n(), fiber.len())?;
        if fiber.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("fiber has non-finite entries".into()));
        }
        let residual = (plane.projector() * &fiber - &fiber).norm();
        if residual > tol.fiber * (fiber.norm() + 1.0) {
            return Err(Error::FiberNotInPlane { residual });
        }
        Ok(BundlePoint { plane, fiber })
    }

    /// The point with fiber `F c` for the plane's frame `F`.
    pub fn from_coordinates(plane: Plane, coords: &Vector) -> Result<Self> {
        ensure_dim("fiber coordinates", plane.p(), coords.len())?;
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("fiber has non-finite entries".into()));
        }
        let fiber = plane.frame().cols() * coords;
        Ok(BundlePoint { plane, fiber })
    }

    pub fn zero_section(plane: Plane) -> Self {
        let n = plane.n();
        BundlePoint {
            plane,
            fiber: Vector::zeros(n),
        }
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn fiber(&self) -> &Vector {
        &self.fiber
    }

    pub fn n(&self) -> usize {
        self.plane.n()
    }

    pub fn p(&self) -> usize {
        self.plane.p()
    }

    /// `sqrt(‖P_a − P_b‖_F² + ‖Y_a − Y_b‖²)`.
    pub fn distance(&self, other: &BundlePoint) -> f64 {
        let dp = (self.plane.projector() - other.plane.projector()).norm_squared();
        let dy = (&self.fiber - &other.fiber).norm_squared();
        (dp + dy).sqrt()
    }
}

/// An element `(R, Y)` of the Cartan model `S_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanMotion {
    motion: Motion,
    sig: Signature,
}

impl CartanMotion {
    /// Checks `σ(g) = g⁻¹`, that `R` lies in `S_p⁰` and that `R J Y = −Y`.
    pub fn new(motion: Motion, sig: Signature, tol: &Tolerances) -> Result<Self> {
        sig.check(motion.n())?;
        let scale = 1.0 + motion.trans().norm();
        let q_res = q_residual(&motion, &sig)?;
        if q_res > tol.invol * scale {
            return Err(Error::NotInCartanModel(format!(
                "sigma(g) != g^-1 (residual {q_res:e})"
            )));
        }
        CartanRotation::new(motion.rot().clone(), sig, tol)?;
        let y = motion.trans();
        let rjy = motion.rot().mat() * sig.apply(y);
        let fiber_res = (rjy + y).norm();
        if fiber_res > tol.invol * scale {
            return Err(Error::NotInCartanModel(format!(
                "translation is not in the (-1)-eigenspace of R J (residual {fiber_res:e})"
            )));
        }
        Ok(CartanMotion { motion, sig })
    }

    pub fn motion(&self) -> &Motion {
        &self.motion
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn into_motion(self) -> Motion {
        self.motion
    }

    fn cartan_rotation(&self, tol: &Tolerances) -> Result<CartanRotation> {
        CartanRotation::new(self.motion.rot().clone(), self.sig, tol)
    }
}

/// An element of `d_p ≅ d_p⁰ ⊕ R^p`: a generator `B` and coefficients of the
/// translation on `E_1, …, E_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpElement {
    gen: DpGenerator,
    v: Vector,
}

impl DpElement {
    pub fn new(gen: DpGenerator, v: Vector) -> Result<Self> {
        ensure_dim("d_p translation coefficients", gen.signature().p(), v.len())?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("coefficients are not finite".into()));
        }
        Ok(DpElement { gen, v })
    }

    pub fn zeros(sig: Signature) -> Self {
        DpElement {
            gen: DpGenerator::zeros(sig),
            v: Vector::zeros(sig.p()),
        }
    }

    pub fn generator(&self) -> &DpGenerator {
        &self.gen
    }

    pub fn coefficients(&self) -> &Vector {
        &self.v
    }

    pub fn signature(&self) -> Signature {
        self.gen.signature()
    }

    pub fn scale(&self, s: f64) -> DpElement {
        DpElement {
            gen: self.gen.scale(s),
            v: &self.v * s,
        }
    }

    /// The screw `([[0, −Bᵀ], [B, 0]], (v, 0))` in `se(n)`.
    pub fn embed(&self) -> Screw {
        let sig = self.signature();
        let mut x = Vector::zeros(sig.n());
        x.rows_mut(0, sig.p()).copy_from(&self.v);
        Screw::new(self.gen.embed(), x).expect("dimensions agree by construction")
    }

    pub fn distance(&self, other: &DpElement) -> f64 {
        let db = (self.gen.block() - other.gen.block()).norm_squared();
        let dv = (&self.v - &other.v).norm_squared();
        (db + dv).sqrt()
    }
}

/// `σ(R, X) = (J R J, J X)`.
pub fn sigma(g: &Motion, sig: &Signature) -> Result<Motion> {
    sig.check(g.n())?;
    Motion::new(
        Rotation::from_mat_unchecked(sig.conjugate(g.rot().mat())),
        sig.apply(g.trans()),
    )
}

/// `‖σ(g) · g − (I, 0)‖`.
pub fn q_residual(g: &Motion, sig: &Signature) -> Result<f64> {
    let prod = se_mul(&sigma(g, sig)?, g)?;
    Ok(prod.distance(&Motion::identity(g.n())))
}

/// Membership in `Q = {g : σ(g) = g⁻¹}`.
pub fn in_q(g: &Motion, sig: &Signature, tol: &Tolerances) -> Result<bool> {
    Ok(q_residual(g, sig)? <= tol.invol)
}

/// Both residuals behind [`is_fixed_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResiduals {
    /// `‖σ(g) − g‖`.
    pub involution: f64,
    /// `2 · sqrt(‖R_{pq}‖² + ‖R_{qp}‖² + ‖X_p‖²)`: off-diagonal rotation
    /// blocks and the first `p` translation entries.
    pub structural: f64,
}

pub fn fixed_point_residuals(g: &Motion, sig: &Signature) -> Result<FixedPointResiduals> {
    let involution = sigma(g, sig)?.distance(g);
    let (p, q) = (sig.p(), sig.q());
    let r = g.rot().mat();
    let off = r.view((0, p), (p, q)).norm_squared() + r.view((p, 0), (q, p)).norm_squared();
    let head = g.trans().rows(0, p).norm_squared();
    Ok(FixedPointResiduals {
        involution,
        structural: 2.0 * (off + head).sqrt(),
    })
}

/// Membership in the fixed subgroup `S(O(p) × O(q)) ⋉ R^q`.
///
/// Evaluates `σ(g) = g` and the block characterization independently and
/// fails with a numerical fault if they disagree away from the threshold.
pub fn is_fixed_point(g: &Motion, sig: &Signature, tol: &Tolerances) -> Result<bool> {
    let res = fixed_point_residuals(g, sig)?;
    let by_sigma = res.involution <= tol.invol;
    let by_blocks = res.structural <= tol.invol;
    if by_sigma != by_blocks && (res.involution - res.structural).abs() > 1e-12 {
        return Err(Error::NumericalFault(format!(
            "fixed-point tests disagree: sigma residual {:e}, block residual {:e}",
            res.involution, res.structural
        )));
    }
    Ok(by_sigma)
}

/// `(A, X) • (R, Y) = (A R J Aᵀ J, X + A Y − A R J Aᵀ X)`, cross-checked
/// against the group product `a · g · σ(a⁻¹)`.
pub fn twisted_act(a: &Motion, g: &Motion, sig: &Signature) -> Result<Motion> {
    sig.check(a.n())?;
    sig.check(g.n())?;
    let j = sig.matrix();
    let am = a.rot().mat();
    let arjaj = am * g.rot().mat() * &j * am.transpose() * &j;
    let x = a.trans();
    let trans = x + am * g.trans() - am * g.rot().mat() * &j * am.transpose() * x;
    let closed = Motion::new(Rotation::from_mat_unchecked(arjaj), trans)?;

    let routed = se_mul(&se_mul(a, g)?, &sigma(&se_inv(a), sig)?)?;
    let err = closed.distance(&routed);
    let scale = 1e-11 * sig.n() as f64 * (1.0 + x.norm() + g.trans().norm());
    if err > scale {
        return Err(Error::NumericalFault(format!(
            "twisted action routes differ by {err:e}"
        )));
    }
    Ok(closed)
}

/// `τ(g) = g σ(g⁻¹)`.
pub fn tau(g: &Motion, sig: &Signature, tol: &Tolerances) -> Result<CartanMotion> {
    sig.check(g.n())?;
    let s = se_mul(g, &sigma(&se_inv(g), sig)?)?;
    CartanMotion::new(s, *sig, tol)
        .map_err(|e| Error::NumericalFault(format!("tau left S_p: {e}")))
}

/// `X − A J Aᵀ X`, which equals `2 pr_{Aπ₀} X`; both sides are evaluated and
/// compared.
pub fn double_projection(a: &Rotation, x: &Vector, sig: &Signature) -> Result<Vector> {
    sig.check(a.n())?;
    ensure_dim("vector dimension", a.n(), x.len())?;
    let am = a.mat();
    let out = x - am * sig.matrix() * am.transpose() * x;
    let frame = Frame::from_orthonormal(am.columns(0, sig.p()).into_owned());
    let twice = projector(&frame) * x * 2.0;
    let err = (&out - twice).norm();
    if err > 1e-10 * (1.0 + x.norm()) {
        return Err(Error::NumericalFault(format!(
            "X - A J A^-1 X differs from 2 pr X by {err:e}"
        )));
    }
    Ok(out)
}

/// `ρ(R, Y) = (ρ₀(R), Y)`.
pub fn rho(s: &CartanMotion, tol: &Tolerances) -> Result<BundlePoint> {
    let plane = rho0(&s.cartan_rotation(tol)?, tol)?;
    BundlePoint::new(plane, s.motion().trans().clone(), tol)
        .map_err(|e| Error::NumericalFault(format!("rho produced an off-plane fiber: {e}")))
}

/// `ρ⁻¹(π, Y) = (A J Aᵀ J, Y)`.
pub fn rho_inv(b: &BundlePoint, tol: &Tolerances) -> Result<CartanMotion> {
    let r = cartan_embed0(b.plane(), tol)?;
    let sig = r.signature();
    let motion = Motion::new(r.into_rotation(), b.fiber().clone())?;
    CartanMotion::new(motion, sig, tol)
}

/// `(A, X) ∗ (π, Y) = (A π, A Y + 2 pr_{Aπ} X)`.
pub fn bundle_act(a: &Motion, b: &BundlePoint, tol: &Tolerances) -> Result<BundlePoint> {
    ensure_dim("motion dimension", b.n(), a.n())?;
    let plane = b.plane().image(a.rot())?;
    let fiber = a.rot().mat() * b.fiber() + plane.projector() * a.trans() * 2.0;
    BundlePoint::new(plane, fiber, tol)
}

/// A motion `g` with `g ∗ src = dst`.
///
/// The rotation carries the completed frame of `src` onto the completed
/// frame of `dst`; the translation is `(Y_dst − A Y_src)/2`, which already
/// lies in the target plane.
pub fn find_transporter(src: &BundlePoint, dst: &BundlePoint) -> Result<Motion> {
    ensure_dim("ambient dimension", src.n(), dst.n())?;
    ensure_dim("plane dimension", src.p(), dst.p())?;
    let a_src = complete_to_special_orthogonal(src.plane().frame());
    let a_dst = complete_to_special_orthogonal(dst.plane().frame());
    let a = a_dst * a_src.transpose();
    let x = (dst.fiber() - &a * src.fiber()) * 0.5;
    Motion::new(Rotation::from_mat_unchecked(a), x)
}

/// `exp(ξ)` for `ξ ∈ d_p`, cross-checked against `τ(exp(ξ/2))`.
pub fn dp_exp_full(xi: &DpElement, tol: &Tolerances) -> Result<CartanMotion> {
    let sig = xi.signature();
    let g = se_exp(&xi.embed(), tol)?;
    let half = se_exp(&xi.embed().scale(0.5), tol)?;
    let via_tau = tau(&half, &sig, tol)?;
    let err = via_tau.motion().distance(&g);
    if err > 1e-10 * (1.0 + g.trans().norm()) {
        return Err(Error::NumericalFault(format!(
            "exp and tau routes into S_p differ by {err:e}"
        )));
    }
    CartanMotion::new(g, sig, tol)
        .map_err(|e| Error::NumericalFault(format!("exponential of d_p left S_p: {e}")))
}

/// The element `ξ ∈ d_p` with `exp(ξ) = s`.
///
/// The generator comes from [`dp_log0`]; the coefficients solve the
/// restricted system `Y_ω(v_1 E_1 + … + v_p E_p) = Y` by least squares.
pub fn dp_log_full(s: &CartanMotion, tol: &Tolerances) -> Result<DpElement> {
    let sig = s.signature();
    let gen = dp_log0(&s.cartan_rotation(tol)?, tol)?;
    let p = sig.p();
    if p == 0 {
        return DpElement::new(gen, Vector::zeros(0));
    }
    let ymat = y_omega_matrix(&gen.embed(), tol)?;
    let restricted: Mat = ymat.columns(0, p).into_owned();
    let dec = svd(&restricted);
    let (smax, smin) = (dec.sigma.max(), dec.sigma.min());
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > 1e8 {
        return Err(Error::NearSingularIsomorphism { cond });
    }
    let y = s.motion().trans();
    // A⁺ y = V diag(1/σ²) Wᵀ y.
    let inv_sq = dec.sigma.map(|x| 1.0 / (x * x));
    let v = &dec.v * Mat::from_diagonal(&inv_sq) * dec.w.transpose() * y;
    let residual = (&restricted * &v - y).norm();
    if residual > 1e-8 * (1.0 + y.norm()) {
        return Err(Error::NumericalFault(format!(
            "restricted system residual {residual:e}"
        )));
    }
    DpElement::new(gen, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::plane_equal;
    use crate::matcore::basis_vector;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rot2(t: f64) -> Rotation {
        let (s, c) = t.sin_cos();
        Rotation::new(Mat::from_row_slice(2, 2, &[c, -s, s, c]), &tol()).unwrap()
    }

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn sigma_examples() {
        let sig = Signature::new(1, 2).unwrap();
        let x = v(&[1.0, 2.0, 3.0]);
        let g = Motion::from_translation(x.clone());
        assert_eq!(sigma(&g, &sig).unwrap(), Motion::from_translation(v(&[-1.0, 2.0, 3.0])));
        let g = Motion::new(
            Rotation::new(
                Mat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
                &tol(),
            )
            .unwrap(),
            x,
        )
        .unwrap();
        assert_eq!(sigma(&sigma(&g, &sig).unwrap(), &sig).unwrap(), g);
    }

    #[test]
    fn fixed_point_examples() {
        let sig = Signature::new(1, 2).unwrap();
        // blockdiag(A, B) with A = [−1], B = diag(−1, 1): det A · det B = 1.
        let r = Rotation::new(
            Mat::from_diagonal(&v(&[-1.0, -1.0, 1.0])),
            &tol(),
        )
        .unwrap();
        let g = Motion::new(r, v(&[0.0, 0.3, -2.0])).unwrap();
        assert!(is_fixed_point(&g, &sig, &tol()).unwrap());
        assert!(!is_fixed_point(&Motion::from_translation(basis_vector(3, 0)), &sig, &tol()).unwrap());

        let sig = Signature::new(1, 1).unwrap();
        for t in [0.3, 1.0, 2.0] {
            assert!(!is_fixed_point(&Motion::from_rotation(rot2(t)), &sig, &tol()).unwrap());
        }
        assert!(is_fixed_point(&Motion::from_rotation(rot2(PI)), &sig, &tol()).unwrap());
    }

    #[test]
    fn q_examples() {
        let sig = Signature::new(2, 1).unwrap();
        assert!(in_q(&Motion::identity(3), &sig, &tol()).unwrap());
        assert!(in_q(&Motion::from_translation(basis_vector(3, 0)), &sig, &tol()).unwrap());
        assert!(!in_q(&Motion::from_translation(basis_vector(3, 2)), &sig, &tol()).unwrap());
    }

    #[test]
    fn twisted_act_examples() {
        let sig = Signature::new(1, 1).unwrap();
        let g = Motion::new(rot2(0.7), v(&[0.2, 0.4])).unwrap();
        let id = Motion::identity(2);
        assert!(twisted_act(&id, &g, &sig).unwrap().distance(&g) < 1e-15);

        let a = Motion::new(rot2(0.4), v(&[1.0, -2.0])).unwrap();
        let out = twisted_act(&a, &id, &sig).unwrap();
        let j = sig.matrix();
        let ajaj = a.rot().mat() * &j * a.rot().mat().transpose() * &j;
        let x = a.trans();
        let expected_y = x - a.rot().mat() * &j * a.rot().mat().transpose() * x;
        assert_relative_eq!(out.rot().mat(), &ajaj, epsilon = 1e-15);
        assert_relative_eq!(out.trans(), &expected_y, epsilon = 1e-15);
    }

    #[test]
    fn tau_examples() {
        let sig = Signature::new(2, 1).unwrap();
        let x = v(&[1.0, 2.0, 3.0]);
        let s = tau(&Motion::from_translation(x), &sig, &tol()).unwrap();
        assert_eq!(s.motion(), &Motion::from_translation(v(&[2.0, 4.0, 0.0])));

        let sig = Signature::new(1, 1).unwrap();
        let s = tau(&Motion::from_rotation(rot2(0.6)), &sig, &tol()).unwrap();
        assert_relative_eq!(s.motion().rot().mat(), rot2(1.2).mat(), epsilon = 1e-15);
        assert_relative_eq!(s.motion().trans().norm(), 0.0);
    }

    #[test]
    fn double_projection_examples() {
        let sig = Signature::new(1, 2).unwrap();
        let x = v(&[1.0, 2.0, 3.0]);
        assert_eq!(double_projection(&Rotation::identity(3), &x, &sig).unwrap(), v(&[2.0, 0.0, 0.0]));
        let a = Rotation::new(
            Mat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
            &tol(),
        )
        .unwrap();
        // A π₀ = span(E_2); E_1 and E_3 are orthogonal to it.
        assert_relative_eq!(
            double_projection(&a, &v(&[1.0, 0.0, 5.0]), &sig).unwrap(),
            Vector::zeros(3),
            epsilon = 1e-15
        );
    }

    #[test]
    fn rho_examples() {
        let sig = Signature::new(1, 1).unwrap();
        let s = CartanMotion::new(Motion::identity(2), sig, &tol()).unwrap();
        let b = rho(&s, &tol()).unwrap();
        assert!(plane_equal(b.plane(), &Plane::standard(2, 1).unwrap(), &tol()).unwrap());
        assert_eq!(b.fiber(), &Vector::zeros(2));

        let t: f64 = 1.3;
        let dir = v(&[(t / 2.0).cos(), (t / 2.0).sin()]);
        let s = CartanMotion::new(Motion::new(rot2(t), &dir * 0.7).unwrap(), sig, &tol()).unwrap();
        let b = rho(&s, &tol()).unwrap();
        let line = crate::grassmann::plane_from_span(&Mat::from_column_slice(2, 1, dir.as_slice()), &tol()).unwrap();
        assert!(plane_equal(b.plane(), &line, &tol()).unwrap());
        let back = rho_inv(&b, &tol()).unwrap();
        assert!(back.motion().distance(s.motion()) < 1e-12);
    }

    #[test]
    fn rho_inv_examples() {
        let pi0 = Plane::standard(3, 2).unwrap();
        let s = rho_inv(&BundlePoint::zero_section(pi0.clone()), &tol()).unwrap();
        assert!(s.motion().distance(&Motion::identity(3)) < 1e-15);
        let y = v(&[0.5, -1.5, 0.0]);
        let s = rho_inv(&BundlePoint::new(pi0, y.clone(), &tol()).unwrap(), &tol()).unwrap();
        assert!(s.motion().distance(&Motion::from_translation(y)) < 1e-15);
    }

    #[test]
    fn bundle_point_requires_fiber_in_plane() {
        let pi0 = Plane::standard(3, 1).unwrap();
        assert!(matches!(
            BundlePoint::new(pi0, v(&[0.0, 1.0, 0.0]), &tol()),
            Err(Error::FiberNotInPlane { .. })
        ));
    }

    #[test]
    fn bundle_act_examples() {
        let pi0 = Plane::standard(3, 1).unwrap();
        let b = BundlePoint::new(pi0.clone(), v(&[2.0, 0.0, 0.0]), &tol()).unwrap();
        let out = bundle_act(&Motion::identity(3), &b, &tol()).unwrap();
        assert_eq!(out, b);
        let x = v(&[1.0, 2.0, 3.0]);
        let out = bundle_act(
            &Motion::from_translation(x),
            &BundlePoint::zero_section(pi0.clone()),
            &tol(),
        )
        .unwrap();
        assert!(plane_equal(out.plane(), &pi0, &tol()).unwrap());
        assert_eq!(out.fiber(), &v(&[2.0, 0.0, 0.0]));
    }

    #[test]
    fn transporter_examples() {
        let pi0 = Plane::standard(3, 2).unwrap();
        let src = BundlePoint::zero_section(pi0.clone());
        let g = find_transporter(&src, &src).unwrap();
        assert!(g.distance(&Motion::identity(3)) < 1e-15);

        let y = v(&[1.0, -2.0, 0.0]);
        let dst = BundlePoint::new(pi0.clone(), y.clone(), &tol()).unwrap();
        let g = find_transporter(&src, &dst).unwrap();
        assert_relative_eq!(g.trans(), &(y * 0.5), epsilon = 1e-15);
        assert!(plane_equal(&pi0.image(g.rot()).unwrap(), &pi0, &tol()).unwrap());
        let moved = bundle_act(&g, &src, &tol()).unwrap();
        assert!(moved.distance(&dst) < 1e-14);
    }

    #[test]
    fn dp_exp_full_examples() {
        let sig = Signature::new(1, 1).unwrap();
        let s = dp_exp_full(&DpElement::zeros(sig), &tol()).unwrap();
        assert_eq!(s.motion(), &Motion::identity(2));

        let xi = DpElement::new(
            DpGenerator::new(sig, Mat::from_element(1, 1, PI)).unwrap(),
            v(&[1.0]),
        )
        .unwrap();
        let s = dp_exp_full(&xi, &tol()).unwrap();
        assert_relative_eq!(s.motion().rot().mat(), &-Mat::identity(2, 2), epsilon = 1e-15);
        assert_relative_eq!(s.motion().trans()[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(s.motion().trans()[1], 2.0 / PI, epsilon = 1e-15);
    }

    #[test]
    fn dp_log_full_examples() {
        let sig = Signature::new(2, 1).unwrap();
        let s = CartanMotion::new(Motion::identity(3), sig, &tol()).unwrap();
        let xi = dp_log_full(&s, &tol()).unwrap();
        assert!(xi.distance(&DpElement::zeros(sig)) < 1e-15);

        // θ = π/2, λ = 1: Y = (2 sin(π/4)/(π/2)) (cos(π/4), sin(π/4)) = (2/π, 2/π).
        let sig = Signature::new(1, 1).unwrap();
        let y = v(&[2.0 / PI, 2.0 / PI]);
        let s = CartanMotion::new(Motion::new(rot2(FRAC_PI_2), y).unwrap(), sig, &tol()).unwrap();
        let xi = dp_log_full(&s, &tol()).unwrap();
        assert_relative_eq!(xi.generator().block()[(0, 0)], FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(xi.coefficients()[0], 1.0, epsilon = 1e-12);

        let s = CartanMotion::new(Motion::new(rot2(PI), v(&[0.0, 2.0 / PI])).unwrap(), sig, &tol()).unwrap();
        assert!(matches!(dp_log_full(&s, &tol()), Err(Error::CutLocus { .. })));
    }

    #[test]
    fn cartan_motion_rejects_off_fiber_translation() {
        let sig = Signature::new(1, 1).unwrap();
        let g = Motion::from_translation(basis_vector(2, 1));
        assert!(matches!(
            CartanMotion::new(g, sig, &tol()),
            Err(Error::NotInCartanModel(_))
        ));
    }
}

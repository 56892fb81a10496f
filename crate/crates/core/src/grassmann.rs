//! The Grassmannian `G(n, p)` and its Cartan model inside `SO(n)`.
//!
//! A plane is stored by its orthogonal projector, which is frame
//! independent; the orthonormal frame kept next to it is only a
//! representative. The Cartan model `S_p⁰` is the orbit of the identity
//! under the twisted conjugation `A • R = A R σ₀(A)⁻¹`, where
//! `σ₀(R) = J R J` and `J = diag(−I_p, I_q)`. A rotation `R` in `S_p⁰`
//! corresponds to the `(−1)`-eigenspace of the symmetric involution `R J`.

use crate::error::{ensure_dim, Error, Result};
use crate::liegroup::{so_exp, Rotation, SkewMatrix};
use crate::matcore::{
    complete_to_special_orthogonal, eigenspace_of_symmetric_involution, orthonormalize, projector,
    signature_matrix, singular_values, svd, symmetry_residual, Frame, Mat, Sign, Svd, Vector,
};
use crate::tol::Tolerances;

/// The split `n = p + q` and its matrix `J = diag(−I_p, I_q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::InvalidValue("signature with n = 0".into()));
        }
        Ok(Signature { p, q })
    }

    /// `J_{p, n−p}`.
    pub fn for_dim(n: usize, p: usize) -> Result<Self> {
        if p > n {
            return Err(Error::InvalidValue(format!("p = {p} exceeds n = {n}")));
        }
        Signature::new(p, n - p)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn matrix(&self) -> Mat {
        signature_matrix(self.p, self.q)
    }

    /// `J x`: negates the first `p` coordinates.
    pub fn apply(&self, x: &Vector) -> Vector {
        let mut y = x.clone();
        y.rows_mut(0, self.p).neg_mut();
        y
    }

    /// `J M J` by exact sign flips.
    pub fn conjugate(&self, m: &Mat) -> Mat {
        let p = self.p;
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
            if (i < p) != (j < p) {
                -m[(i, j)]
            } else {
                m[(i, j)]
            }
        })
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        ensure_dim("signature dimension", self.n(), n)
    }
}

/// A `p`-dimensional linear subspace of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    projector: Mat,
    frame: Frame,
}

impl Plane {
    pub fn from_frame(frame: Frame) -> Self {
        Plane {
            projector: projector(&frame),
            frame,
        }
    }

    /// The coordinate plane `π₀ = span(E_1, …, E_p)`.
    pub fn standard(n: usize, p: usize) -> Result<Self> {
        if p > n {
            return Err(Error::InvalidValue(format!("p = {p} exceeds n = {n}")));
        }
        Ok(Plane::from_frame(Frame::from_orthonormal(
            Mat::identity(n, n).columns(0, p).into_owned(),
        )))
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn p(&self) -> usize {
        self.frame.p()
    }

    pub fn projector(&self) -> &Mat {
        &self.projector
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn project(&self, x: &Vector) -> Result<Vector> {
        ensure_dim("vector dimension", self.n(), x.len())?;
        Ok(&self.projector * x)
    }

    /// The plane `A π`.
    pub fn image(&self, a: &Rotation) -> Result<Plane> {
        ensure_dim("rotation dimension", self.n(), a.n())?;
        Ok(Plane::from_frame(Frame::from_orthonormal(
            a.mat() * self.frame.cols(),
        )))
    }

    /// Checks the projector invariants and that the frame lies in the plane.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let p = &self.projector;
        let residual = symmetry_residual(p).max((p * p - p).norm());
        if residual > tol.orth {
            return Err(Error::NotOrthogonal { residual });
        }
        let trace_err = (p.trace() - self.p() as f64).abs();
        if trace_err > 1e-8 {
            return Err(Error::InvalidValue(format!(
                "projector trace off by {trace_err:e}"
            )));
        }
        let residual = (p * self.frame.cols() - self.frame.cols()).norm();
        if residual > tol.orth {
            return Err(Error::InvalidValue(format!(
                "frame leaves the plane by {residual:e}"
            )));
        }
        Ok(())
    }
}

/// The plane spanned by the columns of `vectors`.
pub fn plane_from_span(vectors: &Mat, tol: &Tolerances) -> Result<Plane> {
    Ok(Plane::from_frame(orthonormalize(vectors, tol)?))
}

/// Frame-independent equality: `‖P_a − P_b‖_F ≤ tol.plane`.
pub fn plane_equal(a: &Plane, b: &Plane, tol: &Tolerances) -> Result<bool> {
    ensure_dim("plane ambient dimension", a.n(), b.n())?;
    ensure_dim("plane dimension", a.p(), b.p())?;
    Ok(plane_distance(a, b) <= tol.plane)
}

/// `‖P_a − P_b‖_F`.
pub fn plane_distance(a: &Plane, b: &Plane) -> f64 {
    (a.projector() - b.projector()).norm()
}

/// `σ₀(R) = J R J`.
pub fn sigma0(r: &Rotation, sig: &Signature) -> Result<Rotation> {
    sig.check(r.n())?;
    Ok(Rotation::from_mat_unchecked(sig.conjugate(r.mat())))
}

/// `‖(R J)² − I‖_F`.
pub fn q0_residual(r: &Rotation, sig: &Signature) -> Result<f64> {
    sig.check(r.n())?;
    let rj = r.mat() * sig.matrix();
    Ok((&rj * &rj - Mat::identity(r.n(), r.n())).norm())
}

/// Membership in `Q₀ = {R : σ₀(R) = R⁻¹}`.
pub fn in_q0(r: &Rotation, sig: &Signature, tol: &Tolerances) -> Result<bool> {
    Ok(q0_residual(r, sig)? <= tol.invol)
}

/// `A • R = A R σ₀(A)⁻¹ = A R J Aᵀ J`.
pub fn twisted_act0(a: &Rotation, r: &Rotation, sig: &Signature) -> Result<Rotation> {
    sig.check(a.n())?;
    sig.check(r.n())?;
    let inv = sigma0(a, sig)?.inverse();
    a.compose(r)?.compose(&inv)
}

/// A rotation certified to lie in the Cartan model `S_p⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanRotation {
    rot: Rotation,
    sig: Signature,
}

impl CartanRotation {
    /// Requires `R J` to be a symmetric involution whose `(−1)`-eigenspace
    /// has dimension exactly `p`.
    pub fn new(rot: Rotation, sig: Signature, tol: &Tolerances) -> Result<Self> {
        sig.check(rot.n())?;
        let rj = rot.mat() * sig.matrix();
        let sym = symmetry_residual(&rj);
        if sym > tol.invol {
            return Err(Error::NotInCartanModel(format!(
                "R J is not symmetric (residual {sym:e})"
            )));
        }
        let inv = q0_residual(&rot, &sig)?;
        if inv > tol.invol {
            return Err(Error::NotInCartanModel(format!(
                "(R J)^2 != I (residual {inv:e})"
            )));
        }
        let dim = eigenspace_of_symmetric_involution(&rj, Sign::Minus, tol)?.p();
        if dim != sig.p() {
            return Err(Error::NotInCartanModel(format!(
                "(-1)-eigenspace of R J has dimension {dim}, expected {}",
                sig.p()
            )));
        }
        Ok(CartanRotation { rot, sig })
    }

    pub fn rot(&self) -> &Rotation {
        &self.rot
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn into_rotation(self) -> Rotation {
        self.rot
    }
}

/// `π ↦ A J Aᵀ J` with `A` the deterministic completion of the frame of `π`.
pub fn cartan_embed0(plane: &Plane, tol: &Tolerances) -> Result<CartanRotation> {
    let sig = Signature::for_dim(plane.n(), plane.p())?;
    let a = complete_to_special_orthogonal(plane.frame());
    let j = sig.matrix();
    let r = &a * &j * a.transpose() * &j;
    CartanRotation::new(Rotation::from_mat_unchecked(r), sig, tol)
}

/// The `(−1)`-eigenspace of `R J`.
pub fn rho0(r: &CartanRotation, tol: &Tolerances) -> Result<Plane> {
    let sig = r.signature();
    let rj = r.rot().mat() * sig.matrix();
    let frame = eigenspace_of_symmetric_involution(&rj, Sign::Minus, tol)?;
    if frame.p() != sig.p() {
        return Err(Error::NotInCartanModel(format!(
            "(-1)-eigenspace has dimension {}, expected {}",
            frame.p(),
            sig.p()
        )));
    }
    Ok(Plane::from_frame(frame))
}

/// An element of `d_p⁰ = span{E_i ∧ E_j : i ≤ p < j}`, stored as the
/// `q x p` block `B` of `[[0, −Bᵀ], [B, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpGenerator {
    sig: Signature,
    b: Mat,
}

impl DpGenerator {
    pub fn new(sig: Signature, b: Mat) -> Result<Self> {
        if b.shape() != (sig.q(), sig.p()) {
            return Err(Error::DimensionMismatch(format!(
                "generator block must be {}x{}, got {}x{}",
                sig.q(),
                sig.p(),
                b.nrows(),
                b.ncols()
            )));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("generator has non-finite entries".into()));
        }
        Ok(DpGenerator { sig, b })
    }

    pub fn zeros(sig: Signature) -> Self {
        DpGenerator {
            sig,
            b: Mat::zeros(sig.q(), sig.p()),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn block(&self) -> &Mat {
        &self.b
    }

    pub fn scale(&self, s: f64) -> DpGenerator {
        DpGenerator {
            sig: self.sig,
            b: &self.b * s,
        }
    }

    /// `[[0, −Bᵀ], [B, 0]] ∈ so(n)`.
    pub fn embed(&self) -> SkewMatrix {
        let (p, q) = (self.sig.p(), self.sig.q());
        let mut m = Mat::zeros(p + q, p + q);
        m.view_mut((p, 0), (q, p)).copy_from(&self.b);
        m.view_mut((0, p), (p, q)).copy_from(&(-self.b.transpose()));
        SkewMatrix::from_mat_unchecked(m)
    }
}

/// `exp` of a generator, certified to land in `S_p⁰`.
pub fn dp_exp(gen: &DpGenerator, tol: &Tolerances) -> Result<CartanRotation> {
    let r = so_exp(&gen.embed(), tol)?;
    CartanRotation::new(r, gen.signature(), tol).map_err(|e| {
        Error::NumericalFault(format!("exponential of a generator left S_p: {e}"))
    })
}

/// SVD of a wide matrix `M` through `Mᵀ = W Vᵀ`, roles swapped: `M = W' V'ᵀ`.
fn transposed_svd(m: &Mat) -> Svd {
    let t = svd(&m.transpose());
    let u = t.u();
    Svd {
        w: &t.v * Mat::from_diagonal(&t.sigma),
        sigma: t.sigma,
        v: u,
    }
}

/// Principal angles between `π₀` and `π`, in ascending order.
pub fn principal_angles_to_standard(plane: &Plane) -> Vec<f64> {
    let p = plane.p();
    if p == 0 {
        return vec![];
    }
    let top = plane.frame().cols().rows(0, p).into_owned();
    let mut angles: Vec<f64> = singular_values(&top)
        .iter()
        .map(|s| s.clamp(-1.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// The generator `B` with `dp_exp(B) = R`, built from the principal angles
/// `φ_i` between `π₀` and `ρ₀(R)`: the rotation angles are `θ_i = 2 φ_i`.
pub fn dp_log0(r: &CartanRotation, tol: &Tolerances) -> Result<DpGenerator> {
    let sig = r.signature();
    let (p, q) = (sig.p(), sig.q());
    if p == 0 || q == 0 {
        return Ok(DpGenerator::zeros(sig));
    }
    let plane = rho0(r, tol)?;
    let max_angle = principal_angles_to_standard(&plane)
        .last()
        .copied()
        .unwrap_or(0.0);
    if max_angle >= std::f64::consts::FRAC_PI_2 - tol.branch {
        return Err(Error::CutLocus { angle: max_angle });
    }
    let f = plane.frame().cols();
    let top = f.rows(0, p).into_owned();
    let bottom = f.rows(p, q).into_owned();
    let top_inv = top
        .try_inverse()
        .ok_or(Error::CutLocus { angle: max_angle })?;
    // π is the graph of M = bottom · top⁻¹ over π₀; its tangent of angles.
    let m = bottom * top_inv;
    // B = 2 U atan(S) Vᵀ = 2 (M V) diag(atan(s)/s) Vᵀ.
    let dec = if q >= p { svd(&m) } else { transposed_svd(&m) };
    let ratio = dec.sigma.map(|s| if s < 1e-8 { 1.0 - s * s / 3.0 } else { s.atan() / s });
    let b = &dec.w * Mat::from_diagonal(&ratio) * dec.v.transpose() * 2.0;
    DpGenerator::new(sig, b)
}

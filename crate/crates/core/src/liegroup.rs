//! The groups `SO(n)` and `SE(n)`, their Lie algebras and the closed-form
//! exponential and logarithm.
//!
//! The exponential works in the canonical basis of the skew part: each
//! rotating pair `(e_{2i−1}, e_{2i})` turns by `θ_i` and the translational
//! part picks up the half-angle factor `2 sin(θ_i/2)/θ_i` times a rotation
//! by `θ_i/2`, while fixed coordinates pass through unchanged.

use crate::error::{ensure_dim, Error, Result};
use crate::matcore::{
    canonical_rotation_form, canonical_skew_form, orthogonality_residual, skew_residual,
    CanonicalRotationForm, Mat, Vector,
};
use crate::tol::Tolerances;

/// An element of `SO(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    mat: Mat,
}

impl Rotation {
    pub fn new(mat: Mat, tol: &Tolerances) -> Result<Self> {
        ensure_dim("rotation columns", mat.nrows(), mat.ncols())?;
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("rotation has non-finite entries".into()));
        }
        let residual = orthogonality_residual(&mat);
        if residual > tol.orth {
            return Err(Error::NotOrthogonal { residual });
        }
        if mat.nrows() > 0 {
            let det = mat.determinant();
            if (det - 1.0).abs() > tol.orth {
                return Err(Error::NotSpecialOrthogonal { det });
            }
        }
        Ok(Rotation { mat })
    }

    pub fn identity(n: usize) -> Self {
        Rotation {
            mat: Mat::identity(n, n),
        }
    }

    /// Caller guarantees the matrix is in `SO(n)` up to roundoff.
    pub(crate) fn from_mat_unchecked(mat: Mat) -> Self {
        Rotation { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_inner(self) -> Mat {
        self.mat
    }

    pub fn inverse(&self) -> Rotation {
        Rotation {
            mat: self.mat.transpose(),
        }
    }

    pub fn compose(&self, other: &Rotation) -> Result<Rotation> {
        ensure_dim("rotation dimension", self.n(), other.n())?;
        Ok(Rotation {
            mat: &self.mat * &other.mat,
        })
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        ensure_dim("vector dimension", self.n(), x.len())?;
        Ok(&self.mat * x)
    }
}

/// An element `(R, X)` of `SE(n)`, acting by `x ↦ R x + X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Motion {
    rot: Rotation,
    trans: Vector,
}

impl Motion {
    pub fn new(rot: Rotation, trans: Vector) -> Result<Self> {
        ensure_dim("translation dimension", rot.n(), trans.len())?;
        if trans.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("translation has non-finite entries".into()));
        }
        Ok(Motion { rot, trans })
    }

    pub fn identity(n: usize) -> Self {
        Motion {
            rot: Rotation::identity(n),
            trans: Vector::zeros(n),
        }
    }

    pub fn from_rotation(rot: Rotation) -> Self {
        let n = rot.n();
        Motion {
            rot,
            trans: Vector::zeros(n),
        }
    }

    pub fn from_translation(trans: Vector) -> Self {
        Motion {
            rot: Rotation::identity(trans.len()),
            trans,
        }
    }

    pub fn n(&self) -> usize {
        self.rot.n()
    }

    pub fn rot(&self) -> &Rotation {
        &self.rot
    }

    pub fn trans(&self) -> &Vector {
        &self.trans
    }

    pub fn into_parts(self) -> (Rotation, Vector) {
        (self.rot, self.trans)
    }

    /// The `(n+1) x (n+1)` matrix `[[R, X], [0, 1]]`.
    pub fn to_homogeneous(&self) -> Mat {
        let n = self.n();
        let mut m = Mat::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(self.rot.mat());
        m.view_mut((0, n), (n, 1)).copy_from(&self.trans);
        m[(n, n)] = 1.0;
        m
    }

    pub fn from_homogeneous(m: &Mat, tol: &Tolerances) -> Result<Self> {
        ensure_dim("homogeneous columns", m.nrows(), m.ncols())?;
        if m.nrows() == 0 {
            return Err(Error::DimensionMismatch("empty homogeneous matrix".into()));
        }
        let n = m.nrows() - 1;
        let bottom = m.view((n, 0), (1, n + 1)).into_owned();
        let mut expected = Mat::zeros(1, n + 1);
        expected[(0, n)] = 1.0;
        let residual = (bottom - expected).norm();
        if residual > tol.orth {
            return Err(Error::InvalidValue(format!(
                "bottom row of homogeneous matrix off by {residual:e}"
            )));
        }
        let rot = Rotation::new(m.view((0, 0), (n, n)).into_owned(), tol)?;
        Motion::new(rot, m.view((0, n), (n, 1)).column(0).into_owned())
    }

    /// `R x + X`.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        Ok(self.rot.apply(x)? + &self.trans)
    }

    /// Distance to another motion: `sqrt(‖R₁ − R₂‖_F² + ‖X₁ − X₂‖²)`.
    pub fn distance(&self, other: &Motion) -> f64 {
        let dr = (self.rot.mat() - other.rot.mat()).norm_squared();
        let dx = (&self.trans - &other.trans).norm_squared();
        (dr + dx).sqrt()
    }
}

/// An element of `so(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    mat: Mat,
}

impl SkewMatrix {
    /// Accepts `mat` when `‖mat + matᵀ‖_F ≤ 1e-12 · n · max(1, ‖mat‖_F)`.
    pub fn new(mat: Mat) -> Result<Self> {
        ensure_dim("skew matrix columns", mat.nrows(), mat.ncols())?;
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("skew matrix has non-finite entries".into()));
        }
        let n = mat.nrows().max(1) as f64;
        let residual = skew_residual(&mat);
        if residual > 1e-12 * n * mat.norm().max(1.0) {
            return Err(Error::NotSkew { residual });
        }
        Ok(SkewMatrix { mat })
    }

    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            mat: Mat::zeros(n, n),
        }
    }

    /// Keeps the skew part of `mat`.
    pub(crate) fn from_mat_unchecked(mat: Mat) -> Self {
        SkewMatrix {
            mat: (&mat - mat.transpose()) * 0.5,
        }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_inner(self) -> Mat {
        self.mat
    }

    pub fn scale(&self, s: f64) -> SkewMatrix {
        SkewMatrix {
            mat: &self.mat * s,
        }
    }
}

/// An element `ξ = (ω, v)` of `se(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Screw {
    omega: SkewMatrix,
    v: Vector,
}

impl Screw {
    pub fn new(omega: SkewMatrix, v: Vector) -> Result<Self> {
        ensure_dim("screw translation dimension", omega.n(), v.len())?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("screw has non-finite entries".into()));
        }
        Ok(Screw { omega, v })
    }

    pub fn zeros(n: usize) -> Self {
        Screw {
            omega: SkewMatrix::zeros(n),
            v: Vector::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    pub fn omega(&self) -> &SkewMatrix {
        &self.omega
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    pub fn scale(&self, s: f64) -> Screw {
        Screw {
            omega: self.omega.scale(s),
            v: &self.v * s,
        }
    }

    /// `sqrt(‖ω‖_F² + ‖v‖²)`.
    pub fn norm(&self) -> f64 {
        (self.omega.mat.norm_squared() + self.v.norm_squared()).sqrt()
    }

    /// `[[ω, v], [0, 0]]`.
    pub fn to_homogeneous(&self) -> Mat {
        let n = self.n();
        let mut m = Mat::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(self.omega.mat());
        m.view_mut((0, n), (n, 1)).copy_from(&self.v);
        m
    }

    pub fn distance(&self, other: &Screw) -> f64 {
        let dw = (self.omega.mat() - other.omega.mat()).norm_squared();
        let dv = (&self.v - &other.v).norm_squared();
        (dw + dv).sqrt()
    }
}

/// `(R₁, X₁)·(R₂, X₂) = (R₁R₂, X₁ + R₁X₂)`.
pub fn se_mul(a: &Motion, b: &Motion) -> Result<Motion> {
    ensure_dim("motion dimension", a.n(), b.n())?;
    Ok(Motion {
        rot: a.rot.compose(&b.rot)?,
        trans: &a.trans + a.rot.mat() * &b.trans,
    })
}

/// `(R, X)⁻¹ = (Rᵀ, −RᵀX)`.
pub fn se_inv(g: &Motion) -> Motion {
    let rt = g.rot.inverse();
    let trans = -(rt.mat() * &g.trans);
    Motion { rot: rt, trans }
}

/// `[(ω₁, v₁), (ω₂, v₂)] = ([ω₁, ω₂], ω₁v₂ − ω₂v₁)`.
pub fn se_bracket(a: &Screw, b: &Screw) -> Result<Screw> {
    ensure_dim("screw dimension", a.n(), b.n())?;
    let (w1, w2) = (a.omega.mat(), b.omega.mat());
    Ok(Screw {
        omega: SkewMatrix::from_mat_unchecked(w1 * w2 - w2 * w1),
        v: w1 * &b.v - w2 * &a.v,
    })
}

/// `2 sin(θ/2) / θ`, with its Taylor expansion near the removable singularity.
pub fn half_angle_factor(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        1.0 - t2 / 24.0 + t2 * t2 / 1920.0
    } else {
        2.0 * (0.5 * theta).sin() / theta
    }
}

/// Branch policy for logarithms at rotation angle `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBranch {
    /// Reject angles within `tol.branch` of `π`.
    #[default]
    Strict,
    /// Accept them, keeping the canonical-form angle (`+π` for half turns).
    ResolvePi,
}

fn so_exp_from_form(form: &CanonicalRotationForm) -> Rotation {
    Rotation::from_mat_unchecked(form.reconstruct_rotation())
}

/// `Y_ω(v)` evaluated in the canonical basis of `ω`.
fn y_omega_from_form(form: &CanonicalRotationForm, v: &Vector) -> Vector {
    let q = &form.basis;
    let mut c = q.transpose() * v;
    for (i, &t) in form.angles.iter().enumerate() {
        let f = half_angle_factor(t);
        let (s2, c2) = (0.5 * t).sin_cos();
        let (a, b) = (c[2 * i], c[2 * i + 1]);
        c[2 * i] = f * (c2 * a - s2 * b);
        c[2 * i + 1] = f * (s2 * a + c2 * b);
    }
    q * c
}

fn y_omega_solve_from_form(form: &CanonicalRotationForm, y: &Vector, tol: &Tolerances) -> Result<Vector> {
    let q = &form.basis;
    let mut c = q.transpose() * y;
    for (i, &t) in form.angles.iter().enumerate() {
        let f = half_angle_factor(t);
        if f.abs() < tol.sing {
            return Err(Error::YOmegaSingular { factor: f });
        }
        let (s2, c2) = (0.5 * t).sin_cos();
        let (a, b) = (c[2 * i], c[2 * i + 1]);
        c[2 * i] = (c2 * a + s2 * b) / f;
        c[2 * i + 1] = (-s2 * a + c2 * b) / f;
    }
    Ok(q * c)
}

/// `exp(ω)` through the canonical block form of `ω`.
pub fn so_exp(omega: &SkewMatrix, tol: &Tolerances) -> Result<Rotation> {
    let form = canonical_skew_form(omega.mat(), tol)?;
    Ok(so_exp_from_form(&form))
}

/// Principal logarithm: `Q · blockdiag(Π(θ_i), 0) · Qᵀ` with `θ_i ∈ (−π, π]`.
pub fn so_log(r: &Rotation, branch: LogBranch, tol: &Tolerances) -> Result<SkewMatrix> {
    let form = canonical_rotation_form(r.mat(), tol)?;
    check_branch(&form, branch, tol)?;
    Ok(SkewMatrix::from_mat_unchecked(form.reconstruct_generator()))
}

fn check_branch(form: &CanonicalRotationForm, branch: LogBranch, tol: &Tolerances) -> Result<()> {
    if branch == LogBranch::Strict {
        if let Some(&angle) = form
            .angles
            .iter()
            .find(|t| t.abs() > std::f64::consts::PI - tol.branch)
        {
            return Err(Error::LogBranchAmbiguity {
                angle,
                tol: tol.branch,
            });
        }
    }
    Ok(())
}

/// `Y_ω(v) = v + ωv/2! + ω²v/3! + …`, summed in closed form.
pub fn y_omega(omega: &SkewMatrix, v: &Vector, tol: &Tolerances) -> Result<Vector> {
    ensure_dim("vector dimension", omega.n(), v.len())?;
    let form = canonical_skew_form(omega.mat(), tol)?;
    Ok(y_omega_from_form(&form, v))
}

/// The matrix of the linear map `v ↦ Y_ω(v)`.
pub fn y_omega_matrix(omega: &SkewMatrix, tol: &Tolerances) -> Result<Mat> {
    let form = canonical_skew_form(omega.mat(), tol)?;
    let n = omega.n();
    let cols: Vec<Vector> = (0..n)
        .map(|k| y_omega_from_form(&form, &crate::matcore::basis_vector(n, k)))
        .collect();
    Ok(if n == 0 { Mat::zeros(0, 0) } else { Mat::from_columns(&cols) })
}

/// Solves `Y_ω(v) = y` for `v`.
pub fn y_omega_solve(omega: &SkewMatrix, y: &Vector, tol: &Tolerances) -> Result<Vector> {
    ensure_dim("vector dimension", omega.n(), y.len())?;
    let form = canonical_skew_form(omega.mat(), tol)?;
    y_omega_solve_from_form(&form, y, tol)
}

/// `exp(ω, v) = (exp ω, Y_ω(v))`.
pub fn se_exp(xi: &Screw, tol: &Tolerances) -> Result<Motion> {
    let form = canonical_skew_form(xi.omega.mat(), tol)?;
    Ok(Motion {
        rot: so_exp_from_form(&form),
        trans: y_omega_from_form(&form, &xi.v),
    })
}

/// `log(R, X) = (log R, Y_{log R}⁻¹(X))` on the principal branch.
pub fn se_log(g: &Motion, branch: LogBranch, tol: &Tolerances) -> Result<Screw> {
    let form = canonical_rotation_form(g.rot.mat(), tol)?;
    check_branch(&form, branch, tol)?;
    let v = y_omega_solve_from_form(&form, &g.trans, tol)?;
    Ok(Screw {
        omega: SkewMatrix::from_mat_unchecked(form.reconstruct_generator()),
        v,
    })
}

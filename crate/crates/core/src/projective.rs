//! Closed forms for `p = 1`: rotations `R_{θ,U}` in the plane of `E_1` and
//! a unit direction `U ⊥ E_1`, the half-angle line `ρ₀(R_{θ,U})`, the
//! exponential of the line bundle and sampling of the Möbius band `C(2, 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::grassmann::Signature;
use crate::liegroup::{half_angle_factor, so_exp, Motion, Rotation, SkewMatrix};
use crate::matcore::{basis_vector, sign_canonical, wedge, Mat, Vector};
use crate::tol::Tolerances;

/// A unit vector orthogonal to `E_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDirection {
    u: Vector,
}

impl UnitDirection {
    pub fn new(u: Vector) -> Result<Self> {
        if u.len() < 2 {
            return Err(Error::DimensionMismatch(
                "a direction orthogonal to E_1 needs n >= 2".into(),
            ));
        }
        let norm_err = (u.norm() - 1.0).abs();
        if norm_err > 1e-12 {
            return Err(Error::NotUnit(format!("|U| - 1 = {norm_err:e}")));
        }
        if u[0].abs() > 1e-12 {
            return Err(Error::InvalidValue(format!(
                "U is not orthogonal to E_1 (<U, E_1> = {})",
                u[0]
            )));
        }
        Ok(UnitDirection { u })
    }

    /// Drops the `E_1` component and normalizes.
    pub fn normalized(mut u: Vector) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::DimensionMismatch("empty direction".into()));
        }
        u[0] = 0.0;
        let norm = u.norm();
        if !(norm.is_finite() && norm > 1e-12) {
            return Err(Error::NotUnit("direction has no component orthogonal to E_1".into()));
        }
        UnitDirection::new(u / norm)
    }

    /// `E_k` for `k ≥ 1` (zero-based).
    pub fn axis(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::IndexOutOfRange(format!("axis {k} for n = {n}")));
        }
        Ok(UnitDirection {
            u: basis_vector(n, k),
        })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn vector(&self) -> &Vector {
        &self.u
    }
}

/// A line through the origin, represented by a unit vector whose first
/// nonzero entry is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    rep: Vector,
}

impl Line {
    pub fn new(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 1e-12) {
            return Err(Error::NotUnit("a line needs a nonzero direction".into()));
        }
        let mut rep = v / norm;
        sign_canonical(&mut rep);
        Ok(Line { rep })
    }

    pub fn representative(&self) -> &Vector {
        &self.rep
    }

    /// Angle between two lines, in `[0, π/2]`.
    pub fn angle_to(&self, other: &Line) -> f64 {
        self.rep.dot(&other.rep).abs().min(1.0).acos()
    }

    /// `V V^T`.
    pub fn projector(&self) -> Mat {
        &self.rep * self.rep.transpose()
    }
}

/// `R_{θ,U} = exp(−θ E_1 ∧ U)`.
pub fn rotation_in_plane(theta: f64, u: &UnitDirection, tol: &Tolerances) -> Result<Rotation> {
    let n = u.n();
    let gen = wedge(&basis_vector(n, 0), u.vector())? * -theta;
    so_exp(&SkewMatrix::new(gen)?, tol)
}

/// `R_{θ,U}` written out: `E_1 ↦ cos θ E_1 + sin θ U`,
/// `U ↦ −sin θ E_1 + cos θ U`, identity on the complement.
pub fn rotation_in_plane_closed_form(theta: f64, u: &UnitDirection) -> Mat {
    let n = u.n();
    let e1 = basis_vector(n, 0);
    let uv = u.vector();
    let (s, c) = theta.sin_cos();
    Mat::identity(n, n)
        + (uv * e1.transpose() - &e1 * uv.transpose()) * s
        + (&e1 * e1.transpose() + uv * uv.transpose()) * (c - 1.0)
}

/// `I − 2 V Vᵀ`.
pub fn reflection_about_hyperplane_normal(v: &Vector) -> Result<Mat> {
    let err = (v.norm() - 1.0).abs();
    if err.is_nan() || err > 1e-12 {
        return Err(Error::NotUnit(format!("|V| - 1 = {err:e}")));
    }
    let n = v.len();
    Ok(Mat::identity(n, n) - v * v.transpose() * 2.0)
}

/// `V = cos(θ/2) E_1 + sin(θ/2) U`.
fn half_angle_vector(theta: f64, u: &UnitDirection) -> Vector {
    let (s, c) = (0.5 * theta).sin_cos();
    basis_vector(u.n(), 0) * c + u.vector() * s
}

/// `R_{θ,U} J_{1,q}` is the reflection in the hyperplane orthogonal to
/// `cos(θ/2) E_1 + sin(θ/2) U`.
pub fn two_reflections_check(theta: f64, u: &UnitDirection, tol: &Tolerances) -> Result<bool> {
    let n = u.n();
    let r = rotation_in_plane(theta, u, tol)?;
    let sig = Signature::new(1, n - 1)?;
    let lhs = r.mat() * sig.matrix();
    let rhs = reflection_about_hyperplane_normal(&half_angle_vector(theta, u))?;
    Ok((lhs - rhs).norm() <= 1e-10)
}

/// `ρ₀(R_{θ,U}) = [cos(θ/2) E_1 + sin(θ/2) U]`.
pub fn half_angle_line(theta: f64, u: &UnitDirection) -> Line {
    Line::new(half_angle_vector(theta, u)).expect("half-angle vector is a unit vector")
}

/// `exp(−θ E_1 ∧ U, λ E_1) = (R_{θ,U}, Y)` with
/// `Y = λ (2 sin(θ/2)/θ) (cos(θ/2) E_1 + sin(θ/2) U)`.
pub fn line_bundle_exp(theta: f64, u: &UnitDirection, lambda: f64) -> Result<Motion> {
    if !(theta.is_finite() && lambda.is_finite()) {
        return Err(Error::InvalidValue("theta and lambda must be finite".into()));
    }
    let rot = Rotation::from_mat_unchecked(rotation_in_plane_closed_form(theta, u));
    let y = half_angle_vector(theta, u) * (lambda * half_angle_factor(theta));
    Motion::new(rot, y)
}

/// One sample of the Möbius band `C(2, 1) ≅ exp(d_1) ⊂ SE(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusRecord {
    pub theta: f64,
    pub lambda: f64,
    pub r00: f64,
    pub r01: f64,
    pub r10: f64,
    pub r11: f64,
    pub x0: f64,
    pub x1: f64,
    pub line_angle: f64,
    pub y0: f64,
    pub y1: f64,
}

impl MoebiusRecord {
    pub fn motion(&self) -> Motion {
        let rot = Rotation::from_mat_unchecked(Mat::from_row_slice(
            2,
            2,
            &[self.r00, self.r01, self.r10, self.r11],
        ));
        Motion::new(rot, Vector::from_vec(vec![self.x0, self.x1])).expect("2x2 with 2-vector")
    }

    pub fn fiber(&self) -> Vector {
        Vector::from_vec(vec![self.y0, self.y1])
    }

    pub fn line(&self) -> Line {
        Line::new(Vector::from_vec(vec![self.line_angle.cos(), self.line_angle.sin()]))
            .expect("unit vector")
    }
}

/// `θ_i = 2π i / num_theta` on `[0, 2π)`, `λ_j` evenly spaced on
/// `[−λ_max, λ_max]` (just `0` when `num_lambda = 1`). Row-major in `θ`.
pub fn moebius_grid(num_theta: usize, num_lambda: usize, lambda_max: f64) -> Result<Vec<MoebiusRecord>> {
    if num_theta == 0 || num_lambda == 0 {
        return Err(Error::InvalidValue("grid sizes must be positive".into()));
    }
    if !(lambda_max.is_finite() && lambda_max >= 0.0) {
        return Err(Error::InvalidValue(format!(
            "lambda_max must be finite and nonnegative, got {lambda_max}"
        )));
    }
    let u = UnitDirection::axis(2, 1)?;
    let mut out = Vec::with_capacity(num_theta * num_lambda);
    for i in 0..num_theta {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / num_theta as f64;
        for j in 0..num_lambda {
            let lambda = if num_lambda == 1 {
                0.0
            } else {
                -lambda_max + 2.0 * lambda_max * j as f64 / (num_lambda - 1) as f64
            };
            let g = line_bundle_exp(theta, &u, lambda)?;
            let r = g.rot().mat();
            let x = g.trans();
            out.push(MoebiusRecord {
                theta,
                lambda,
                r00: r[(0, 0)],
                r01: r[(0, 1)],
                r10: r[(1, 0)],
                r11: r[(1, 1)],
                x0: x[0],
                x1: x[1],
                line_angle: 0.5 * theta,
                y0: x[0],
                y1: x[1],
            });
        }
    }
    Ok(out)
}

/// Outcome of comparing the last `θ` column of the grid against `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeamReport {
    pub pairs: usize,
    pub matched: usize,
    /// Largest angle between the seam lines.
    pub max_line_gap: f64,
}

/// Pairs the record at `(θ_last, λ)` with the record at `(0, −λ)` and checks
/// that their lines coincide within one angular step `2π / num_theta` and
/// that the fibers point the same way, i.e. the fiber coordinate flips sign
/// across the seam. For `λ = 0` only the line condition applies.
pub fn moebius_seam_check(
    records: &[MoebiusRecord],
    num_theta: usize,
    num_lambda: usize,
) -> Result<SeamReport> {
    ensure_dim("grid records", num_theta * num_lambda, records.len())?;
    if num_theta < 2 {
        return Err(Error::InvalidValue("seam check needs at least two theta samples".into()));
    }
    let resolution = 2.0 * std::f64::consts::PI / num_theta as f64;
    let last = &records[(num_theta - 1) * num_lambda..];
    let first = &records[..num_lambda];
    let mut report = SeamReport {
        pairs: 0,
        matched: 0,
        max_line_gap: 0.0,
    };
    for (j, seam) in last.iter().enumerate() {
        let opposite = &first[num_lambda - 1 - j];
        debug_assert!((seam.lambda + opposite.lambda).abs() < 1e-12);
        report.pairs += 1;
        let gap = seam.line().angle_to(&opposite.line());
        report.max_line_gap = report.max_line_gap.max(gap);
        let lines_ok = gap <= resolution;
        let fibers_ok = if seam.lambda == 0.0 {
            true
        } else {
            let (ys, yo) = (seam.fiber(), opposite.fiber());
            let same = &first[j].fiber();
            ys.dot(&yo) > 0.0 && ys.dot(same) < 0.0
        };
        if lines_ok && fibers_ok {
            report.matched += 1;
        }
    }
    Ok(report)
}

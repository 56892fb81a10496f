//! Dense linear-algebra kernels: wedge generators, orthonormal frames,
//! projectors, frame completion, the block canonical form of rotations and
//! skew matrices, and eigenspaces of orthogonal symmetries.
//!
//! Indices are zero-based throughout: `skew_wedge(0, 1, n)` is `E_1 ∧ E_2`.

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::tol::Tolerances;

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Seed of the generator that supplies complement directions in
/// [`complete_to_special_orthogonal`]. Changing it changes every completed
/// rotation, but no projector-level quantity.
pub const FRAME_COMPLETION_SEED: u64 = 0x00C4_47A1_B0D1_E5EE;

const SCHUR_MAX_ITER: usize = 10_000;

/// The `i`-th standard basis vector of `R^n` (zero-based).
pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut e = Vector::zeros(n);
    e[i] = 1.0;
    e
}

/// `a ∧ b = a bᵀ − b aᵀ`.
pub fn wedge(a: &Vector, b: &Vector) -> Result<Mat> {
    ensure_dim("wedge operand", a.len(), b.len())?;
    Ok(a * b.transpose() - b * a.transpose())
}

/// `E_i ∧ E_j`: `+1` at `(i, j)`, `−1` at `(j, i)`.
pub fn skew_wedge(i: usize, j: usize, n: usize) -> Result<Mat> {
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange(format!(
            "wedge indices ({i}, {j}) for n = {n}"
        )));
    }
    if i >= j {
        return Err(Error::IndexOutOfRange(format!(
            "wedge requires i < j, got ({i}, {j})"
        )));
    }
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    Ok(m)
}

/// `‖MᵀM − I‖_F`.
pub fn orthogonality_residual(m: &Mat) -> f64 {
    (m.transpose() * m - Mat::identity(m.ncols(), m.ncols())).norm()
}

/// `‖M − Mᵀ‖_F`.
pub fn symmetry_residual(m: &Mat) -> f64 {
    (m - m.transpose()).norm()
}

/// `‖M + Mᵀ‖_F`.
pub fn skew_residual(m: &Mat) -> f64 {
    (m + m.transpose()).norm()
}

/// The signature matrix `diag(−I_p, I_q)` as a dense matrix.
pub fn signature_matrix(p: usize, q: usize) -> Mat {
    let n = p + q;
    Mat::from_fn(n, n, |i, j| match (i == j, i < p) {
        (true, true) => -1.0,
        (true, false) => 1.0,
        _ => 0.0,
    })
}

/// An `n x p` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    cols: Mat,
}

impl Frame {
    /// Validates `colsᵀ cols = I` within `tol.orth`.
    pub fn new(cols: Mat, tol: &Tolerances) -> Result<Self> {
        if cols.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("frame has non-finite entries".into()));
        }
        if cols.ncols() > cols.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "frame with {} columns in dimension {}",
                cols.ncols(),
                cols.nrows()
            )));
        }
        let residual = orthogonality_residual(&cols);
        if residual > tol.orth {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Frame { cols })
    }

    pub(crate) fn from_orthonormal(cols: Mat) -> Self {
        Frame { cols }
    }

    pub fn n(&self) -> usize {
        self.cols.nrows()
    }

    pub fn p(&self) -> usize {
        self.cols.ncols()
    }

    pub fn cols(&self) -> &Mat {
        &self.cols
    }

    pub fn into_inner(self) -> Mat {
        self.cols
    }
}

/// Flips `v` so that its first entry with magnitude above `1e-12` is positive.
pub(crate) fn sign_canonical(v: &mut Vector) -> bool {
    let lead = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(0.0);
    if lead < 0.0 {
        v.neg_mut();
        true
    } else {
        false
    }
}

/// Two-pass modified Gram–Schmidt of `v` against the columns of `basis`.
fn orthogonalize_against(v: &mut Vector, basis: &[Vector]) {
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(v);
            v.axpy(-c, b, 1.0);
        }
    }
}

/// Orthonormal frame spanning the columns of `vectors`, by stabilized
/// Gram–Schmidt in column order.
pub fn orthonormalize(vectors: &Mat, tol: &Tolerances) -> Result<Frame> {
    let (n, p) = vectors.shape();
    if vectors.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidValue("spanning set has non-finite entries".into()));
    }
    if p > n {
        return Err(Error::DegenerateSpan { sigma_min: 0.0 });
    }
    if p == 0 {
        return Ok(Frame { cols: Mat::zeros(n, 0) });
    }
    let sv = singular_values(vectors);
    let sigma_max = sv.max();
    let sigma_min = sv.min();
    if sigma_min <= tol.rank * sigma_max.max(1.0) {
        return Err(Error::DegenerateSpan { sigma_min });
    }
    let mut basis: Vec<Vector> = Vec::with_capacity(p);
    for col in vectors.column_iter() {
        let mut v: Vector = col.into_owned();
        orthogonalize_against(&mut v, &basis);
        let norm = v.norm();
        if norm <= tol.rank * sigma_max.max(1.0) {
            return Err(Error::DegenerateSpan { sigma_min: norm });
        }
        basis.push(v / norm);
    }
    Ok(Frame {
        cols: Mat::from_columns(&basis),
    })
}

/// Orthogonal projector `F Fᵀ` onto the span of a frame.
pub fn projector(frame: &Frame) -> Mat {
    &frame.cols * frame.cols.transpose()
}

/// Thin singular value decomposition `A = W Vᵀ` with `W = U diag(σ)`.
///
/// `w` holds the scaled left vectors; `sigma` is descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub w: Mat,
    pub sigma: Vector,
    pub v: Mat,
}

impl Svd {
    /// `U`, with columns of zero singular values left at zero.
    pub fn u(&self) -> Mat {
        let mut u = self.w.clone();
        for (k, mut col) in u.column_iter_mut().enumerate() {
            if self.sigma[k] > 0.0 {
                col /= self.sigma[k];
            }
        }
        u
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided Jacobi SVD of an `m × k` matrix with `m ≥ k`, accurate to
/// working precision also for clustered singular values.
pub fn svd(a: &Mat) -> Svd {
    let (m, k) = a.shape();
    assert!(m >= k, "svd expects at least as many rows as columns");
    let mut w = a.clone();
    let mut v = Mat::identity(k, k);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let (x, y) = (mat[(r, i)], mat[(r, j)]);
                        mat[(r, i)] = c * x - s * y;
                        mat[(r, j)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = w.column_iter().map(|c| c.norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    Svd {
        w: w.select_columns(order.iter()),
        sigma: Vector::from_iterator(k, order.iter().map(|&i| norms[i])),
        v: v.select_columns(order.iter()),
    }
}

/// Singular values in descending order, for any shape.
pub fn singular_values(a: &Mat) -> Vector {
    if a.nrows() >= a.ncols() {
        svd(a).sigma
    } else {
        svd(&a.transpose()).sigma
    }
}

/// A rotation whose first `p` columns are exactly the columns of `frame`.
///
/// The complement is a pure function of the frame: seeded Gaussian
/// candidates are orthogonalized in order, and the last column is negated
/// when the determinant comes out negative.
pub fn complete_to_special_orthogonal(frame: &Frame) -> Mat {
    let n = frame.n();
    let mut basis: Vec<Vector> = frame.cols.column_iter().map(|c| c.into_owned()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(FRAME_COMPLETION_SEED);
    let mut attempts = 0;
    while basis.len() < n && attempts < 4 * n {
        attempts += 1;
        let mut v = Vector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        orthogonalize_against(&mut v, &basis);
        let norm = v.norm();
        if norm > 1e-3 {
            basis.push(v / norm);
        }
    }
    // Coordinate vectors as a last resort; unreachable for any sane n.
    let mut k = 0;
    while basis.len() < n {
        let mut v = basis_vector(n, k);
        orthogonalize_against(&mut v, &basis);
        let norm = v.norm();
        if norm > 0.5 {
            basis.push(v / norm);
        }
        k += 1;
    }
    let mut a = if n == 0 { Mat::zeros(0, 0) } else { Mat::from_columns(&basis) };
    if n > 0 && a.determinant() < 0.0 {
        a.column_mut(n - 1).neg_mut();
    }
    a
}

/// Block canonical form `Q · blockdiag(B(θ_1), …, B(θ_k), I_{n−2k}) · Qᵀ`.
///
/// For a rotation the blocks are `R(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]`
/// acting on columns `(2i, 2i+1)` of `basis`; for a skew matrix the same
/// basis carries `Π(θ) = [[0, −θ], [θ, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalRotationForm {
    pub basis: Mat,
    pub angles: Vec<f64>,
    pub fixed_dim: usize,
}

impl CanonicalRotationForm {
    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    /// `blockdiag(R(θ_1), …, R(θ_k), I)`.
    pub fn rotation_blocks(&self) -> Mat {
        let mut d = Mat::identity(self.n(), self.n());
        for (i, &t) in self.angles.iter().enumerate() {
            let (s, c) = t.sin_cos();
            let k = 2 * i;
            d[(k, k)] = c;
            d[(k, k + 1)] = -s;
            d[(k + 1, k)] = s;
            d[(k + 1, k + 1)] = c;
        }
        d
    }

    /// `blockdiag(Π(θ_1), …, Π(θ_k), 0)`.
    pub fn generator_blocks(&self) -> Mat {
        let mut d = Mat::zeros(self.n(), self.n());
        for (i, &t) in self.angles.iter().enumerate() {
            let k = 2 * i;
            d[(k, k + 1)] = -t;
            d[(k + 1, k)] = t;
        }
        d
    }

    pub fn reconstruct_rotation(&self) -> Mat {
        &self.basis * self.rotation_blocks() * self.basis.transpose()
    }

    pub fn reconstruct_generator(&self) -> Mat {
        &self.basis * self.generator_blocks() * self.basis.transpose()
    }
}

struct Block {
    u: Vector,
    w: Vector,
    angle: f64,
}

fn real_schur(m: &Mat) -> Result<(Mat, Mat)> {
    Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .map(|s| s.unpack())
        .ok_or_else(|| Error::IllConditionedSpectrum("Schur iteration did not converge".into()))
}

/// Orders blocks by descending angle, fixes eigenvector signs and makes
/// `det Q = +1`.
/// `periodic` marks rotation angles, where `π` and `−π` name the same block.
fn assemble(
    n: usize,
    mut blocks: Vec<Block>,
    mut fixed: Vec<Vector>,
    periodic: bool,
) -> CanonicalRotationForm {
    for b in blocks.iter_mut() {
        if sign_canonical(&mut b.u) {
            b.w.neg_mut();
        }
    }
    for f in fixed.iter_mut() {
        sign_canonical(f);
    }
    blocks.sort_by(|a, b| b.angle.total_cmp(&a.angle));

    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    for b in &blocks {
        cols.push(b.u.clone());
        cols.push(b.w.clone());
    }
    cols.extend(fixed.iter().cloned());
    let mut basis = if n == 0 { Mat::zeros(0, 0) } else { Mat::from_columns(&cols) };
    let mut angles: Vec<f64> = blocks.iter().map(|b| b.angle).collect();

    if n > 0 && basis.determinant() < 0.0 {
        if !fixed.is_empty() {
            basis.column_mut(n - 1).neg_mut();
        } else {
            // Flipping the second vector of a block reverses its angle; pick
            // the block whose reversal keeps the descending order.
            let k = angles.len() - 1;
            basis.column_mut(2 * k + 1).neg_mut();
            if !(periodic && angles[k] == std::f64::consts::PI) {
                angles[k] = -angles[k];
            }
            let mut order: Vec<usize> = (0..angles.len()).collect();
            order.sort_by(|&a, &b| angles[b].total_cmp(&angles[a]));
            let old = basis.clone();
            let old_angles = angles.clone();
            for (slot, &src) in order.iter().enumerate() {
                basis.set_column(2 * slot, &old.column(2 * src));
                basis.set_column(2 * slot + 1, &old.column(2 * src + 1));
                angles[slot] = old_angles[src];
            }
        }
    }
    CanonicalRotationForm {
        basis,
        angles,
        fixed_dim: fixed.len(),
    }
}

/// Canonical block form of a rotation, angles in `(−π, π] \ {0}` sorted
/// descending.
pub fn canonical_rotation_form(r: &Mat, tol: &Tolerances) -> Result<CanonicalRotationForm> {
    let n = r.nrows();
    ensure_dim("rotation columns", n, r.ncols())?;
    let residual = orthogonality_residual(r);
    if residual > tol.orth {
        return Err(Error::NotOrthogonal { residual });
    }
    if n == 0 {
        return Ok(CanonicalRotationForm {
            basis: Mat::zeros(0, 0),
            angles: vec![],
            fixed_dim: 0,
        });
    }
    let det = r.determinant();
    if (det - 1.0).abs() > tol.orth {
        return Err(Error::NotSpecialOrthogonal { det });
    }
    let (q, t) = real_schur(r)?;

    let mut blocks = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let b = t.fixed_view::<2, 2>(i, i).into_owned();
            let q2 = q.columns(i, 2).into_owned();
            if b.determinant() < 0.0 {
                // Reflection-type block: split into its ±1 directions.
                let sym = (b + b.transpose()) * 0.5;
                let eig = sym.symmetric_eigen();
                for k in 0..2 {
                    let v: Vector = &q2 * eig.eigenvectors.column(k);
                    if eig.eigenvalues[k] > 0.0 {
                        plus.push(v);
                    } else {
                        minus.push(v);
                    }
                }
            } else {
                let angle = (b[(1, 0)] - b[(0, 1)]).atan2(b[(0, 0)] + b[(1, 1)]);
                if angle == 0.0 {
                    plus.push(q2.column(0).into_owned());
                    plus.push(q2.column(1).into_owned());
                } else {
                    blocks.push(Block {
                        u: q2.column(0).into_owned(),
                        w: q2.column(1).into_owned(),
                        angle: if angle == -std::f64::consts::PI {
                            std::f64::consts::PI
                        } else {
                            angle
                        },
                    });
                }
            }
            i += 2;
        } else {
            let v = q.column(i).into_owned();
            if t[(i, i)] > 0.0 {
                plus.push(v);
            } else {
                minus.push(v);
            }
            i += 1;
        }
    }
    if minus.len() % 2 == 1 {
        return Err(Error::IllConditionedSpectrum(
            "odd multiplicity of eigenvalue -1".into(),
        ));
    }
    for pair in minus.chunks(2) {
        blocks.push(Block {
            u: pair[0].clone(),
            w: pair[1].clone(),
            angle: std::f64::consts::PI,
        });
    }
    let form = assemble(n, blocks, plus, true);
    let err = (form.reconstruct_rotation() - r).norm();
    if err > tol.recon_for(n) {
        return Err(Error::IllConditionedSpectrum(format!(
            "canonical form reconstruction error {err:e}"
        )));
    }
    Ok(form)
}

/// Canonical block form of a skew matrix: `ω = Q · blockdiag(Π(θ_i), 0) · Qᵀ`.
///
/// Angles are not reduced modulo `2π`; they are the rotation rates of `ω`.
pub fn canonical_skew_form(w: &Mat, tol: &Tolerances) -> Result<CanonicalRotationForm> {
    let n = w.nrows();
    ensure_dim("skew matrix columns", n, w.ncols())?;
    if n == 0 {
        return Ok(CanonicalRotationForm {
            basis: Mat::zeros(0, 0),
            angles: vec![],
            fixed_dim: 0,
        });
    }
    let (q, t) = real_schur(w)?;
    let mut blocks = Vec::new();
    let mut fixed = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let angle = 0.5 * (t[(i + 1, i)] - t[(i, i + 1)]);
            let (u, v) = (q.column(i).into_owned(), q.column(i + 1).into_owned());
            if angle == 0.0 {
                fixed.push(u);
                fixed.push(v);
            } else if angle > 0.0 {
                blocks.push(Block { u, w: v, angle });
            } else {
                // Swap the pair so every rate is positive.
                blocks.push(Block { u: v, w: u, angle: -angle });
            }
            i += 2;
        } else {
            fixed.push(q.column(i).into_owned());
            i += 1;
        }
    }
    let form = assemble(n, blocks, fixed, false);
    let err = (form.reconstruct_generator() - w).norm();
    if err > tol.recon_for(n) * w.norm().max(1.0) {
        return Err(Error::IllConditionedSpectrum(format!(
            "skew canonical form reconstruction error {err:e}"
        )));
    }
    Ok(form)
}

/// Eigenvalue selector for an orthogonal symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Orthonormal frame of the `±1` eigenspace of a symmetric involution.
pub fn eigenspace_of_symmetric_involution(
    s: &Mat,
    eigenvalue: Sign,
    tol: &Tolerances,
) -> Result<Frame> {
    let n = s.nrows();
    ensure_dim("symmetry columns", n, s.ncols())?;
    let residual = symmetry_residual(s).max((s * s - Mat::identity(n, n)).norm());
    if !residual.is_finite() || residual > tol.invol {
        return Err(Error::NotOrthogonalSymmetry { residual });
    }
    if n == 0 {
        return Ok(Frame { cols: Mat::zeros(0, 0) });
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let target = eigenvalue.value();
    let mut idx: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] * target > 0.0).collect();
    idx.sort_unstable();
    let cols: Vec<Vector> = idx
        .iter()
        .map(|&k| {
            let mut v = eig.eigenvectors.column(k).into_owned();
            sign_canonical(&mut v);
            v
        })
        .collect();
    let cols = if cols.is_empty() { Mat::zeros(n, 0) } else { Mat::from_columns(&cols) };
    Ok(Frame { cols })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rot2(t: f64) -> Mat {
        let (s, c) = t.sin_cos();
        Mat::from_row_slice(2, 2, &[c, -s, s, c])
    }

    fn block_diag(a: &Mat, b: &Mat) -> Mat {
        let n = a.nrows() + b.nrows();
        let mut m = Mat::zeros(n, n);
        m.view_mut((0, 0), a.shape()).copy_from(a);
        m.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
        m
    }

    #[test]
    fn wedge_definition() {
        assert_eq!(
            skew_wedge(0, 1, 2).unwrap(),
            Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
        let w = skew_wedge(0, 1, 3).unwrap();
        assert_eq!(w[(0, 1)], 1.0);
        assert_eq!(w[(1, 0)], -1.0);
        assert_eq!(w.iter().filter(|x| **x != 0.0).count(), 2);
        let e1 = basis_vector(3, 0);
        let e2 = basis_vector(3, 1);
        assert_eq!(wedge(&e1, &e2).unwrap(), w);
    }

    #[test]
    fn wedge_errors() {
        assert!(matches!(skew_wedge(1, 1, 3), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(skew_wedge(2, 1, 3), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(skew_wedge(0, 3, 3), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn orthonormalize_examples() {
        let t = tol();
        let m = Mat::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(orthonormalize(&m, &t).unwrap().cols(), &m);

        let f = orthonormalize(&Mat::from_row_slice(2, 1, &[2.0, 0.0]), &t).unwrap();
        assert_eq!(f.cols(), &Mat::from_row_slice(2, 1, &[1.0, 0.0]));

        let m = Mat::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        let f = orthonormalize(&m, &t).unwrap();
        assert!(orthogonality_residual(f.cols()) < 1e-14);
        assert_relative_eq!(projector(&f), Mat::identity(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn orthonormalize_rejects_rank_deficiency() {
        let m = Mat::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 0.0, 0.0]);
        assert!(matches!(
            orthonormalize(&m, &tol()),
            Err(Error::DegenerateSpan { .. })
        ));
    }

    #[test]
    fn projector_examples() {
        let f = Frame::new(Mat::from_row_slice(2, 1, &[1.0, 0.0]), &tol()).unwrap();
        assert_eq!(projector(&f), Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let f = Frame::new(Mat::identity(2, 2), &tol()).unwrap();
        assert_eq!(projector(&f), Mat::identity(2, 2));
        let h = 0.5f64.sqrt();
        let f = Frame::new(Mat::from_row_slice(2, 1, &[h, h]), &tol()).unwrap();
        assert_relative_eq!(projector(&f), Mat::from_element(2, 2, 0.5), epsilon = 1e-15);
    }

    #[test]
    fn completion_keeps_standard_frame() {
        for n in 1..6 {
            for p in 0..=n {
                let f = Frame::new(Mat::identity(n, n).columns(0, p).into_owned(), &tol()).unwrap();
                let a = complete_to_special_orthogonal(&f);
                assert_eq!(a.columns(0, p), f.cols().columns(0, p));
                assert!(orthogonality_residual(&a) < 1e-13);
                assert_relative_eq!(a.determinant(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn completion_of_e2_in_plane() {
        let f = Frame::new(Mat::from_row_slice(2, 1, &[0.0, 1.0]), &tol()).unwrap();
        let a = complete_to_special_orthogonal(&f);
        assert_relative_eq!(a, Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]), epsilon = 1e-15);
        assert_eq!(a, complete_to_special_orthogonal(&f));
    }

    #[test]
    fn canonical_form_of_identity_and_block() {
        let f = canonical_rotation_form(&Mat::identity(3, 3), &tol()).unwrap();
        assert!(f.angles.is_empty());
        assert_eq!(f.fixed_dim, 3);

        let r = block_diag(&rot2(FRAC_PI_2), &Mat::identity(1, 1));
        let f = canonical_rotation_form(&r, &tol()).unwrap();
        assert_eq!(f.angles.len(), 1);
        assert_relative_eq!(f.angles[0].abs(), FRAC_PI_2, epsilon = 1e-14);
        assert_eq!(f.fixed_dim, 1);
        assert!((f.reconstruct_rotation() - &r).norm() < 1e-14);
        assert_relative_eq!(f.basis.determinant(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn canonical_form_handles_half_turns() {
        // -I_4 has two π blocks; blockdiag(R(π), 1) has one.
        let r = -Mat::identity(4, 4);
        let f = canonical_rotation_form(&r, &tol()).unwrap();
        assert_eq!(f.angles, vec![PI, PI]);
        assert_eq!(f.fixed_dim, 0);
        assert!((f.reconstruct_rotation() - &r).norm() < 1e-14);

        let r = block_diag(&rot2(PI), &Mat::identity(1, 1));
        let f = canonical_rotation_form(&r, &tol()).unwrap();
        assert_eq!(f.angles, vec![PI]);
    }

    #[test]
    fn canonical_form_repeated_angles() {
        let r = block_diag(&rot2(0.7), &rot2(0.7));
        let f = canonical_rotation_form(&r, &tol()).unwrap();
        assert_eq!(f.angles.len(), 2);
        for a in &f.angles {
            assert_relative_eq!(a.abs(), 0.7, epsilon = 1e-12);
        }
        assert!((f.reconstruct_rotation() - &r).norm() < 1e-13);
    }

    #[test]
    fn canonical_form_rejects_non_rotations() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            canonical_rotation_form(&m, &tol()),
            Err(Error::NotOrthogonal { .. })
        ));
        let m = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            canonical_rotation_form(&m, &tol()),
            Err(Error::NotSpecialOrthogonal { .. })
        ));
    }

    #[test]
    fn skew_form_of_planar_generator() {
        let w = Mat::from_row_slice(3, 3, &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let f = canonical_skew_form(&w, &tol()).unwrap();
        assert_eq!(f.angles.len(), 1);
        assert_relative_eq!(f.angles[0], 2.0, epsilon = 1e-14);
        assert!((f.reconstruct_generator() - &w).norm() < 1e-14);
        let zero = canonical_skew_form(&Mat::zeros(3, 3), &tol()).unwrap();
        assert!(zero.angles.is_empty());
        assert_eq!(zero.fixed_dim, 3);
    }

    #[test]
    fn eigenspaces_of_signature() {
        let j = signature_matrix(2, 2);
        let f = eigenspace_of_symmetric_involution(&j, Sign::Minus, &tol()).unwrap();
        assert_eq!(f.p(), 2);
        assert_relative_eq!(
            projector(&f),
            Mat::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, 0.0, 0.0])),
            epsilon = 1e-14
        );
        let f = eigenspace_of_symmetric_involution(&Mat::identity(3, 3), Sign::Minus, &tol()).unwrap();
        assert_eq!(f.p(), 0);
        assert_eq!(f.n(), 3);
    }

    #[test]
    fn eigenspace_rejects_non_involution() {
        let s = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(
            eigenspace_of_symmetric_involution(&s, Sign::Plus, &tol()),
            Err(Error::NotOrthogonalSymmetry { .. })
        ));
    }

    #[test]
    fn jacobi_svd_recomposes_clustered_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let g = Mat::from_fn(6, 3, |_, _| StandardNormal.sample(&mut rng));
            let q = g.qr().q();
            let h = Mat::from_fn(3, 3, |_, _| StandardNormal.sample(&mut rng));
            let v = h.qr().q();
            let sig = Mat::from_diagonal(&Vector::from_vec(vec![0.99, 0.989, 0.74]));
            let a = &q * sig * v.transpose();
            let d = svd(&a);
            assert!((&d.w * d.v.transpose() - &a).norm() < 1e-14);
            assert!(orthogonality_residual(&d.v) < 1e-14);
            assert!(orthogonality_residual(&d.u()) < 1e-13);
            assert_relative_eq!(d.sigma[1], 0.989, epsilon = 1e-14);
        }
    }

    #[test]
    fn singular_values_of_wide_and_rank_deficient() {
        let a = Mat::from_row_slice(2, 3, &[3.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
        let s = singular_values(&a);
        assert_eq!(s.len(), 2);
        assert_relative_eq!(s[0], 4.0, epsilon = 1e-15);
        assert_relative_eq!(s[1], 3.0, epsilon = 1e-15);
        let d = svd(&Mat::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 0.0, 0.0]));
        assert!(d.sigma[1].abs() < 1e-15);
        assert_eq!(d.u().column(1).norm(), 0.0);
    }
}

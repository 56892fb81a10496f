//! Samplers and oracles for the integration tests, written independently of
//! the library's own sampling and verification code.

#![allow(dead_code)]

use cartan_bundle::liegroup::{Motion, Rotation};
use cartan_bundle::matcore::{Mat, Vector};
use cartan_bundle::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub type TestRng = ChaCha20Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gauss(rng: &mut TestRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gauss_vec(rng: &mut TestRng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| gauss(rng))
}

pub fn gauss_mat(rng: &mut TestRng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| gauss(rng))
}

/// Haar rotation from a Gaussian QR.
pub fn haar(rng: &mut TestRng, n: usize) -> Mat {
    let qr = gauss_mat(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Skew matrix with Frobenius norm uniform in `[0, bound]`.
pub fn skew(rng: &mut TestRng, n: usize, bound: f64) -> Mat {
    let a = gauss_mat(rng, n, n);
    let w = &a - a.transpose();
    let norm = w.norm();
    if norm == 0.0 {
        return w;
    }
    w * (bound * rng.random::<f64>() / norm)
}

pub fn motion(r: Mat, x: Vector) -> Motion {
    Motion::new(Rotation::new(r, &Tolerances::default()).unwrap(), x).unwrap()
}

pub fn random_motion(rng: &mut TestRng, n: usize) -> Motion {
    let r = haar(rng, n);
    let x = gauss_vec(rng, n) * 2.0;
    motion(r, x)
}

/// `Σ_{k<terms} Mᵏ/k!` after halving `M` until it is small, then squaring.
pub fn expm(m: &Mat) -> Mat {
    let n = m.nrows();
    let mut squarings = 0;
    let mut a = m.clone();
    while a.norm() > 0.5 {
        a /= 2.0;
        squarings += 1;
    }
    let mut sum = Mat::identity(n, n);
    let mut term = Mat::identity(n, n);
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Plain 50-term Taylor series.
pub fn taylor50(m: &Mat) -> Mat {
    let n = m.nrows();
    let mut sum = Mat::identity(n, n);
    let mut term = Mat::identity(n, n);
    for k in 1..50 {
        term = &term * m / k as f64;
        sum += &term;
    }
    sum
}

/// `[[ω, v], [0, 0]]`.
pub fn homogeneous_screw(omega: &Mat, v: &Vector) -> Mat {
    let n = omega.nrows();
    let mut h = Mat::zeros(n + 1, n + 1);
    h.view_mut((0, 0), (n, n)).copy_from(omega);
    h.view_mut((0, n), (n, 1)).copy_from(v);
    h
}

/// `[[R, X], [0, 1]]`.
pub fn homogeneous_motion(g: &Motion) -> Mat {
    let n = g.n();
    let mut h = Mat::identity(n + 1, n + 1);
    h.view_mut((0, 0), (n, n)).copy_from(g.rot().mat());
    h.view_mut((0, n), (n, 1)).copy_from(g.trans());
    h
}

pub fn j(p: usize, q: usize) -> Mat {
    let mut m = Mat::identity(p + q, p + q);
    for i in 0..p {
        m[(i, i)] = -1.0;
    }
    m
}

/// Projector onto the column span from nalgebra's SVD.
pub fn svd_projector(m: &Mat) -> Mat {
    let svd = m.clone().svd(true, false);
    let u = svd.u.unwrap();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-10)
        .collect();
    let b = u.select_columns(keep.iter());
    &b * b.transpose()
}

/// Projector onto the `(−1)`-eigenspace of a symmetric matrix.
pub fn minus_projector(s: &Mat) -> Mat {
    let sym = (s + s.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let n = s.nrows();
    let mut p = Mat::zeros(n, n);
    for k in 0..n {
        if eig.eigenvalues[k] < 0.0 {
            let v = eig.eigenvectors.column(k);
            p += v * v.transpose();
        }
    }
    p
}

/// `(R, X)(S, Y) = (RS, X + RY)`.
pub fn mul(a: &Motion, b: &Motion) -> (Mat, Vector) {
    (
        a.rot().mat() * b.rot().mat(),
        a.trans() + a.rot().mat() * b.trans(),
    )
}

pub fn dist(a: &(Mat, Vector), b: &(Mat, Vector)) -> f64 {
    ((&a.0 - &b.0).norm_squared() + (&a.1 - &b.1).norm_squared()).sqrt()
}

pub fn parts(g: &Motion) -> (Mat, Vector) {
    (g.rot().mat().clone(), g.trans().clone())
}

/// `σ(R, X) = (J R J, J X)` by explicit multiplication.
pub fn sigma_oracle(g: &(Mat, Vector), p: usize) -> (Mat, Vector) {
    let jm = j(p, g.0.nrows() - p);
    (&jm * &g.0 * &jm, &jm * &g.1)
}

/// Rotation angles in `[0, π]` from the complex eigenvalues.
pub fn rotation_angles(r: &Mat) -> Vec<f64> {
    r.complex_eigenvalues().iter().map(|z| z.im.atan2(z.re).abs()).collect()
}

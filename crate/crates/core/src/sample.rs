//! Seeded sampling of every domain type.
//!
//! Streams are ChaCha20 keyed by the global seed with the stream id as the
//! ChaCha stream selector; draws advance the block counter. A sample set is
//! therefore a pure function of `(seed, stream, draw order)`.

use nalgebra::linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::str::FromStr;

use crate::bundle::{tau, BundlePoint, CartanMotion, DpElement};
use crate::error::{Error, Result};
use crate::grassmann::{cartan_embed0, CartanRotation, DpGenerator, Plane, Signature};
use crate::json::Wire;
use crate::liegroup::{Motion, Rotation, Screw, SkewMatrix};
use crate::matcore::{orthonormalize, Mat, Vector};
use crate::tol::Tolerances;

pub type SampleRng = ChaCha20Rng;

/// Default bound on `‖ξ‖` for sampled screws and d_p elements.
pub const SCREW_BOUND: f64 = 4.0;
/// Default scale of sampled translations and fibers.
pub const TRANSLATION_SCALE: f64 = 2.0;

/// The generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Run parameters shared by sampling and verification.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerances,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl Config {
    pub fn new(n: usize, p: usize, seed: u64, samples: usize) -> Result<Self> {
        let c = Config {
            n,
            p,
            seed,
            samples,
            tol: Tolerances::default(),
            input: None,
            output: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.p && self.p < self.n) {
            return Err(Error::InvalidValue(format!(
                "need 1 <= p < n, got n = {}, p = {}",
                self.n, self.p
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidValue("samples must be at least 1".into()));
        }
        for name in Tolerances::NAMES {
            let v = self.tol.get(name).expect("known name");
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidValue(format!("tolerance {name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.p, self.n - self.p).expect("validated")
    }
}

pub fn gaussian(rng: &mut SampleRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vector(rng: &mut SampleRng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| gaussian(rng))
}

pub fn gaussian_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed rotation: QR of a Gaussian matrix with the signs of
/// `diag(R)` absorbed into `Q`, then the first column negated if needed.
pub fn rotation(rng: &mut SampleRng, n: usize) -> Rotation {
    let g = gaussian_matrix(rng, n, n);
    let qr = QR::new(g);
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if n > 0 && q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    Rotation::from_mat_unchecked(q)
}

/// A random direction scaled to a norm drawn uniformly from `[0, bound]`.
fn scaled_direction(rng: &mut SampleRng, mut m: Mat, norm: f64, bound: f64) -> Mat {
    let r = bound * rng.random::<f64>();
    if norm > 0.0 {
        m *= r / norm;
    }
    m
}

/// Skew matrix with `‖ω‖_F ≤ bound`.
pub fn skew(rng: &mut SampleRng, n: usize, bound: f64) -> SkewMatrix {
    let a = gaussian_matrix(rng, n, n);
    let w = (&a - a.transpose()) * 0.5;
    let norm = w.norm();
    SkewMatrix::from_mat_unchecked(scaled_direction(rng, w, norm, bound))
}

/// Screw with `sqrt(‖ω‖_F² + ‖v‖²) ≤ bound`.
pub fn screw(rng: &mut SampleRng, n: usize, bound: f64) -> Screw {
    let a = gaussian_matrix(rng, n, n);
    let w = (&a - a.transpose()) * 0.5;
    let v = gaussian_vector(rng, n);
    let norm = (w.norm_squared() + v.norm_squared()).sqrt();
    let r = bound * rng.random::<f64>();
    let s = if norm > 0.0 { r / norm } else { 0.0 };
    Screw::new(SkewMatrix::from_mat_unchecked(w * s), v * s).expect("same dimension")
}

pub fn motion(rng: &mut SampleRng, n: usize, trans_scale: f64) -> Motion {
    let r = rotation(rng, n);
    let x = gaussian_vector(rng, n) * trans_scale;
    Motion::new(r, x).expect("same dimension")
}

pub fn plane(rng: &mut SampleRng, n: usize, p: usize) -> Plane {
    let tol = Tolerances::default();
    loop {
        let m = gaussian_matrix(rng, n, p);
        if let Ok(f) = orthonormalize(&m, &tol) {
            return Plane::from_frame(f);
        }
    }
}

pub fn bundle_point(rng: &mut SampleRng, n: usize, p: usize, scale: f64) -> BundlePoint {
    let pl = plane(rng, n, p);
    let c = gaussian_vector(rng, p) * scale;
    BundlePoint::from_coordinates(pl, &c).expect("p coordinates")
}

/// Generator with `‖B‖_F ≤ bound`.
pub fn dp_generator(rng: &mut SampleRng, sig: Signature, bound: f64) -> DpGenerator {
    let b = gaussian_matrix(rng, sig.q(), sig.p());
    let norm = b.norm();
    DpGenerator::new(sig, scaled_direction(rng, b, norm, bound)).expect("shape from signature")
}

/// Element with `‖B‖_F ≤ bound` and coefficients of scale `v_scale`.
pub fn dp_element(rng: &mut SampleRng, sig: Signature, bound: f64, v_scale: f64) -> DpElement {
    let gen = dp_generator(rng, sig, bound);
    let v = gaussian_vector(rng, sig.p()) * v_scale;
    DpElement::new(gen, v).expect("length p")
}

pub fn cartan_rotation(rng: &mut SampleRng, n: usize, p: usize, tol: &Tolerances) -> Result<CartanRotation> {
    cartan_embed0(&plane(rng, n, p), tol)
}

/// `τ(g)` of a random motion.
pub fn cartan_motion(rng: &mut SampleRng, sig: Signature, trans_scale: f64, tol: &Tolerances) -> Result<CartanMotion> {
    let g = motion(rng, sig.n(), trans_scale);
    tau(&g, &sig, tol)
}

/// What `sample` can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    Vector,
    Rotation,
    Motion,
    Skew,
    Screw,
    Plane,
    BundlePoint,
    CartanRotation,
    CartanMotion,
    DpGenerator,
    DpElement,
}

impl SampleKind {
    pub const ALL: [SampleKind; 11] = [
        SampleKind::Vector,
        SampleKind::Rotation,
        SampleKind::Motion,
        SampleKind::Skew,
        SampleKind::Screw,
        SampleKind::Plane,
        SampleKind::BundlePoint,
        SampleKind::CartanRotation,
        SampleKind::CartanMotion,
        SampleKind::DpGenerator,
        SampleKind::DpElement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampleKind::Vector => "vector",
            SampleKind::Rotation => "rotation",
            SampleKind::Motion => "motion",
            SampleKind::Skew => "skew",
            SampleKind::Screw => "screw",
            SampleKind::Plane => "plane",
            SampleKind::BundlePoint => "bundle-point",
            SampleKind::CartanRotation => "cartan-rotation",
            SampleKind::CartanMotion => "cartan-motion",
            SampleKind::DpGenerator => "dp-generator",
            SampleKind::DpElement => "dp-element",
        }
    }
}

impl FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidValue(format!("unknown sample kind {s:?}")))
    }
}

/// `config.samples` values of the given kind, as JSON, from stream 0 of
/// `config.seed`.
pub fn sample(kind: SampleKind, config: &Config) -> Result<Vec<serde_json::Value>> {
    config.validate()?;
    let mut rng = stream_rng(config.seed, 0);
    let (n, p, tol) = (config.n, config.p, &config.tol);
    let sig = config.signature();
    (0..config.samples)
        .map(|_| {
            Ok(match kind {
                SampleKind::Vector => gaussian_vector(&mut rng, n).to_json(),
                SampleKind::Rotation => rotation(&mut rng, n).to_json(),
                SampleKind::Motion => motion(&mut rng, n, TRANSLATION_SCALE).to_json(),
                SampleKind::Skew => skew(&mut rng, n, SCREW_BOUND).to_json(),
                SampleKind::Screw => screw(&mut rng, n, SCREW_BOUND).to_json(),
                SampleKind::Plane => plane(&mut rng, n, p).to_json(),
                SampleKind::BundlePoint => bundle_point(&mut rng, n, p, TRANSLATION_SCALE).to_json(),
                SampleKind::CartanRotation => cartan_rotation(&mut rng, n, p, tol)?.to_json(),
                SampleKind::CartanMotion => cartan_motion(&mut rng, sig, TRANSLATION_SCALE, tol)?.to_json(),
                SampleKind::DpGenerator => dp_generator(&mut rng, sig, SCREW_BOUND).to_json(),
                SampleKind::DpElement => dp_element(&mut rng, sig, SCREW_BOUND, TRANSLATION_SCALE).to_json(),
            })
        })
        .collect()
}

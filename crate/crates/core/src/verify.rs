//! Randomized verification of every module invariant.
//!
//! Each property draws from its own ChaCha stream (global seed, property
//! index) and properties run in parallel; aggregation is a max/merge, so the
//! report does not depend on scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::time::Instant;

use crate::bundle::{
    bundle_act, dp_exp_full, dp_log_full, double_projection, find_transporter, fixed_point_residuals,
    is_fixed_point, q_residual, rho, rho_inv, sigma, tau, twisted_act, CartanMotion,
};
use crate::error::Result;
use crate::grassmann::{
    cartan_embed0, dp_exp, plane_distance, q0_residual, rho0, sigma0, twisted_act0, CartanRotation, Plane,
    Signature,
};
use crate::liegroup::{
    se_exp, se_inv, se_log, se_mul, so_exp, so_log, y_omega, y_omega_solve, LogBranch, Motion, Rotation, Screw,
    SkewMatrix,
};
use crate::matcore::{
    canonical_rotation_form, complete_to_special_orthogonal, eigenspace_of_symmetric_involution, projector,
    skew_wedge, wedge, basis_vector, Frame, Mat, Sign,
};
use crate::projective::{half_angle_line, line_bundle_exp, moebius_grid, moebius_seam_check, UnitDirection};
use crate::sample::{self, stream_rng, Config, SampleRng, SCREW_BOUND, TRANSLATION_SCALE};
use crate::tol::Tolerances;

/// One named property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub samples: usize,
    pub max_error: f64,
    pub threshold: f64,
    /// Samples where an operation returned an error.
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    pub properties: Vec<PropertyRecord>,
    pub pass: bool,
    pub wall_time: f64,
}

impl VerifyReport {
    pub fn property(&self, name: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|r| r.name == name)
    }
}

/// Per-sample errors and hard failures for a property.
#[derive(Debug, Default)]
struct Tally {
    errors: Vec<(usize, f64)>,
    samples: usize,
    failures: usize,
    first_failure: Option<(usize, String)>,
}

impl Tally {
    fn record(&mut self, outcome: Result<f64>) {
        match outcome {
            Ok(e) if e.is_finite() => self.errors.push((self.samples, e)),
            Ok(e) => self.fail(format!("non-finite error {e}")),
            Err(e) => self.fail(e.to_string()),
        }
        self.samples += 1;
    }

    fn fail(&mut self, msg: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some((self.samples, msg));
        }
    }

    fn finish(self, name: &str, threshold: f64) -> PropertyRecord {
        let max_error = self.errors.iter().map(|&(_, e)| e).fold(0.0, f64::max);
        let mut over = self.errors.iter().filter(|&&(_, e)| e > threshold);
        let exceeded = over.clone().count();
        let first_over = over
            .next()
            .map(|&(i, e)| (i, format!("sample {i}: error {e:e} exceeds {threshold:e}")));
        let first_failure = match (self.first_failure, first_over) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        let failures = self.failures + exceeded;
        PropertyRecord {
            name: name.to_string(),
            samples: self.samples,
            max_error,
            threshold,
            failures,
            pass: failures == 0,
            first_failure: first_failure.map(|(_, m)| m),
        }
    }
}

struct Ctx<'a> {
    cfg: &'a Config,
    tol: &'a Tolerances,
}

type PropertyFn = fn(&Ctx, &mut SampleRng) -> PropertyRecord;

const PROPERTIES: &[(&str, PropertyFn)] = &[
    ("matcore.skew_wedge_antisymmetric", skew_wedge_antisymmetric),
    ("matcore.projector_idempotent_symmetric", projector_idempotent_symmetric),
    ("matcore.canonical_form_reconstruction", canonical_form_reconstruction),
    ("matcore.frame_completion", frame_completion),
    ("matcore.eigenspace_extraction", eigenspace_extraction),
    ("liegroup.group_axioms", group_axioms),
    ("liegroup.se_exp_series_oracle", se_exp_series_oracle),
    ("liegroup.y_omega_identity", y_omega_identity),
    ("liegroup.y_omega_solve_round_trip", y_omega_solve_round_trip),
    ("liegroup.so_log_round_trip", so_log_round_trip),
    ("liegroup.se_log_round_trip", se_log_round_trip),
    ("grassmann.sigma0_involution", sigma0_involution),
    ("grassmann.sigma0_homomorphism", sigma0_homomorphism),
    ("grassmann.q0_invariance", q0_invariance),
    ("grassmann.rho0_embed_round_trip", rho0_embed_round_trip),
    ("grassmann.embed_rho0_round_trip", embed_rho0_round_trip),
    ("grassmann.rho0_equivariance", rho0_equivariance),
    ("grassmann.dp_exp_in_cartan_model", dp_exp_in_cartan_model),
    ("bundle.fixed_points_from_blocks", fixed_points_from_blocks),
    ("bundle.fixed_point_tests_agree", fixed_point_tests_agree),
    ("bundle.q_invariance", q_invariance),
    ("bundle.tau_image", tau_image),
    ("bundle.tau_exp_routes_agree", tau_exp_routes_agree),
    ("bundle.rho_equivariance", rho_equivariance),
    ("bundle.rho_round_trips", rho_round_trips),
    ("bundle.action_law", action_law),
    ("bundle.transporter", transporter),
    ("bundle.dp_exp_log_round_trip", dp_exp_log_round_trip),
    ("bundle.double_projection", double_projection_oracle),
    ("projective.line_bundle_exp_matches_se_exp", line_bundle_matches_se_exp),
    ("projective.half_angle_matches_rho0", half_angle_matches_rho0),
    ("projective.moebius_seam", moebius_seam),
];

/// Names of all properties, in report order.
pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|(n, _)| *n).collect()
}

/// Runs every property with `config.samples` samples each.
pub fn run(config: &Config) -> Result<VerifyReport> {
    config.validate()?;
    let start = Instant::now();
    let ctx = Ctx {
        cfg: config,
        tol: &config.tol,
    };
    let properties: Vec<PropertyRecord> = PROPERTIES
        .par_iter()
        .enumerate()
        .map(|(i, (_, f))| {
            let mut rng = stream_rng(config.seed, 1000 + i as u64);
            f(&ctx, &mut rng)
        })
        .collect();
    let pass = properties.iter().all(|r| r.pass);
    Ok(VerifyReport {
        n: config.n,
        p: config.p,
        seed: config.seed,
        properties,
        pass,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------- oracles

/// `Σ_{k<terms} Mᵏ/k!`.
pub fn series_exp(m: &Mat, terms: usize) -> Mat {
    let n = m.nrows();
    let mut sum = Mat::identity(n, n);
    let mut term = Mat::identity(n, n);
    for k in 1..terms {
        term = &term * m / k as f64;
        sum += &term;
    }
    sum
}

/// Orthogonal projector onto the column span of `m` from its SVD.
pub fn svd_projector(m: &Mat) -> Mat {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-12 * smax.max(1.0))
        .collect();
    let basis = u.select_columns(keep.iter());
    &basis * basis.transpose()
}

// ---------------------------------------------------------------- helpers

fn unit_direction(rng: &mut SampleRng, n: usize) -> UnitDirection {
    loop {
        let mut u = sample::gaussian_vector(rng, n);
        u[0] = 0.0;
        if u.norm() > 1e-3 {
            return UnitDirection::normalized(u).expect("nonzero and orthogonal to E_1");
        }
    }
}

/// `diag(R₁, R₂)` with `R₁ ∈ O(p)`, `R₂ ∈ O(q)` and `det = 1`.
fn block_rotation(rng: &mut SampleRng, sig: Signature) -> Mat {
    let (p, q) = (sig.p(), sig.q());
    let mut r1 = sample::rotation(rng, p).into_inner();
    let mut r2 = sample::rotation(rng, q).into_inner();
    if rng.random::<bool>() {
        r1.column_mut(0).neg_mut();
        r2.column_mut(0).neg_mut();
    }
    let mut m = Mat::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(&r1);
    m.view_mut((p, p), (q, q)).copy_from(&r2);
    m
}

/// A sample of `Q`: `R J` a symmetric involution whose `(−1)`-eigenspace has
/// a random dimension of the parity of `p`, and `X` in that eigenspace. With
/// `k = p` this is `S_p`.
fn q_sample(rng: &mut SampleRng, sig: Signature, any_component: bool) -> Motion {
    let n = sig.n();
    let k = if any_component {
        let choices: Vec<usize> = (0..=n).filter(|k| k % 2 == sig.p() % 2).collect();
        choices[rng.random_range(0..choices.len())]
    } else {
        sig.p()
    };
    let b = sample::rotation(rng, n).into_inner();
    let mut d = Mat::identity(n, n);
    for i in 0..k {
        d[(i, i)] = -1.0;
    }
    let s = &b * d * b.transpose();
    let r = s * sig.matrix();
    let x = b.columns(0, k) * sample::gaussian_vector(rng, k) * TRANSLATION_SCALE;
    Motion::new(Rotation::from_mat_unchecked(r), x).expect("same dimension")
}

fn each_config<F>(configs: &[(usize, usize)], samples: usize, rng: &mut SampleRng, mut f: F)
where
    F: FnMut(&mut SampleRng, Signature),
{
    for &(n, p) in configs {
        let sig = Signature::for_dim(n, p).expect("fixed configurations are valid");
        for _ in 0..samples {
            f(rng, sig);
        }
    }
}

fn cartan_motion_sample(rng: &mut SampleRng, sig: Signature, tol: &Tolerances) -> Result<CartanMotion> {
    tau(&sample::motion(rng, sig.n(), TRANSLATION_SCALE), &sig, tol)
}

// ---------------------------------------------------------------- matcore

fn skew_wedge_antisymmetric(ctx: &Ctx, _: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    for n in 2..=ctx.cfg.n.max(2) {
        for i in 0..n {
            for j in i + 1..n {
                t.record(skew_wedge(i, j, n).map(|m| (m.transpose() + &m).amax()));
            }
        }
    }
    t.finish("matcore.skew_wedge_antisymmetric", 0.0)
}

fn projector_idempotent_symmetric(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let pl = sample::plane(rng, n, p);
        let pm = projector(pl.frame());
        let e = (&pm * &pm - &pm).norm().max((&pm - pm.transpose()).norm());
        t.record(Ok(e));
    }
    t.finish("matcore.projector_idempotent_symmetric", 1e-12 * n as f64)
}

fn canonical_form_reconstruction(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    for k in 0..ctx.cfg.samples {
        let n = 1 + k % 8;
        let r = sample::rotation(rng, n);
        t.record(
            canonical_rotation_form(r.mat(), ctx.tol).map(|f| (f.reconstruct_rotation() - r.mat()).norm()),
        );
    }
    t.finish("matcore.canonical_form_reconstruction", 1e-10)
}

fn frame_completion(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let pl = sample::plane(rng, n, p);
        let a = complete_to_special_orthogonal(pl.frame());
        let lead = a.columns(0, p).into_owned();
        let e = (a.determinant() - 1.0).abs().max((svd_projector(&lead) - pl.projector()).norm());
        t.record(Ok(e));
    }
    t.finish("matcore.frame_completion", 1e-10)
}

fn eigenspace_extraction(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let n = ctx.cfg.n;
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let k = rng.random_range(0..=n);
        let b = sample::rotation(rng, n).into_inner();
        let mut d = Mat::identity(n, n);
        for i in 0..k {
            d[(i, i)] = -1.0;
        }
        let s = &b * d * b.transpose();
        t.record((|| {
            let mut e: f64 = 0.0;
            for sign in [Sign::Minus, Sign::Plus] {
                let f = eigenspace_of_symmetric_involution(&s, sign, ctx.tol)?;
                let expected = if sign == Sign::Minus { k } else { n - k };
                if f.p() != expected {
                    return Ok(f64::INFINITY);
                }
                e = e.max((&s * f.cols() - f.cols() * sign.value()).norm());
            }
            Ok(e)
        })());
    }
    t.finish("matcore.eigenspace_extraction", 1e-10)
}

// ---------------------------------------------------------------- liegroup

fn group_axioms(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    for k in 0..ctx.cfg.samples {
        let n = 1 + k % 8;
        let a = sample::motion(rng, n, TRANSLATION_SCALE);
        let b = sample::motion(rng, n, TRANSLATION_SCALE);
        let c = sample::motion(rng, n, TRANSLATION_SCALE);
        t.record((|| {
            let assoc = se_mul(&se_mul(&a, &b)?, &c)?.distance(&se_mul(&a, &se_mul(&b, &c)?)?);
            let id = Motion::identity(n);
            let inv = se_mul(&a, &se_inv(&a))?
                .distance(&id)
                .max(se_mul(&se_inv(&a), &a)?.distance(&id));
            Ok(assoc.max(inv) / n as f64)
        })());
    }
    t.finish("liegroup.group_axioms", 1e-11)
}

fn se_exp_series_oracle(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    for k in 0..ctx.cfg.samples {
        let n = 2 + k % 5;
        let xi = sample::screw(rng, n, SCREW_BOUND);
        t.record(se_exp(&xi, ctx.tol).map(|g| (g.to_homogeneous() - series_exp(&xi.to_homogeneous(), 50)).amax()));
    }
    t.finish("liegroup.se_exp_series_oracle", 1e-9)
}

fn y_omega_identity(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let n = ctx.cfg.n;
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let w = sample::skew(rng, n, SCREW_BOUND);
        let v = sample::gaussian_vector(rng, n);
        t.record((|| {
            let y = y_omega(&w, &v, ctx.tol)?;
            let r = so_exp(&w, ctx.tol)?;
            Ok((w.mat() * y - (r.mat() - Mat::identity(n, n)) * &v).norm())
        })());
    }
    t.finish("liegroup.y_omega_identity", 1e-10)
}

fn y_omega_solve_round_trip(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let n = ctx.cfg.n;
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        // ‖ω‖_F ≤ √2 (π − 0.01) keeps every canonical angle inside (−π, π).
        let w = sample::skew(rng, n, 2f64.sqrt() * (PI - 0.01));
        let v = sample::gaussian_vector(rng, n);
        t.record((|| {
            let y = y_omega(&w, &v, ctx.tol)?;
            Ok((y_omega_solve(&w, &y, ctx.tol)? - &v).norm())
        })());
    }
    t.finish("liegroup.y_omega_solve_round_trip", 1e-9)
}

fn so_log_round_trip(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let n = ctx.cfg.n;
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let w = sample::skew(rng, n, 2f64.sqrt() * (PI - 1e-3));
        t.record((|| {
            let r = so_exp(&w, ctx.tol)?;
            let back = so_exp(&so_log(&r, LogBranch::Strict, ctx.tol)?, ctx.tol)?;
            Ok((back.mat() - r.mat()).norm())
        })());
    }
    t.finish("liegroup.so_log_round_trip", 1e-8)
}

fn se_log_round_trip(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let n = ctx.cfg.n;
    let mut t = Tally::default();
    while t.samples < ctx.cfg.samples {
        let g = sample::motion(rng, n, TRANSLATION_SCALE);
        let Ok(form) = canonical_rotation_form(g.rot().mat(), ctx.tol) else {
            t.record(canonical_rotation_form(g.rot().mat(), ctx.tol).map(|_| 0.0));
            continue;
        };
        if form.angles.iter().any(|a| a.abs() > PI - 1e-3) {
            continue;
        }
        t.record((|| {
            let xi = se_log(&g, LogBranch::Strict, ctx.tol)?;
            Ok(se_exp(&xi, ctx.tol)?.distance(&g))
        })());
    }
    t.finish("liegroup.se_log_round_trip", 1e-8)
}

// ---------------------------------------------------------------- grassmann

fn sigma0_involution(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let r = sample::rotation(rng, sig.n());
        t.record((|| Ok((sigma0(&sigma0(&r, &sig)?, &sig)?.mat() - r.mat()).amax()))());
    }
    t.finish("grassmann.sigma0_involution", 0.0)
}

fn sigma0_homomorphism(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let a = sample::rotation(rng, sig.n());
        let b = sample::rotation(rng, sig.n());
        t.record((|| {
            let lhs = sigma0(&a.compose(&b)?, &sig)?;
            let rhs = sigma0(&a, &sig)?.compose(&sigma0(&b, &sig)?)?;
            Ok((lhs.mat() - rhs.mat()).norm())
        })());
    }
    t.finish("grassmann.sigma0_homomorphism", 1e-12 * sig.n() as f64)
}

const Q_CONFIGS: [(usize, usize); 4] = [(2, 1), (3, 1), (4, 2), (5, 2)];

fn q0_invariance(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    each_config(&Q_CONFIGS, ctx.cfg.samples, rng, |rng, sig| {
        let a = sample::rotation(rng, sig.n());
        let r = q_sample(rng, sig, true).into_parts().0;
        t.record((|| q0_residual(&twisted_act0(&a, &r, &sig)?, &sig))());
    });
    t.finish("grassmann.q0_invariance", ctx.tol.invol)
}

fn rho0_embed_round_trip(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let pl = sample::plane(rng, n, p);
        t.record((|| Ok(plane_distance(&rho0(&cartan_embed0(&pl, ctx.tol)?, ctx.tol)?, &pl)))());
    }
    t.finish("grassmann.rho0_embed_round_trip", ctx.tol.plane)
}

fn embed_rho0_round_trip(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let gen = sample::dp_generator(rng, sig, SCREW_BOUND);
        t.record((|| {
            let r = dp_exp(&gen, ctx.tol)?;
            let back = cartan_embed0(&rho0(&r, ctx.tol)?, ctx.tol)?;
            Ok((back.rot().mat() - r.rot().mat()).norm())
        })());
    }
    t.finish("grassmann.embed_rho0_round_trip", 1e-9)
}

fn rho0_equivariance(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let a = sample::rotation(rng, sig.n());
        let gen = sample::dp_generator(rng, sig, SCREW_BOUND);
        t.record((|| {
            let r = dp_exp(&gen, ctx.tol)?;
            let moved = CartanRotation::new(twisted_act0(&a, r.rot(), &sig)?, sig, ctx.tol)?;
            let lhs = rho0(&moved, ctx.tol)?;
            let rhs = rho0(&r, ctx.tol)?.image(&a)?;
            Ok(plane_distance(&lhs, &rhs))
        })());
    }
    t.finish("grassmann.rho0_equivariance", ctx.tol.plane)
}

fn dp_exp_in_cartan_model(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let gen = sample::dp_generator(rng, sig, 2.0 * PI);
        t.record((|| {
            let r = dp_exp(&gen, ctx.tol)?;
            CartanRotation::new(r.rot().clone(), sig, ctx.tol)?;
            q0_residual(r.rot(), &sig)
        })());
    }
    t.finish("grassmann.dp_exp_in_cartan_model", ctx.tol.invol)
}

// ---------------------------------------------------------------- bundle

fn fixed_points_from_blocks(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let r = block_rotation(rng, sig);
        let mut x = sample::gaussian_vector(rng, sig.n()) * TRANSLATION_SCALE;
        x.rows_mut(0, sig.p()).fill(0.0);
        let g = Motion::new(Rotation::from_mat_unchecked(r), x).expect("same dimension");
        t.record((|| {
            if !is_fixed_point(&g, &sig, ctx.tol)? {
                return Ok(f64::INFINITY);
            }
            Ok(sigma(&g, &sig)?.distance(&g))
        })());
    }
    t.finish("bundle.fixed_points_from_blocks", 1e-12)
}

fn fixed_point_tests_agree(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let n = sig.n();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let r = block_rotation(rng, sig);
        let mut x = sample::gaussian_vector(rng, n) * TRANSLATION_SCALE;
        x.rows_mut(0, sig.p()).fill(0.0);
        let base = Motion::new(Rotation::from_mat_unchecked(r), x).expect("same dimension");
        // Perturbations from 1e-13 to 1e-5 straddle the membership threshold.
        let eps = 10f64.powf(rng.random_range(-13.0..-5.0));
        let xi = sample::screw(rng, n, 1.0);
        let norm = xi.norm().max(1e-300);
        t.record((|| {
            let g = se_mul(&base, &se_exp(&xi.scale(eps / norm), ctx.tol)?)?;
            let res = fixed_point_residuals(&g, &sig)?;
            is_fixed_point(&g, &sig, ctx.tol)?;
            Ok((res.involution - res.structural).abs())
        })());
    }
    t.finish("bundle.fixed_point_tests_agree", ctx.tol.invol)
}

fn q_invariance(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    each_config(&Q_CONFIGS, ctx.cfg.samples, rng, |rng, sig| {
        let a = sample::motion(rng, sig.n(), TRANSLATION_SCALE);
        let g = q_sample(rng, sig, true);
        t.record((|| {
            let before = q_residual(&g, &sig)?;
            let after = q_residual(&twisted_act(&a, &g, &sig)?, &sig)?;
            Ok(before.max(after))
        })());
    });
    t.finish("bundle.q_invariance", ctx.tol.invol)
}

fn tau_image(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        t.record((|| {
            let s = cartan_motion_sample(rng, sig, ctx.tol)?;
            Ok(sigma(s.motion(), &sig)?.distance(&se_inv(s.motion())))
        })());
    }
    t.finish("bundle.tau_image", 1e-10)
}

fn tau_exp_routes_agree(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let xi = sample::dp_element(rng, sig, SCREW_BOUND, TRANSLATION_SCALE);
        t.record((|| {
            let full = se_exp(&xi.embed(), ctx.tol)?;
            let half = se_exp(&xi.embed().scale(0.5), ctx.tol)?;
            Ok(tau(&half, &sig, ctx.tol)?.motion().distance(&full))
        })());
    }
    t.finish("bundle.tau_exp_routes_agree", 1e-10)
}

fn rho_equivariance(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let a = sample::motion(rng, sig.n(), TRANSLATION_SCALE);
        t.record((|| {
            let s = cartan_motion_sample(rng, sig, ctx.tol)?;
            let moved = CartanMotion::new(twisted_act(&a, s.motion(), &sig)?, sig, ctx.tol)?;
            let lhs = rho(&moved, ctx.tol)?;
            let rhs = bundle_act(&a, &rho(&s, ctx.tol)?, ctx.tol)?;
            Ok(lhs.distance(&rhs))
        })());
    }
    t.finish("bundle.rho_equivariance", 1e-9)
}

fn rho_round_trips(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let b = sample::bundle_point(rng, sig.n(), sig.p(), TRANSLATION_SCALE);
        t.record((|| {
            let s = cartan_motion_sample(rng, sig, ctx.tol)?;
            let e1 = rho(&rho_inv(&b, ctx.tol)?, ctx.tol)?.distance(&b);
            let e2 = rho_inv(&rho(&s, ctx.tol)?, ctx.tol)?.motion().distance(s.motion());
            Ok(e1.max(e2))
        })());
    }
    t.finish("bundle.rho_round_trips", 1e-9)
}

fn action_law(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let a1 = sample::motion(rng, n, TRANSLATION_SCALE);
        let a2 = sample::motion(rng, n, TRANSLATION_SCALE);
        let b = sample::bundle_point(rng, n, p, TRANSLATION_SCALE);
        t.record((|| {
            let lhs = bundle_act(&se_mul(&a1, &a2)?, &b, ctx.tol)?;
            let rhs = bundle_act(&a1, &bundle_act(&a2, &b, ctx.tol)?, ctx.tol)?;
            Ok(lhs.distance(&rhs))
        })());
    }
    t.finish("bundle.action_law", 1e-10)
}

fn transporter(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let src = sample::bundle_point(rng, n, p, TRANSLATION_SCALE);
        let dst = sample::bundle_point(rng, n, p, TRANSLATION_SCALE);
        t.record((|| {
            let g = find_transporter(&src, &dst)?;
            Ok(bundle_act(&g, &src, ctx.tol)?.distance(&dst))
        })());
    }
    t.finish("bundle.transporter", 1e-9)
}

fn dp_exp_log_round_trip(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let sig = ctx.cfg.signature();
    let mut t = Tally::default();
    for _ in 0..ctx.cfg.samples {
        let xi = sample::dp_element(rng, sig, PI - 0.1, TRANSLATION_SCALE);
        t.record((|| Ok(dp_log_full(&dp_exp_full(&xi, ctx.tol)?, ctx.tol)?.distance(&xi)))());
    }
    t.finish("bundle.dp_exp_log_round_trip", 1e-8)
}

const PROJECTION_CONFIGS: [(usize, usize); 6] = [(2, 1), (3, 1), (3, 2), (4, 2), (5, 2), (6, 3)];

fn double_projection_oracle(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    each_config(&PROJECTION_CONFIGS, ctx.cfg.samples, rng, |rng, sig| {
        let a = sample::rotation(rng, sig.n());
        let x = sample::gaussian_vector(rng, sig.n()) * TRANSLATION_SCALE;
        let lead = a.mat().columns(0, sig.p()).into_owned();
        t.record(double_projection(&a, &x, &sig).map(|d| (d - svd_projector(&lead) * &x * 2.0).norm()));
    });
    t.finish("bundle.double_projection", 1e-10)
}

// ---------------------------------------------------------------- projective

fn line_bundle_matches_se_exp(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    for k in 0..ctx.cfg.samples {
        let n = 2 + k % 5;
        let u = unit_direction(rng, n);
        let theta = rng.random_range(-PI..PI);
        let lambda = sample::gaussian(rng) * TRANSLATION_SCALE;
        t.record((|| {
            let closed = line_bundle_exp(theta, &u, lambda)?;
            let e1 = basis_vector(n, 0);
            let omega = SkewMatrix::new(wedge(&e1, u.vector())? * -theta)?;
            let g = se_exp(&Screw::new(omega, e1 * lambda)?, ctx.tol)?;
            Ok(closed.distance(&g))
        })());
    }
    t.finish("projective.line_bundle_exp_matches_se_exp", 1e-10)
}

fn half_angle_matches_rho0(ctx: &Ctx, rng: &mut SampleRng) -> PropertyRecord {
    let mut t = Tally::default();
    for k in 0..ctx.cfg.samples {
        let n = 2 + k % 5;
        let u = unit_direction(rng, n);
        let theta = rng.random_range(-PI..PI);
        t.record((|| {
            let sig = Signature::for_dim(n, 1)?;
            let r = crate::projective::rotation_in_plane(theta, &u, ctx.tol)?;
            let plane = rho0(&CartanRotation::new(r, sig, ctx.tol)?, ctx.tol)?;
            let line = half_angle_line(theta, &u);
            let frame = Frame::new(Mat::from_columns(&[line.representative().clone()]), ctx.tol)?;
            Ok(plane_distance(&plane, &Plane::from_frame(frame)))
        })());
    }
    t.finish("projective.half_angle_matches_rho0", ctx.tol.plane)
}

fn moebius_seam(_: &Ctx, _: &mut SampleRng) -> PropertyRecord {
    let (nt, nl) = (128, 9);
    let mut t = Tally::default();
    let resolution = 2.0 * PI / nt as f64;
    match moebius_grid(nt, nl, 2.0).and_then(|g| moebius_seam_check(&g, nt, nl)) {
        Ok(rep) => {
            t.record(Ok(rep.max_line_gap));
            for _ in 1..rep.pairs {
                t.record(Ok(0.0));
            }
            for _ in rep.matched..rep.pairs {
                t.fail("seam pair without line coincidence or fiber reversal".into());
            }
        }
        Err(e) => t.record(Err(e)),
    }
    t.finish("projective.moebius_seam", resolution)
}

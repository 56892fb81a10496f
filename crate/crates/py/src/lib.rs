//! Python bindings. Matrices cross as nested lists (row-major), vectors as
//! flat lists; any sequence of floats is accepted on input, numpy arrays
//! included.

use bundle_core::bundle as bn;
use bundle_core::grassmann as gr;
use bundle_core::json::Wire;
use bundle_core::liegroup as lg;
use bundle_core::matcore::{self, Mat, Vector};
use bundle_core::projective as pj;
use bundle_core::sample::{self as smp, Config, SampleKind};
use bundle_core::{verify as vf, Tolerances};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(cartan_bundle, CartanBundleError, PyValueError, "Raised with (code, detail).");

fn err(e: bundle_core::Error) -> PyErr {
    CartanBundleError::new_err((e.code(), e.to_string()))
}

trait OrRaise<T> {
    fn raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for bundle_core::Result<T> {
    fn raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn tol() -> PyResult<Tolerances> {
    Tolerances::from_env().raise()
}

fn to_mat(rows: Vec<Vec<f64>>) -> PyResult<Mat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(err(bundle_core::Error::DimensionMismatch("ragged matrix rows".into())));
    }
    Ok(Mat::from_fn(r, c, |i, j| rows[i][j]))
}

fn from_mat(m: &Mat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn to_vec(v: Vec<f64>) -> Vector {
    Vector::from_vec(v)
}

fn from_vec(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

fn loads(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn branch(pi: bool) -> lg::LogBranch {
    if pi {
        lg::LogBranch::ResolvePi
    } else {
        lg::LogBranch::Strict
    }
}

/// One `#[pymethods]` block holding `body` plus JSON and repr methods.
macro_rules! py_methods {
    ($py:ident, $core:ty, { $($body:tt)* }) => {
        #[pymethods]
        impl $py {
            $($body)*

            fn to_json(&self) -> String {
                self.0.to_json_string()
            }

            #[staticmethod]
            fn from_json(text: &str) -> PyResult<Self> {
                Ok(Self(<$core>::from_json_str(text, &tol()?).raise()?))
            }

            fn __repr__(&self) -> String {
                format!("{}({})", stringify!($py), self.0.to_json_string())
            }
        }
    };
}

/// Element of SO(n).
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct Rotation(lg::Rotation);

py_methods!(Rotation, lg::Rotation, {
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self(lg::Rotation::new(to_mat(matrix)?, &tol()?).raise()?))
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(lg::Rotation::identity(n))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.mat())
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn __mul__(&self, other: &Rotation) -> PyResult<Self> {
        Ok(Self(self.0.compose(&other.0).raise()?))
    }

    fn apply(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(from_vec(&self.0.apply(&to_vec(x)).raise()?))
    }
});

/// Element of SE(n) = SO(n) ⋉ ℝⁿ.
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct Motion(lg::Motion);

py_methods!(Motion, lg::Motion, {
    #[new]
    fn new(rotation: Vec<Vec<f64>>, translation: Vec<f64>) -> PyResult<Self> {
        let r = lg::Rotation::new(to_mat(rotation)?, &tol()?).raise()?;
        Ok(Self(lg::Motion::new(r, to_vec(translation)).raise()?))
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(lg::Motion::identity(n))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn rotation(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.rot().mat())
    }

    #[getter]
    fn translation(&self) -> Vec<f64> {
        from_vec(self.0.trans())
    }

    fn homogeneous(&self) -> Vec<Vec<f64>> {
        from_mat(&self.0.to_homogeneous())
    }

    fn inverse(&self) -> Self {
        Self(lg::se_inv(&self.0))
    }

    fn __mul__(&self, other: &Motion) -> PyResult<Self> {
        Ok(Self(lg::se_mul(&self.0, &other.0).raise()?))
    }

    fn apply(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(from_vec(&self.0.apply(&to_vec(x)).raise()?))
    }

    fn distance(&self, other: &Motion) -> f64 {
        self.0.distance(&other.0)
    }
});

/// Element of so(n).
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct SkewMatrix(lg::SkewMatrix);

py_methods!(SkewMatrix, lg::SkewMatrix, {
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self(lg::SkewMatrix::new(to_mat(matrix)?).raise()?))
    }

    /// `E_i ∧ E_j` with zero-based `i < j`.
    #[staticmethod]
    fn wedge(i: usize, j: usize, n: usize) -> PyResult<Self> {
        Ok(Self(lg::SkewMatrix::new(matcore::skew_wedge(i, j, n).raise()?).raise()?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.mat())
    }

    fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }
});

/// Element `(ω, v)` of se(n).
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct Screw(lg::Screw);

py_methods!(Screw, lg::Screw, {
    #[new]
    fn new(omega: Vec<Vec<f64>>, v: Vec<f64>) -> PyResult<Self> {
        let w = lg::SkewMatrix::new(to_mat(omega)?).raise()?;
        Ok(Self(lg::Screw::new(w, to_vec(v)).raise()?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn omega(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.omega().mat())
    }

    #[getter]
    fn v(&self) -> Vec<f64> {
        from_vec(self.0.v())
    }

    fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    fn distance(&self, other: &Screw) -> f64 {
        self.0.distance(&other.0)
    }
});

/// p-plane in ℝⁿ, built from an n×p spanning set.
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct Plane(gr::Plane);

py_methods!(Plane, gr::Plane, {
    #[new]
    fn new(vectors: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self(gr::plane_from_span(&to_mat(vectors)?, &tol()?).raise()?))
    }

    #[staticmethod]
    fn standard(n: usize, p: usize) -> PyResult<Self> {
        Ok(Self(gr::Plane::standard(n, p).raise()?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    #[getter]
    fn frame(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.frame().cols())
    }

    #[getter]
    fn projector(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.projector())
    }

    fn distance(&self, other: &Plane) -> f64 {
        gr::plane_distance(&self.0, &other.0)
    }

    fn principal_angles(&self) -> Vec<f64> {
        gr::principal_angles_to_standard(&self.0)
    }
});

/// Element of S_p⁰ ⊂ SO(n).
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct CartanRotation(gr::CartanRotation);

py_methods!(CartanRotation, gr::CartanRotation, {
    #[new]
    fn new(matrix: Vec<Vec<f64>>, p: usize) -> PyResult<Self> {
        let t = tol()?;
        let r = lg::Rotation::new(to_mat(matrix)?, &t).raise()?;
        let sig = gr::Signature::for_dim(r.n(), p).raise()?;
        Ok(Self(gr::CartanRotation::new(r, sig, &t).raise()?))
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.rot().mat())
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.signature().p()
    }

    #[getter]
    fn q(&self) -> usize {
        self.0.signature().q()
    }
});

/// Point `(π, Y)` with `Y ∈ π`.
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct BundlePoint(bn::BundlePoint);

py_methods!(BundlePoint, bn::BundlePoint, {
    #[new]
    fn new(plane: &Plane, fiber: Vec<f64>) -> PyResult<Self> {
        Ok(Self(bn::BundlePoint::new(plane.0.clone(), to_vec(fiber), &tol()?).raise()?))
    }

    #[getter]
    fn plane(&self) -> Plane {
        Plane(self.0.plane().clone())
    }

    #[getter]
    fn fiber(&self) -> Vec<f64> {
        from_vec(self.0.fiber())
    }

    fn distance(&self, other: &BundlePoint) -> f64 {
        self.0.distance(&other.0)
    }
});

/// Element of S_p ⊂ SE(n).
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct CartanMotion(bn::CartanMotion);

py_methods!(CartanMotion, bn::CartanMotion, {
    #[new]
    fn new(motion: &Motion, p: usize) -> PyResult<Self> {
        let sig = gr::Signature::for_dim(motion.0.n(), p).raise()?;
        Ok(Self(bn::CartanMotion::new(motion.0.clone(), sig, &tol()?).raise()?))
    }

    #[getter]
    fn motion(&self) -> Motion {
        Motion(self.0.motion().clone())
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.signature().p()
    }

    #[getter]
    fn q(&self) -> usize {
        self.0.signature().q()
    }
});

/// Element `(B, v)` of d_p: B is q×p, v has length p.
#[pyclass(module = "cartan_bundle", frozen, from_py_object)]
#[derive(Clone)]
struct DpElement(bn::DpElement);

py_methods!(DpElement, bn::DpElement, {
    #[new]
    fn new(b: Vec<Vec<f64>>, v: Vec<f64>) -> PyResult<Self> {
        let b = to_mat(b)?;
        let sig = gr::Signature::new(b.ncols(), b.nrows()).raise()?;
        let gen = gr::DpGenerator::new(sig, b).raise()?;
        Ok(Self(bn::DpElement::new(gen, to_vec(v)).raise()?))
    }

    #[getter]
    fn b(&self) -> Vec<Vec<f64>> {
        from_mat(self.0.generator().block())
    }

    #[getter]
    fn v(&self) -> Vec<f64> {
        from_vec(self.0.coefficients())
    }

    fn screw(&self) -> Screw {
        Screw(self.0.embed())
    }

    fn distance(&self, other: &DpElement) -> f64 {
        self.0.distance(&other.0)
    }
});

#[pyfunction]
fn se_exp(xi: &Screw) -> PyResult<Motion> {
    Ok(Motion(lg::se_exp(&xi.0, &tol()?).raise()?))
}

#[pyfunction]
#[pyo3(signature = (g, branch_pi = false))]
fn se_log(g: &Motion, branch_pi: bool) -> PyResult<Screw> {
    Ok(Screw(lg::se_log(&g.0, branch(branch_pi), &tol()?).raise()?))
}

#[pyfunction]
fn so_exp(omega: &SkewMatrix) -> PyResult<Rotation> {
    Ok(Rotation(lg::so_exp(&omega.0, &tol()?).raise()?))
}

#[pyfunction]
#[pyo3(signature = (r, branch_pi = false))]
fn so_log(r: &Rotation, branch_pi: bool) -> PyResult<SkewMatrix> {
    Ok(SkewMatrix(lg::so_log(&r.0, branch(branch_pi), &tol()?).raise()?))
}

#[pyfunction]
fn y_omega(omega: &SkewMatrix, v: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(from_vec(&lg::y_omega(&omega.0, &to_vec(v), &tol()?).raise()?))
}

#[pyfunction]
fn cartan_embed0(plane: &Plane) -> PyResult<CartanRotation> {
    Ok(CartanRotation(gr::cartan_embed0(&plane.0, &tol()?).raise()?))
}

#[pyfunction]
fn rho0(r: &CartanRotation) -> PyResult<Plane> {
    Ok(Plane(gr::rho0(&r.0, &tol()?).raise()?))
}

#[pyfunction]
fn tau(g: &Motion, p: usize) -> PyResult<CartanMotion> {
    let sig = gr::Signature::for_dim(g.0.n(), p).raise()?;
    Ok(CartanMotion(bn::tau(&g.0, &sig, &tol()?).raise()?))
}

/// `a g σ(a⁻¹)`.
#[pyfunction]
fn twisted_act(a: &Motion, g: &Motion, p: usize) -> PyResult<Motion> {
    let sig = gr::Signature::for_dim(g.0.n(), p).raise()?;
    Ok(Motion(bn::twisted_act(&a.0, &g.0, &sig).raise()?))
}

#[pyfunction]
fn bundle_act(a: &Motion, b: &BundlePoint) -> PyResult<BundlePoint> {
    Ok(BundlePoint(bn::bundle_act(&a.0, &b.0, &tol()?).raise()?))
}

#[pyfunction]
fn rho(s: &CartanMotion) -> PyResult<BundlePoint> {
    Ok(BundlePoint(bn::rho(&s.0, &tol()?).raise()?))
}

#[pyfunction]
fn rho_inv(b: &BundlePoint) -> PyResult<CartanMotion> {
    Ok(CartanMotion(bn::rho_inv(&b.0, &tol()?).raise()?))
}

#[pyfunction]
fn find_transporter(src: &BundlePoint, dst: &BundlePoint) -> PyResult<Motion> {
    Ok(Motion(bn::find_transporter(&src.0, &dst.0).raise()?))
}

#[pyfunction]
fn dp_exp(xi: &DpElement) -> PyResult<CartanMotion> {
    Ok(CartanMotion(bn::dp_exp_full(&xi.0, &tol()?).raise()?))
}

#[pyfunction]
fn dp_log(s: &CartanMotion) -> PyResult<DpElement> {
    Ok(DpElement(bn::dp_log_full(&s.0, &tol()?).raise()?))
}

/// `exp(θ E_1∧U + λ E_1)` in closed form; `u` must be a unit vector orthogonal to E_1.
#[pyfunction]
fn line_bundle_exp(theta: f64, u: Vec<f64>, lam: f64) -> PyResult<Motion> {
    let u = pj::UnitDirection::new(to_vec(u)).raise()?;
    Ok(Motion(pj::line_bundle_exp(theta, &u, lam).raise()?))
}

/// Grid records as dicts.
#[pyfunction]
#[pyo3(signature = (num_theta = 64, num_lambda = 9, lambda_max = 2.0))]
fn moebius_grid(py: Python<'_>, num_theta: usize, num_lambda: usize, lambda_max: f64) -> PyResult<Py<PyAny>> {
    let records = pj::moebius_grid(num_theta, num_lambda, lambda_max).raise()?;
    loads(py, &serde_json::to_string(&records).expect("records serialize"))
}

fn config(n: usize, p: usize, seed: u64, samples: usize) -> PyResult<Config> {
    let mut cfg = Config::new(n, p, seed, samples).raise()?;
    cfg.tol = tol()?;
    cfg.validate().raise()?;
    Ok(cfg)
}

/// Seeded samples as JSON-shaped dicts; identical arguments give identical output.
#[pyfunction]
#[pyo3(signature = (kind, n = 3, p = 1, seed = 0, samples = 1))]
fn sample(py: Python<'_>, kind: &str, n: usize, p: usize, seed: u64, samples: usize) -> PyResult<Py<PyAny>> {
    let kind: SampleKind = kind.parse().raise()?;
    let values = smp::sample(kind, &config(n, p, seed, samples)?).raise()?;
    loads(py, &serde_json::Value::Array(values).to_string())
}

/// Runs the verification harness and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (n = 3, p = 1, seed = 0, samples = 100))]
fn verify(py: Python<'_>, n: usize, p: usize, seed: u64, samples: usize) -> PyResult<Py<PyAny>> {
    let cfg = config(n, p, seed, samples)?;
    let report = py.detach(|| vf::run(&cfg)).raise()?;
    loads(py, &serde_json::to_string(&report).expect("report serializes"))
}

#[pymodule]
#[pyo3(name = "cartan_bundle")]
fn cartan_bundle(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CartanBundleError", m.py().get_type::<CartanBundleError>())?;
    m.add_class::<Rotation>()?;
    m.add_class::<Motion>()?;
    m.add_class::<SkewMatrix>()?;
    m.add_class::<Screw>()?;
    m.add_class::<Plane>()?;
    m.add_class::<CartanRotation>()?;
    m.add_class::<BundlePoint>()?;
    m.add_class::<CartanMotion>()?;
    m.add_class::<DpElement>()?;
    m.add_function(wrap_pyfunction!(se_exp, m)?)?;
    m.add_function(wrap_pyfunction!(se_log, m)?)?;
    m.add_function(wrap_pyfunction!(so_exp, m)?)?;
    m.add_function(wrap_pyfunction!(so_log, m)?)?;
    m.add_function(wrap_pyfunction!(y_omega, m)?)?;
    m.add_function(wrap_pyfunction!(cartan_embed0, m)?)?;
    m.add_function(wrap_pyfunction!(rho0, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_act, m)?)?;
    m.add_function(wrap_pyfunction!(bundle_act, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(rho_inv, m)?)?;
    m.add_function(wrap_pyfunction!(find_transporter, m)?)?;
    m.add_function(wrap_pyfunction!(dp_exp, m)?)?;
    m.add_function(wrap_pyfunction!(dp_log, m)?)?;
    m.add_function(wrap_pyfunction!(line_bundle_exp, m)?)?;
    m.add_function(wrap_pyfunction!(moebius_grid, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

//! JSON wire format.
//!
//! * matrix: `{"rows": n, "cols": m, "data": [row-major doubles]}`
//! * plane: `{"n": n, "p": p, "frame": matrix}`
//! * motion: `{"R": matrix, "X": [..]}`; screw: `{"omega": matrix, "v": [..]}`
//! * bundle point: `{"plane": plane, "fiber": [..]}`
//! * Cartan motion: motion fields plus `{"p": p, "q": q}`
//! * Cartan rotation: `{"R": matrix, "p": p, "q": q}`
//! * d_p generator: `{"p": p, "q": q, "B": matrix}`; d_p element adds `"v"`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bundle::{BundlePoint, CartanMotion, DpElement};
use crate::error::{Error, Result};
use crate::grassmann::{CartanRotation, DpGenerator, Plane, Signature};
use crate::liegroup::{Motion, Rotation, Screw, SkewMatrix};
use crate::matcore::{orthonormalize, Mat, Vector};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&Mat> for MatrixJson {
    fn from(m: &Mat) -> Self {
        let (rows, cols) = m.shape();
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect();
        MatrixJson { rows, cols, data }
    }
}

impl TryFrom<MatrixJson> for Mat {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Mat> {
        if j.data.len() != j.rows * j.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix declares {}x{} but carries {} entries",
                j.rows,
                j.cols,
                j.data.len()
            )));
        }
        if j.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("matrix has non-finite entries".into()));
        }
        Ok(Mat::from_row_slice(j.rows, j.cols, &j.data))
    }
}

fn vector_from(data: Vec<f64>) -> Result<Vector> {
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidValue("vector has non-finite entries".into()));
    }
    Ok(Vector::from_vec(data))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneJson {
    pub n: usize,
    pub p: usize,
    pub frame: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionJson {
    #[serde(rename = "R")]
    pub r: MatrixJson,
    #[serde(rename = "X")]
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScrewJson {
    pub omega: MatrixJson,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlePointJson {
    pub plane: PlaneJson,
    pub fiber: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanMotionJson {
    #[serde(rename = "R")]
    pub r: MatrixJson,
    #[serde(rename = "X")]
    pub x: Vec<f64>,
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanRotationJson {
    #[serde(rename = "R")]
    pub r: MatrixJson,
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpGeneratorJson {
    pub p: usize,
    pub q: usize,
    #[serde(rename = "B")]
    pub b: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpElementJson {
    pub p: usize,
    pub q: usize,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    pub v: Vec<f64>,
}

/// A domain type with a JSON representation. Decoding re-validates every
/// invariant of the type.
pub trait Wire: Sized {
    type Repr: Serialize + DeserializeOwned;

    fn to_wire(&self) -> Self::Repr;
    fn from_wire(repr: Self::Repr, tol: &Tolerances) -> Result<Self>;

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire()).expect("wire types serialize")
    }

    fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("wire types serialize")
    }

    fn from_json(value: serde_json::Value, tol: &Tolerances) -> Result<Self> {
        let repr = serde_json::from_value(value)
            .map_err(|e| Error::InvalidValue(format!("malformed JSON: {e}")))?;
        Self::from_wire(repr, tol)
    }

    fn from_json_str(s: &str, tol: &Tolerances) -> Result<Self> {
        let repr = serde_json::from_str(s)
            .map_err(|e| Error::InvalidValue(format!("malformed JSON: {e}")))?;
        Self::from_wire(repr, tol)
    }
}

impl Wire for Mat {
    type Repr = MatrixJson;

    fn to_wire(&self) -> MatrixJson {
        MatrixJson::from(self)
    }

    fn from_wire(repr: MatrixJson, _tol: &Tolerances) -> Result<Self> {
        Mat::try_from(repr)
    }
}

impl Wire for Vector {
    type Repr = Vec<f64>;

    fn to_wire(&self) -> Vec<f64> {
        self.iter().copied().collect()
    }

    fn from_wire(repr: Vec<f64>, _tol: &Tolerances) -> Result<Self> {
        vector_from(repr)
    }
}

impl Wire for Rotation {
    type Repr = MatrixJson;

    fn to_wire(&self) -> MatrixJson {
        MatrixJson::from(self.mat())
    }

    fn from_wire(repr: MatrixJson, tol: &Tolerances) -> Result<Self> {
        Rotation::new(Mat::try_from(repr)?, tol)
    }
}

impl Wire for SkewMatrix {
    type Repr = MatrixJson;

    fn to_wire(&self) -> MatrixJson {
        MatrixJson::from(self.mat())
    }

    fn from_wire(repr: MatrixJson, _tol: &Tolerances) -> Result<Self> {
        SkewMatrix::new(Mat::try_from(repr)?)
    }
}

impl Wire for Motion {
    type Repr = MotionJson;

    fn to_wire(&self) -> MotionJson {
        MotionJson {
            r: MatrixJson::from(self.rot().mat()),
            x: self.trans().iter().copied().collect(),
        }
    }

    fn from_wire(repr: MotionJson, tol: &Tolerances) -> Result<Self> {
        Motion::new(Rotation::new(Mat::try_from(repr.r)?, tol)?, vector_from(repr.x)?)
    }
}

impl Wire for Screw {
    type Repr = ScrewJson;

    fn to_wire(&self) -> ScrewJson {
        ScrewJson {
            omega: MatrixJson::from(self.omega().mat()),
            v: self.v().iter().copied().collect(),
        }
    }

    fn from_wire(repr: ScrewJson, _tol: &Tolerances) -> Result<Self> {
        Screw::new(SkewMatrix::new(Mat::try_from(repr.omega)?)?, vector_from(repr.v)?)
    }
}

impl Wire for Plane {
    type Repr = PlaneJson;

    fn to_wire(&self) -> PlaneJson {
        PlaneJson {
            n: self.n(),
            p: self.p(),
            frame: MatrixJson::from(self.frame().cols()),
        }
    }

    /// The frame only has to span the plane; it is re-orthonormalized and
    /// the projector recomputed.
    fn from_wire(repr: PlaneJson, tol: &Tolerances) -> Result<Self> {
        let m = Mat::try_from(repr.frame)?;
        if m.shape() != (repr.n, repr.p) {
            return Err(Error::DimensionMismatch(format!(
                "plane declares n = {}, p = {} but frame is {}x{}",
                repr.n,
                repr.p,
                m.nrows(),
                m.ncols()
            )));
        }
        let plane = Plane::from_frame(orthonormalize(&m, tol)?);
        plane.validate(tol)?;
        Ok(plane)
    }
}

impl Wire for BundlePoint {
    type Repr = BundlePointJson;

    fn to_wire(&self) -> BundlePointJson {
        BundlePointJson {
            plane: self.plane().to_wire(),
            fiber: self.fiber().iter().copied().collect(),
        }
    }

    fn from_wire(repr: BundlePointJson, tol: &Tolerances) -> Result<Self> {
        BundlePoint::new(Plane::from_wire(repr.plane, tol)?, vector_from(repr.fiber)?, tol)
    }
}

impl Wire for CartanMotion {
    type Repr = CartanMotionJson;

    fn to_wire(&self) -> CartanMotionJson {
        let sig = self.signature();
        CartanMotionJson {
            r: MatrixJson::from(self.motion().rot().mat()),
            x: self.motion().trans().iter().copied().collect(),
            p: sig.p(),
            q: sig.q(),
        }
    }

    fn from_wire(repr: CartanMotionJson, tol: &Tolerances) -> Result<Self> {
        let motion = Motion::new(Rotation::new(Mat::try_from(repr.r)?, tol)?, vector_from(repr.x)?)?;
        CartanMotion::new(motion, Signature::new(repr.p, repr.q)?, tol)
    }
}

impl Wire for CartanRotation {
    type Repr = CartanRotationJson;

    fn to_wire(&self) -> CartanRotationJson {
        let sig = self.signature();
        CartanRotationJson {
            r: MatrixJson::from(self.rot().mat()),
            p: sig.p(),
            q: sig.q(),
        }
    }

    fn from_wire(repr: CartanRotationJson, tol: &Tolerances) -> Result<Self> {
        let rot = Rotation::new(Mat::try_from(repr.r)?, tol)?;
        CartanRotation::new(rot, Signature::new(repr.p, repr.q)?, tol)
    }
}

impl Wire for DpGenerator {
    type Repr = DpGeneratorJson;

    fn to_wire(&self) -> DpGeneratorJson {
        let sig = self.signature();
        DpGeneratorJson {
            p: sig.p(),
            q: sig.q(),
            b: MatrixJson::from(self.block()),
        }
    }

    fn from_wire(repr: DpGeneratorJson, _tol: &Tolerances) -> Result<Self> {
        DpGenerator::new(Signature::new(repr.p, repr.q)?, Mat::try_from(repr.b)?)
    }
}

impl Wire for DpElement {
    type Repr = DpElementJson;

    fn to_wire(&self) -> DpElementJson {
        let sig = self.signature();
        DpElementJson {
            p: sig.p(),
            q: sig.q(),
            b: MatrixJson::from(self.generator().block()),
            v: self.coefficients().iter().copied().collect(),
        }
    }

    fn from_wire(repr: DpElementJson, _tol: &Tolerances) -> Result<Self> {
        let gen = DpGenerator::new(Signature::new(repr.p, repr.q)?, Mat::try_from(repr.b)?)?;
        DpElement::new(gen, vector_from(repr.v)?)
    }
}

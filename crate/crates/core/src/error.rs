use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the geometric constructions.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end emits in its error JSON.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("degenerate spanning set (smallest singular value {sigma_min:e})")]
    DegenerateSpan { sigma_min: f64 },

    #[error("not orthogonal: residual {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("not a rotation: det = {det}")]
    NotSpecialOrthogonal { det: f64 },

    #[error("not skew-symmetric: residual {residual:e}")]
    NotSkew { residual: f64 },

    #[error("not an orthogonal symmetry: residual {residual:e}")]
    NotOrthogonalSymmetry { residual: f64 },

    #[error("ill-conditioned spectrum: {0}")]
    IllConditionedSpectrum(String),

    #[error("log branch ambiguity: rotation angle {angle} is within {tol:e} of pi")]
    LogBranchAmbiguity { angle: f64, tol: f64 },

    #[error("Y_omega singular: half-angle factor {factor:e}")]
    YOmegaSingular { factor: f64 },

    #[error("not in the Cartan model: {0}")]
    NotInCartanModel(String),

    #[error("cut locus: generator not unique (principal angle {angle} at pi/2)")]
    CutLocus { angle: f64 },

    #[error("near-singular isomorphism: condition number {cond:e}")]
    NearSingularIsomorphism { cond: f64 },

    #[error("fiber vector not in plane: residual {residual:e}")]
    FiberNotInPlane { residual: f64 },

    #[error("not a unit vector: {0}")]
    NotUnit(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("numerical fault: {0}")]
    NumericalFault(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::DegenerateSpan { .. } => "degenerate_spanning_set",
            Error::NotOrthogonal { .. } => "not_orthogonal",
            Error::NotSpecialOrthogonal { .. } => "not_special_orthogonal",
            Error::NotSkew { .. } => "not_skew",
            Error::NotOrthogonalSymmetry { .. } => "not_an_orthogonal_symmetry",
            Error::IllConditionedSpectrum(_) => "ill_conditioned_spectrum",
            Error::LogBranchAmbiguity { .. } => "log_branch_ambiguity",
            Error::YOmegaSingular { .. } => "y_omega_singular",
            Error::NotInCartanModel(_) => "not_in_cartan_model",
            Error::CutLocus { .. } => "cut_locus",
            Error::NearSingularIsomorphism { .. } => "near_singular_isomorphism",
            Error::FiberNotInPlane { .. } => "fiber_not_in_plane",
            Error::NotUnit(_) => "not_unit",
            Error::InvalidValue(_) => "invalid_value",
            Error::NumericalFault(_) => "numerical_fault",
        }
    }
}

pub(crate) fn ensure_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what}: expected {expected}, got {got}"
        )))
    }
}

use thiserror::Error;

/// Errors raised by the geometry kernel, the field evaluators and the
/// experiment runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate chart at s = ({s0}, {s1}): det(metric) = {det:e}")]
    DegenerateChart { s0: f64, s1: f64, det: f64 },
    #[error("non-finite input: {0}")]
    NonFiniteInput(String),
    #[error("vector field is not tangential: |X.n| = {0:e}")]
    NotTangential(f64),
    #[error("resolvent I - r W is numerically singular (r = {0})")]
    SingularResolvent(f64),
    #[error("point lies outside the tubular neighborhood: |d| = {dist} >= reach {reach}")]
    OutOfTube { dist: f64, reach: f64 },
    #[error("field is not Killing: relative strain residual {0:e}")]
    NotKilling(f64),
    #[error("field is not in K_g: max |v . grad g| = {0:e}")]
    NotInKg(f64),
    #[error("insufficient samples: got {got}, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("rigid field is not tangential on the surface: residual {0:e}")]
    NotInR(f64),
    #[error("strain vanishes numerically; Rayleigh quotient is unbounded")]
    RigidDegenerate,
    #[error("no admissible field: {0}")]
    NoAdmissibleField(String),
    #[error("strain Gram matrix is singular: min eigenvalue {min:e}, mean {mean:e}")]
    SingularA { min: f64, mean: f64 },
    #[error("non-positive value {0} in scaling fit")]
    NonPositiveValue(f64),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("invalid value for `{key}`: {reason}")]
    ValidationError { key: String, reason: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite_vec(label: &str, v: &crate::Vec3) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput(format!("{label} = {v:?}")))
    }
}

pub(crate) fn check_finite(label: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput(format!("{label} = {v}")))
    }
}

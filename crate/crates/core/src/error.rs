use thiserror::Error;

/// Failure modes shared by every module.
///
/// [`OrbitaError::class`] groups them into the three exit classes used by the
/// command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitaError {
    #[error("zero vector has no Cartan matrix")]
    ZeroVector,
    #[error("direction is antiparallel to e3 (|x|+z = {0:e}|x|)")]
    DegenerateDirection(f64),
    #[error("divergent kernel: {0}")]
    DivergentKernel(&'static str),
    #[error("angular momentum is antipodal to the chart of sign {0}")]
    AntipodalAngularMomentum(i8),
    #[error("bracket undefined at L3 = 0")]
    ZeroAngularMomentum,
    #[error("weights must satisfy p1 > p2 > p3 (got {0:?})")]
    DegenerateOrbit([f64; 3]),
    #[error("weight gaps must be integers (lambda = {0}, mu = {1})")]
    NonIntegerWeights(f64, f64),
    #[error("chart point outside M+: {0}")]
    OutOfDomain(String),
    #[error("state is off the orbit (Casimir residual {residual:e})")]
    OffOrbit { residual: f64 },
    #[error("R = 0: S-ellipsoid state has no unique (phi, gamma)")]
    ZeroR,
    #[error("(L, Q) = ({l}, {q}) lies outside the orbit projection")]
    OutsideProjection { l: f64, q: f64 },
    #[error("L = {l} outside [0, {lmax}]")]
    LOutOfRange { l: f64, lmax: f64 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("characteristic pole crossed: n sin^2 = {0}")]
    CharacteristicPole(f64),
    #[error("point outside the classical oscillation interval")]
    OutsideClassicalRegion,
    #[error("turning point (V = 0) has no interior action-angle image")]
    BoundaryState,
    #[error("squared body-frame component {index} is negative ({value:e})")]
    NegativeSquare { index: usize, value: f64 },
    #[error("quadrature failed, error estimate {error_estimate:e}")]
    QuadratureFailure { error_estimate: f64 },
    #[error("no states at L = {0}")]
    NoStates(u32),
    #[error("root bracketing failed: {0}")]
    RootBracketFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Coarse classification mirrored by process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Argument,
    Domain,
    Numerical,
}

impl OrbitaError {
    pub fn class(&self) -> ErrorClass {
        use OrbitaError::*;
        match self {
            InvalidArgument(_) | ParameterOutOfRange(_) => ErrorClass::Argument,
            QuadratureFailure { .. } | RootBracketFailure(_) | NegativeSquare { .. } => {
                ErrorClass::Numerical
            }
            _ => ErrorClass::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, OrbitaError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_classes() {
        assert_eq!(OrbitaError::InvalidArgument("x".into()).class(), ErrorClass::Argument);
        assert_eq!(OrbitaError::DegenerateOrbit([1.0, 2.0, 3.0]).class(), ErrorClass::Domain);
        assert_eq!(OrbitaError::NonIntegerWeights(0.5, 1.0).class(), ErrorClass::Domain);
        assert_eq!(OrbitaError::QuadratureFailure { error_estimate: 1.0 }.class(), ErrorClass::Numerical);
    }

    #[test]
    fn messages_name_the_values() {
        assert!(OrbitaError::LOutOfRange { l: 3.0, lmax: 2.0 }.to_string().contains("[0, 2]"));
    }
}

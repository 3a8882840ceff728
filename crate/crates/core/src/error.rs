use serde::Serialize;
use thiserror::Error;

use crate::curves::CurveError;
use crate::epw::EpwError;
use crate::exterior::ExteriorError;
use crate::lagrangian::LagrangianError;
use crate::planes::PlanesError;
use crate::poly::PolyError;
use crate::scalars::ScalarError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Planes(#[from] PlanesError),
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Epw(#[from] EpwError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("usage: {0}")]
    Usage(String),
}

/// Stable machine-readable error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    DivisionByZero,
    MixedFields,
    BadReduction,
    NoReconstruction,
    NotPrime,
    Parse,
    DegreeOverflow,
    WrongAmbient,
    WrongDimension,
    ZeroInput,
    MixedAmbient,
    NotAPlane,
    DuplicateMember,
    TooSmall,
    GenerationFailed,
    NotIncident,
    NotIsotropic,
    NotLagrangian,
    ZeroVector,
    NotAMember,
    NotDivisible,
    InconsistentEvaluations,
    BadChart,
    NotOnHypersurface,
    ZeroPolynomial,
    CharacteristicTooSmall,
    GcdFailed,
    BadHyperplane,
    ConstructionDegenerate,
    SpanDeficient,
    IdenticallyZero,
    SearchExhausted,
    BadFrame,
    NotACurve,
    InternalInconsistency,
    InfeasibleInput,
    Format,
    Io,
    Usage,
}

fn scalar_code(e: &ScalarError) -> ErrorCode {
    match e {
        ScalarError::DivisionByZero => ErrorCode::DivisionByZero,
        ScalarError::MixedFields => ErrorCode::MixedFields,
        ScalarError::BadReduction { .. } => ErrorCode::BadReduction,
        ScalarError::NoReconstruction | ScalarError::InsufficientModulus => ErrorCode::NoReconstruction,
        ScalarError::NotPrime(_) => ErrorCode::NotPrime,
        ScalarError::Parse(_) => ErrorCode::Parse,
    }
}

fn planes_code(e: &PlanesError) -> ErrorCode {
    match e {
        PlanesError::MixedAmbient(..) => ErrorCode::MixedAmbient,
        PlanesError::NotAPlane { .. } => ErrorCode::NotAPlane,
        PlanesError::DuplicateMember(..) => ErrorCode::DuplicateMember,
        PlanesError::BadReduction { .. } => ErrorCode::BadReduction,
        PlanesError::TooSmall => ErrorCode::TooSmall,
        PlanesError::WrongAmbient { .. } => ErrorCode::WrongAmbient,
        PlanesError::GenerationFailed { .. } => ErrorCode::GenerationFailed,
        PlanesError::NotPrime(_) => ErrorCode::NotPrime,
    }
}

fn lagrangian_code(e: &LagrangianError) -> ErrorCode {
    match e {
        LagrangianError::NotIncident(..) => ErrorCode::NotIncident,
        LagrangianError::NotIsotropic => ErrorCode::NotIsotropic,
        LagrangianError::NotLagrangian(_) => ErrorCode::NotLagrangian,
        LagrangianError::ZeroVector => ErrorCode::ZeroVector,
        LagrangianError::NotAMember => ErrorCode::NotAMember,
        LagrangianError::WrongAmbient { .. } => ErrorCode::WrongAmbient,
        LagrangianError::NotPrime(_) => ErrorCode::NotPrime,
        LagrangianError::Planes(p) => planes_code(p),
    }
}

fn poly_code(e: &PolyError) -> ErrorCode {
    match e {
        PolyError::NotDivisible => ErrorCode::NotDivisible,
        PolyError::InconsistentEvaluations(_) => ErrorCode::InconsistentEvaluations,
        PolyError::BadChart => ErrorCode::BadChart,
        PolyError::NotOnHypersurface => ErrorCode::NotOnHypersurface,
        PolyError::ZeroPolynomial => ErrorCode::ZeroPolynomial,
        PolyError::CharacteristicTooSmall(..) => ErrorCode::CharacteristicTooSmall,
        PolyError::VarMismatch(..) => ErrorCode::WrongDimension,
        PolyError::NoReconstruction => ErrorCode::NoReconstruction,
        PolyError::GcdFailed => ErrorCode::GcdFailed,
        PolyError::Scalar(s) => scalar_code(s),
    }
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::Scalar(e) => scalar_code(e),
            Error::Exterior(e) => match e {
                ExteriorError::DegreeOverflow(..) => ErrorCode::DegreeOverflow,
                ExteriorError::WrongAmbient(_) | ExteriorError::AmbientTooLarge(_) => ErrorCode::WrongAmbient,
                ExteriorError::WrongDimension { .. } => ErrorCode::WrongDimension,
                ExteriorError::ZeroInput => ErrorCode::ZeroInput,
                ExteriorError::MixedAmbient(..) => ErrorCode::MixedAmbient,
            },
            Error::Planes(e) => planes_code(e),
            Error::Lagrangian(e) => lagrangian_code(e),
            Error::Poly(e) => poly_code(e),
            Error::Epw(e) => match e {
                EpwError::BadHyperplane(_) => ErrorCode::BadHyperplane,
                EpwError::ConstructionDegenerate(_) => ErrorCode::ConstructionDegenerate,
                EpwError::SpanDeficient(_) => ErrorCode::SpanDeficient,
                EpwError::IdenticallyZero => ErrorCode::IdenticallyZero,
                EpwError::SearchExhausted(_) => ErrorCode::SearchExhausted,
                EpwError::Lagrangian(l) => lagrangian_code(l),
                EpwError::Poly(p) => poly_code(p),
            },
            Error::Curve(e) => match e {
                CurveError::NotAMember => ErrorCode::NotAMember,
                CurveError::BadFrame(_) => ErrorCode::BadFrame,
                CurveError::ConstructionDegenerate(_) => ErrorCode::ConstructionDegenerate,
                CurveError::NotACurve => ErrorCode::NotACurve,
                CurveError::InternalInconsistency(_) => ErrorCode::InternalInconsistency,
                CurveError::InfeasibleInput(_) => ErrorCode::InfeasibleInput,
                CurveError::BadReduction(_) => ErrorCode::BadReduction,
                CurveError::NotPrime(_) => ErrorCode::NotPrime,
                CurveError::Lagrangian(l) => lagrangian_code(l),
                CurveError::Poly(p) => poly_code(p),
            },
            Error::Format(_) => ErrorCode::Format,
            Error::Io(_) => ErrorCode::Io,
            Error::Usage(_) => ErrorCode::Usage,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_the_innermost_error() {
        let e = Error::from(EpwError::Lagrangian(LagrangianError::NotAMember));
        assert_eq!(e.code(), ErrorCode::NotAMember);
        assert_eq!(serde_json::to_string(&e.code()).unwrap(), r#""NOT_A_MEMBER""#);
        let e = Error::from(CurveError::InfeasibleInput("x".into()));
        assert_eq!(e.code(), ErrorCode::InfeasibleInput);
    }
}

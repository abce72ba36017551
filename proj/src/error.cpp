#include "nkcert/error.hpp"

namespace nkcert {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::NonMonic: return "NonMonic";
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::BasisNotRing: return "BasisNotRing";
    case ErrorCode::BasisMissingOne: return "BasisMissingOne";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::AmbiguousRealComplexSplit: return "AmbiguousRealComplexSplit";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NotIndependent: return "NotIndependent";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::WrongRank: return "WrongRank";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::TrivialH: return "TrivialH";
    case ErrorCode::InjectivityViolation: return "InjectivityViolation";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::ConjugationCheckFailed: return "ConjugationCheckFailed";
    case ErrorCode::WrongSignature: return "WrongSignature";
    case ErrorCode::CollapseFailed: return "CollapseFailed";
    case ErrorCode::RayNotInFan: return "RayNotInFan";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::IncompletePipeline: return "IncompletePipeline";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace nkcert

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nkcert {

enum class ErrorCode {
    DegreeTooSmall,
    NonMonic,
    NotSquarefree,
    SingularBasis,
    BasisNotRing,
    BasisMissingOne,
    OracleMismatch,
    RootFindingFailed,
    AmbiguousRealComplexSplit,
    NotAUnit,
    NotIndependent,
    NonPositiveProfile,
    RankTooLarge,
    WrongRank,
    NotFound,
    IllConditioned,
    TrivialH,
    InjectivityViolation,
    ZeroCoordinate,
    ConjugationCheckFailed,
    WrongSignature,
    CollapseFailed,
    RayNotInFan,
    DegenerateSimplex,
    IncompletePipeline,
    NotAdmissible,
    UnsupportedDimension,
    ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string const & what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace nkcert

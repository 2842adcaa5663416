#pragma once

#include <stdexcept>
#include <string>

namespace renormlab {

enum class ErrorCode {
    Domain,
    DegenerateInterval,
    CriticalPoint,
    NoPreimage,
    HitCriticalPoint,
    IndexOutOfRange,
    Trivial,
    EmptyBranchDomain,
    NoFixedPoint,
    ReturnNotContained,
    TrivialRenormalization,
    WordViolation,
    OffArchipelago,
    NoIslandFound,
    CurveUndefined,
    DepthAbort,
    TypeChangeUnderProbe,
    CapExceeded,
    NotNice,
    InsufficientLevels,
    AmbiguousContainment,
    BoundaryPoint,
    InvalidArgument,
};

/// Stable machine-readable name, used in CLI error JSON.
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace renormlab

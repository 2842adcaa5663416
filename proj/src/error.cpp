#include "renormlab/error.hpp"

namespace renormlab {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Domain: return "domain_error";
        case ErrorCode::DegenerateInterval: return "degenerate_interval";
        case ErrorCode::CriticalPoint: return "critical_point_undefined";
        case ErrorCode::NoPreimage: return "no_preimage_on_branch";
        case ErrorCode::HitCriticalPoint: return "hit_critical_point";
        case ErrorCode::IndexOutOfRange: return "index_out_of_range";
        case ErrorCode::Trivial: return "trivial_map";
        case ErrorCode::EmptyBranchDomain: return "empty_branch_domain";
        case ErrorCode::NoFixedPoint: return "no_fixed_point";
        case ErrorCode::ReturnNotContained: return "return_not_contained";
        case ErrorCode::TrivialRenormalization: return "trivial_renormalization";
        case ErrorCode::WordViolation: return "word_violation";
        case ErrorCode::OffArchipelago: return "off_archipelago";
        case ErrorCode::NoIslandFound: return "no_island_found";
        case ErrorCode::CurveUndefined: return "curve_undefined";
        case ErrorCode::DepthAbort: return "depth_abort";
        case ErrorCode::TypeChangeUnderProbe: return "type_change_under_probe";
        case ErrorCode::CapExceeded: return "cap_exceeded";
        case ErrorCode::NotNice: return "not_nice";
        case ErrorCode::InsufficientLevels: return "insufficient_levels";
        case ErrorCode::AmbiguousContainment: return "ambiguous_containment";
        case ErrorCode::BoundaryPoint: return "boundary_point";
        case ErrorCode::InvalidArgument: return "invalid_argument";
    }
    return "unknown";
}

}  // namespace renormlab

#include "mblab/error.hpp"

namespace mblab {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::domain: return "domain";
        case ErrorCode::precondition: return "precondition";
        case ErrorCode::non_divergence: return "non_divergence";
        case ErrorCode::resource: return "resource";
        case ErrorCode::singular: return "singular";
        case ErrorCode::index_range: return "index_range";
        case ErrorCode::length_mismatch: return "length_mismatch";
        case ErrorCode::verification_failure: return "verification_failure";
        case ErrorCode::degenerate: return "degenerate";
        case ErrorCode::config: return "config";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace mblab

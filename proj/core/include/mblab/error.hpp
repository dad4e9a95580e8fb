#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mblab {

enum class ErrorCode {
    domain,                 // value outside its admissible range
    precondition,           // construction/verification precondition not met
    non_divergence,         // scan horizon exceeded while planning blocks
    resource,               // size above a materialization or enumeration cap
    singular,               // matrix below the singularity floor
    index_range,
    length_mismatch,
    verification_failure,
    degenerate,
    config,
    io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace mblab

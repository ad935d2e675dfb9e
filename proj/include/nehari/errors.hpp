#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

/// Error taxonomy shared between the C++ core and the C API status codes.
enum class ErrorCode {
    ok = 0,
    invalid_argument,
    invalid_geometry,
    degenerate_domain,
    resource_limit,
    no_convergence,
    nodal_collapse,
    dimension_mismatch,
    io_error,
    parse_error,
    underflow,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ok: return "ok";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::invalid_geometry: return "invalid_geometry";
        case ErrorCode::degenerate_domain: return "degenerate_domain";
        case ErrorCode::resource_limit: return "resource_limit";
        case ErrorCode::no_convergence: return "no_convergence";
        case ErrorCode::nodal_collapse: return "nodal_collapse";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::underflow: return "underflow";
    }
    return "unknown";
}

} // namespace nehari

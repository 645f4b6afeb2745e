#pragma once

#include <stdexcept>
#include <string>

namespace chebproxy {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    invalid_argument,
    domain,        ///< evaluation point outside the proxy's box
    non_finite,    ///< oracle or file produced NaN/Inf
    incompatible,  ///< mesh/domain mismatch when combining proxies
    id_mismatch,   ///< clone response answers a different request
    count_mismatch,
    format,        ///< malformed or unsupported file content
    io,
    convergence,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace chebproxy

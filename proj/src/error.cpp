#include "chebproxy/error.hpp"

namespace chebproxy {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid argument";
        case ErrorKind::domain: return "domain error";
        case ErrorKind::non_finite: return "non-finite value";
        case ErrorKind::incompatible: return "incompatible proxies";
        case ErrorKind::id_mismatch: return "proxy id mismatch";
        case ErrorKind::count_mismatch: return "count mismatch";
        case ErrorKind::format: return "format error";
        case ErrorKind::io: return "I/O error";
        case ErrorKind::convergence: return "not converged";
    }
    return "unknown error";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace chebproxy

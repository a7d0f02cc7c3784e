#include "gasnet/error.hpp"

namespace gasnet {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::validation: return "validation_error";
    case ErrorKind::io: return "io_error";
    case ErrorKind::cfl_violation: return "cfl_violation";
    case ErrorKind::positivity_loss: return "positivity_loss";
    case ErrorKind::instability: return "instability";
    case ErrorKind::infeasible_node: return "infeasible_node";
    case ErrorKind::infeasible_steady: return "infeasible_steady_state";
    case ErrorKind::steady_nonconvergence: return "steady_nonconvergence";
    }
    return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::cfl_violation:
    case ErrorKind::positivity_loss:
    case ErrorKind::instability:
    case ErrorKind::infeasible_node:
    case ErrorKind::infeasible_steady:
    case ErrorKind::steady_nonconvergence:
        return true;
    default:
        return false;
    }
}

} // namespace gasnet

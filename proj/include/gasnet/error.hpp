#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gasnet {

// Failure categories. The CLI and the C API map these onto exit and status
// codes, so the set is part of the public contract.
enum class ErrorKind {
    domain,            // argument outside the mathematical domain
    validation,        // malformed or inconsistent configuration
    io,                // file system failure
    cfl_violation,     // time step above the stability bound
    positivity_loss,   // a density became non-positive
    instability,       // NaN or overflow in a flux update
    infeasible_node,   // nodal pressure equation has no positive root
    infeasible_steady, // steady state requires non-positive pressure
    steady_nonconvergence,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for the kinds reported as "numerical failure" (exit code 2).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace gasnet

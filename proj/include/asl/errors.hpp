#pragma once

#include <stdexcept>
#include <string>

namespace asl {

// Error taxonomy used across the library. Everything derives from
// asl::error so callers can catch library failures in one clause.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct index_error : error {
    using error::error;
};
struct geometry_error : error {
    using error::error;
};
struct collar_error : error {
    using error::error;
};
struct degenerate_boundary_error : error {
    using error::error;
};
struct domain_error : error {
    using error::error;
};
struct precondition_error : error {
    using error::error;
};
struct sign_error : error {
    using error::error;
};
struct singularity_error : error {
    using error::error;
};
struct convexity_error : error {
    using error::error;
};
struct path_error : error {
    using error::error;
};
struct near_boundary_error : error {
    using error::error;
};
struct probe_error : error {
    using error::error;
};
struct fit_error : error {
    using error::error;
};
struct unsupported_edge_error : error {
    using error::error;
};
struct parameter_error : error {
    using error::error;
};
struct bracket_error : error {
    using error::error;
};
struct parse_error : error {
    using error::error;
};
struct usage_error : error {
    using error::error;
};

// Thrown by the Newton solvers; carries the residual history so a failed
// solve can still be inspected.
struct solver_error : error {
    std::vector<double> trace;
    solver_error(const std::string& msg, std::vector<double> t)
        : error(msg), trace(std::move(t)) {}
};

} // namespace asl

#pragma once

#include <memory>
#include <span>

#include "asl/fields.hpp"
#include "asl/grid.hpp"
#include "asl/parallel.hpp"

namespace asl {

struct SolverConfig {
    int grid_n = 64;
    double tol = 1e-10;       // Newton stop, residual inf-norm
    int max_iter = 50;
    double damping_floor = 9.5367431640625e-07; // 2^-20
    enum class Init { poisson, paraboloid } init = Init::poisson;
    double init_depth = 0.3;  // |min| of the initial guess
    int collar_cells = 5;     // reporting cutoff for the phi residual

    void validate() const;
};

struct SolveReport {
    int domain_id = 0;
    int grid_n = 0;
    double k = 0.5;
    int iterations = 0;
    double residual_inf = 0.0;          // final residual of the solved equation
    double min_value = 0.0;
    double residual_eq11_deep = -1.0;   // phi solves only; inf-norm away from the collar
    std::vector<double> trace;          // residual after each assembly
    std::shared_ptr<const Grid> grid;
    std::vector<double> value;          // one per interior node
};

/// Dirichlet problem for the dual potential: bordered determinant equal to
/// -3 with zero boundary values, damped Newton with analytic Jacobian.
SolveReport solve_psi(const Domain& dom, const SolverConfig& cfg = {},
                      par::Exec mode = par::Exec::parallel);

/// k = 1/2: nodewise power transform of the psi solve. Other k: direct
/// damped Newton on log det Hess(phi) - (2+k) log(-phi).
SolveReport solve_phi(const Domain& dom, double k, const SolverConfig& cfg = {},
                      par::Exec mode = par::Exec::parallel);

struct ResidualStats {
    double inf = 0.0;
    double l2 = 0.0;
    Vec2 argmax;
    int node = -1;
};

/// Nodewise residual of the bordered-determinant equation for a nodal field.
ResidualStats residual_report(const Grid& g, std::span<const double> psi,
                              par::Exec mode = par::Exec::parallel);

/// Residual vector of the bordered-determinant equation (one per node).
void assemble_residual(const Grid& g, std::span<const double> psi,
                       std::span<double> out, par::Exec mode);
/// Serial reference of the same kernel, kept for the comparison tests.
void assemble_residual_serial(const Grid& g, std::span<const double> psi,
                              std::span<double> out);

/// max |psi_i - exact(p_i)| over interior nodes.
double oracle_error_inf(const SolveReport& rep, const Field2& exact,
                        par::Exec mode = par::Exec::parallel);

/// Discrete Hessians positive definite at every interior node?
bool discrete_convexity(const Grid& g, std::span<const double> psi);

} // namespace asl

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "asl/geometry.hpp"
#include "asl/grid.hpp"

namespace asl {

/// Boundary-normal expansion data at one boundary point: least-squares fit
/// of psi against powers of the stitched defining function,
/// psi ~ a1 rho + a2 rho^2 + ..., with f = -a2 (the expansion reads
/// -rho - f rho^2 + higher order).
struct ExpansionCoefficients {
    Vec2 point;
    int piece = 0;
    double a1 = 0.0;
    double a2 = 0.0;
    double f = 0.0;
    double fit_residual = 0.0;
    double cond = 0.0;
    std::vector<double> depths;
    int degree = 0;
};

using ScalarField = std::function<double(Vec2)>;

ExpansionCoefficients expand_along_normal(const ScalarField& psi, const Domain& dom,
                                          Vec2 boundary_point,
                                          std::span<const double> depths,
                                          int degree = 3);

/// Closed-form edge values: f = -1/(-4s + 2t - 1) on the second piece of
/// Omega_1, f = -1/(6s - 2) on the second piece of Omega_2.
double fubini_pick_closed_form(int j, Vec2 boundary_point, double tol = 1e-10);

struct ProfileEntry {
    bool ok = false;
    ExpansionCoefficients coef;
    std::string error;
};

std::vector<ProfileEntry> profile_boundary(const ScalarField& psi, const Domain& dom,
                                           int count, std::span<const double> depths,
                                           int degree = 3);

/// Default probe depths: a geometric-scale window for analytic fields and a
/// cell-scale window for solved grid fields.
std::vector<double> default_analytic_depths(const Domain& dom);
std::vector<double> default_grid_depths(double step);

/// Biquadratic interpolation of a nodal field on the solver grid; requires a
/// full 3x3 interior patch around the query point.
double grid_interpolate(const Grid& g, std::span<const double> values, Vec2 p);

} // namespace asl

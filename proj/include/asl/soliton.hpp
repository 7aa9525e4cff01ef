#pragma once

#include "asl/fields.hpp"

namespace asl {

struct SolitonAlpha {
    double alpha = 0.0;
    double residual = 0.0;       // F(alpha)
    double bracket_lo = 0.0, bracket_hi = 0.0;
};

/// det Hess h - e^{-h - alpha (h_x + h_y)}
double soliton_residual_h(const Field2& h, Vec2 xy, double alpha);

/// Determinant form of the soliton equation for the dual potential on the
/// pentagon: det of the 2x2 matrix with entries
///   H_vv + 2a H_v + a^2 H - u/a,   H_uv + a H_v + a H_u + a^2 H - 1/a^2
/// (and the u<->v partner on the diagonal) minus
///   H - u (H_u + a H) - v (H_v + a H) + uv / a^2.
double soliton_residual_H(const Field2& H, Vec2 uv, double alpha);

/// Compatibility function F(alpha) = (2 - alpha^2) e^{3 alpha} - 4 e^{2 alpha}
/// + 2 (1 + alpha); F(0) = 0 and the soliton constant is the nonzero root.
double soliton_compatibility(double alpha);

/// Nonzero root of the compatibility equation inside a sign-change bracket
/// (bisection plus Newton polish, |F| < 1e-12). The bracket must not
/// contain 0.
SolitonAlpha solve_alpha(double lo, double hi);

/// Sign-change bracket found by scanning (lo, hi) in the given step.
std::pair<double, double> scan_alpha_bracket(double lo = 0.1, double hi = 1.0,
                                             double step = 0.01);

} // namespace asl

#include "asl/soliton.hpp"

#include <cmath>

namespace asl {

double soliton_residual_h(const Field2& h, Vec2 xy, double alpha) {
    const Vec2 g = h.gradient(xy);
    return h.hessian(xy).det() - std::exp(-h.value(xy) - alpha * (g.x + g.y));
}

double soliton_residual_H(const Field2& H, Vec2 p, double alpha) {
    if (alpha == 0.0)
        throw parameter_error("soliton_residual_H: alpha must be nonzero");
    const double u = p.x, v = p.y, a = alpha;
    const double val = H.value(p);
    const Vec2 g = H.gradient(p);
    const Sym2 h = H.hessian(p);
    const double m11 = h.yy + 2.0 * a * g.y + a * a * val - u / a;
    const double m22 = h.xx + 2.0 * a * g.x + a * a * val - v / a;
    const double m12 = h.xy + a * g.y + a * g.x + a * a * val - 1.0 / (a * a);
    const double rhs = val - u * (g.x + a * val) - v * (g.y + a * val) + u * v / (a * a);
    return m11 * m22 - m12 * m12 - rhs;
}

double soliton_compatibility(double alpha) {
    if (alpha > 20.0) {
        // regrouped form, same sign, avoids overflowing the leading exponential
        return (2.0 - alpha * alpha) - 4.0 * std::exp(-alpha) +
               2.0 * (1.0 + alpha) * std::exp(-3.0 * alpha);
    }
    return (2.0 - alpha * alpha) * std::exp(3.0 * alpha) - 4.0 * std::exp(2.0 * alpha) +
           2.0 * (1.0 + alpha);
}

namespace {

double compatibility_derivative(double a) {
    return (6.0 - 2.0 * a - 3.0 * a * a) * std::exp(3.0 * a) - 8.0 * std::exp(2.0 * a) +
           2.0;
}

} // namespace

SolitonAlpha solve_alpha(double lo, double hi) {
    if (!(lo < hi)) throw bracket_error("solve_alpha: empty bracket");
    if (lo <= 0.0 && hi >= 0.0)
        throw precondition_error("solve_alpha: bracket must not contain 0 (trivial root)");
    double flo = soliton_compatibility(lo), fhi = soliton_compatibility(hi);
    if (!(flo * fhi < 0.0))
        throw bracket_error("solve_alpha: no sign change over the bracket");

    double a = lo, b = hi;
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = soliton_compatibility(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if (flo * fm < 0.0) {
            b = mid;
            fhi = fm;
        } else {
            a = mid;
            flo = fm;
        }
    }
    double root = 0.5 * (a + b);
    for (int it = 0; it < 8; ++it) {
        const double f = soliton_compatibility(root);
        if (std::abs(f) < 1e-14) break;
        const double df = compatibility_derivative(root);
        if (df == 0.0) break;
        const double next = root - f / df;
        if (next < lo || next > hi) break;
        root = next;
    }
    SolitonAlpha out;
    out.alpha = root;
    out.residual = soliton_compatibility(root);
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    if (std::abs(out.residual) >= 1e-12)
        throw solver_error("solve_alpha: polish failed, |F| = " +
                               std::to_string(std::abs(out.residual)),
                           {out.residual});
    return out;
}

std::pair<double, double> scan_alpha_bracket(double lo, double hi, double step) {
    double prev = lo, fprev = soliton_compatibility(lo);
    for (double a = lo + step; a <= hi + 0.5 * step; a += step) {
        const double f = soliton_compatibility(a);
        if (fprev * f < 0.0) return {prev, a};
        prev = a;
        fprev = f;
    }
    throw bracket_error("scan_alpha_bracket: no sign change found");
}

} // namespace asl

#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "asl/errors.hpp"
#include "asl/numeric.hpp"

namespace asl {

// 15-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre15 {
    static constexpr std::array<double, 8> x = {
        0.0000000000000000, 0.2011940939974345, 0.3941513470775634,
        0.5709721726085388, 0.7244177313601700, 0.8482065834104272,
        0.9372733924007059, 0.9879925180204854};
    static constexpr std::array<double, 8> w = {
        0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
        0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
        0.0703660474881081, 0.0307532419961173};

    template <class F>
    static auto apply(const F& f, double a, double b) -> decltype(f(a)) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        auto acc = f(mid) * w[0];
        for (int k = 1; k < 8; ++k) {
            const double dx = half * x[size_t(k)];
            acc = acc + (f(mid + dx) + f(mid - dx)) * w[size_t(k)];
        }
        return acc * half;
    }
};

/// Adaptive Gauss-Legendre integration of a Vec2-valued integrand over
/// [a, b]; subdivides until the two-panel refinement agrees to rel_tol.
inline Vec2 adaptive_gl2(const std::function<Vec2(double)>& f, double a, double b,
                         double rel_tol = 1e-9) {
    struct Rec {
        const std::function<Vec2(double)>& f;
        double tol;
        int depth_limit;
        Vec2 run(double a, double b, Vec2 whole, int depth) const {
            const double m = 0.5 * (a + b);
            const Vec2 left = GaussLegendre15::apply(f, a, m);
            const Vec2 right = GaussLegendre15::apply(f, m, b);
            const Vec2 sum = left + right;
            const Vec2 err = sum - whole;
            const double scale = std::max({1e-14, std::abs(sum.x), std::abs(sum.y)});
            if (depth >= depth_limit ||
                std::max(std::abs(err.x), std::abs(err.y)) < tol * scale)
                return sum;
            return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
        }
    };
    const Rec rec{f, rel_tol, 40};
    return rec.run(a, b, GaussLegendre15::apply(f, a, b), 0);
}

} // namespace asl

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "asl/residuals.hpp"
#include "asl/soliton.hpp"
#include "test_util.hpp"

using namespace asl;
using namespace asl::testutil;

TEST_CASE("soliton residual in h reduces to the Einstein residual at alpha = 0") {
    CHECK(std::abs(soliton_residual_h(h_field(1), {0.7, -0.4}, 0.0)) < 1e-12);
    const SmoothConvexField f(7u);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    for (int k = 0; k < 100; ++k) {
        const Vec2 p{U(rng), U(rng)};
        const double a = soliton_residual_h(f, p, 0.0);
        const double b = residual_eq21(f, p);
        CHECK(std::abs(a - b) < 1e-14 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("soliton residual in h on the standard paraboloid") {
    const Poly2 q("q", {{2, 0, Rational(1, 2)}, {0, 2, Rational(1, 2)}});
    CHECK(soliton_residual_h(q, {0, 0}, 0.0) == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK(soliton_residual_h(q, {1, 0}, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-15));
}

namespace {
class ZeroField final : public Field2 {
public:
    double value(Vec2) const override { return 0.0; }
    Vec2 gradient(Vec2) const override { return {0, 0}; }
    Sym2 hessian(Vec2) const override { return {0, 0, 0}; }
    std::string label() const override { return "zero"; }
};
} // namespace

TEST_CASE("soliton residual in H, hand values") {
    const ZeroField z;
    CHECK(soliton_residual_H(z, {0, 0}, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(soliton_residual_H(z, {1, 1}, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)soliton_residual_H(z, {0, 0}, 0.0), parameter_error);

    // symmetric potential gives a u<->v symmetric residual
    for (const Vec2 p : polytope_points(Polytope::soliton(), 50, 77)) {
        const double a = soliton_residual_H(H_poly(2), p, 0.7);
        const double b = soliton_residual_H(H_poly(2), {p.y, p.x}, 0.7);
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("compatibility function") {
    CHECK(soliton_compatibility(0.0) == 0.0);
    CHECK(soliton_compatibility(1.0) < 0.0);
    CHECK(soliton_compatibility(1.0) == doctest::Approx(std::exp(3.0) - 4.0 * std::exp(2.0) + 4.0));
    CHECK(soliton_compatibility(0.40) > 0.0);
    CHECK(soliton_compatibility(0.46) < 0.0);
    // guarded regrouped form stays finite and negative far out
    CHECK(std::isfinite(soliton_compatibility(50.0)));
    CHECK(soliton_compatibility(50.0) < 0.0);
}

TEST_CASE("alpha root") {
    const auto bracket = scan_alpha_bracket();
    CHECK(bracket.first >= 0.40);
    CHECK(bracket.second <= 0.46);

    const SolitonAlpha s = solve_alpha(0.40, 0.46);
    CHECK(std::abs(s.residual) < 1e-12);
    CHECK(std::abs(s.alpha - 0.43) < 0.01);

    // stable under bracket refinement
    const SolitonAlpha t = solve_alpha(s.alpha - 1e-4, s.alpha + 1e-4);
    CHECK(std::abs(t.alpha - s.alpha) < 1e-13);

    CHECK_THROWS_AS((void)solve_alpha(-0.1, 0.2), precondition_error);
    CHECK_THROWS_AS((void)solve_alpha(0.9, 1.0), bracket_error);
}

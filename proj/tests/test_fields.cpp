#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "asl/residuals.hpp"
#include "asl/transforms.hpp"
#include "test_util.hpp"

using namespace asl;
using namespace asl::testutil;

namespace {

class ConstField final : public Field2 {
public:
    explicit ConstField(double c) : c_(c) {}
    double value(Vec2) const override { return c_; }
    Vec2 gradient(Vec2) const override { return {0, 0}; }
    Sym2 hessian(Vec2) const override { return {0, 0, 0}; }
    std::string label() const override { return "const"; }

private:
    double c_;
};

} // namespace

TEST_CASE("Kaehler potentials at the origin") {
    CHECK(h_field(1).value({0, 0}) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(h_field(2).value({0, 0}) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(h_field(1).gradient({0, 0}).norm() < 1e-15);
    CHECK(h_field(2).gradient({0, 0}).norm() < 1e-15);
    CHECK_THROWS_AS((void)h_field(3), index_error);

    const Sym2 hh = h_field(1).hessian({0, 0});
    CHECK(hh.xx == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(hh.xy == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(hh.yy == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("dual potentials and boundary vanishing") {
    CHECK(H_exact(1, {0, 0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(H_exact(2, {0, 0}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(H_exact(1, {-1, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(psi_exact(1, {0, 0}) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(psi_exact(2, {0, 0}) == doctest::Approx(-0.25).epsilon(1e-15));
    for (double v : {-1.0, -0.4, 0.1, 0.9, 1.0})
        CHECK(std::abs(psi_exact(2, {1.0, v})) < 1e-15);
    CHECK_THROWS_AS((void)H_exact(2, {1.5, 0.0}), domain_error);
    CHECK_THROWS_AS((void)psi_exact(1, {1.0, 1.0}), domain_error);

    for (const Vec2 p : polytope_points(Polytope::square(1), 200, 11))
        CHECK(psi_poly(1).value(p) < 0.0);
    for (const Vec2 p : polytope_points(Polytope::square(2), 200, 12))
        CHECK(psi_poly(2).value(p) < 0.0);
}

TEST_CASE("psi is the Euler gap of H") {
    CHECK(std::abs(legendre_identity_gap(1, {0.2, -0.3})) < 1e-12);
    CHECK(legendre_identity_gap(2, {0, 0}) == 0.0);
    CHECK(std::abs(legendre_identity_gap(1, {-1.0, 0.0})) < 1e-12);
    // H_u(-1, 0) = -2/3 feeds that last identity
    CHECK(H_poly(1).gradient({-1, 0}).x == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    for (int j : {1, 2})
        for (const Vec2 p : polytope_points(Polytope::square(j), 300, 21u + unsigned(j)))
            CHECK(std::abs(legendre_identity_gap(j, p)) < 1e-12);
}

TEST_CASE("hexagon boundary data") {
    CHECK(H3_boundary({1, 0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(H3_boundary({1, -1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(H3_boundary({0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)H3_boundary({0.1, 0.1}), precondition_error);
}

TEST_CASE("hexagon truncation") {
    const H3Truncated& H3 = H3_truncated();
    CHECK(H3.value({0, 0}) == doctest::Approx(5.0 / 36.0).epsilon(1e-15));

    // tau vanishes on every edge, so the truncation matches the boundary data
    for (double w = -1.0; w <= 0.0 + 1e-9; w += 0.125) {
        for (Vec2 p : {Vec2{1.0, w}, Vec2{-1.0, -w}, Vec2{w + 1.0, -w}}) {
            CHECK(H3.value(p) == doctest::Approx(H3_boundary(p)).epsilon(1e-14));
        }
    }

    // gradient along the edge u = 1: ((2 - v^2)/6, (1 + 2v)/6)
    for (double v : {-0.9, -0.5, -0.25, 0.0}) {
        const Vec2 g = H3.gradient({1.0, v});
        CHECK(g.x == doctest::Approx((2.0 - v * v) / 6.0).epsilon(1e-14));
        CHECK(g.y == doctest::Approx((1.0 + 2.0 * v) / 6.0).epsilon(1e-14));
    }
}

TEST_CASE("analytic derivatives pass finite-difference checks") {
    struct Probe {
        const Field2* f;
        std::vector<Vec2> pts;
    };
    std::vector<Probe> probes;
    probes.push_back({&h_field(1), {{0.3, -0.7}, {1.2, 0.4}, {-2.0, 1.0}}});
    probes.push_back({&h_field(2), {{0.3, -0.7}, {1.2, 0.4}, {-2.0, 1.0}}});
    probes.push_back({&H_poly(1), polytope_points(Polytope::square(1), 20, 31, 0.1)});
    probes.push_back({&H_poly(2), polytope_points(Polytope::square(2), 20, 32, 0.1)});
    probes.push_back({&psi_poly(1), polytope_points(Polytope::square(1), 20, 33, 0.1)});
    probes.push_back({&psi_poly(2), polytope_points(Polytope::square(2), 20, 34, 0.1)});
    probes.push_back({&H3_truncated(), polytope_points(Polytope::square(3), 20, 35, 0.1)});
    for (const auto& pr : probes)
        for (const Vec2 p : pr.pts) {
            CAPTURE(pr.f->label());
            CAPTURE(p.x);
            CAPTURE(p.y);
            const Vec2 g = pr.f->gradient(p), gfd = fd_gradient(*pr.f, p);
            CHECK((g - gfd).norm() < 1e-6);
            const Sym2 h = pr.f->hessian(p), hfd = fd_hessian(*pr.f, p);
            CHECK(std::abs(h.xx - hfd.xx) < 1e-5);
            CHECK(std::abs(h.xy - hfd.xy) < 1e-5);
            CHECK(std::abs(h.yy - hfd.yy) < 1e-5);
        }
}

TEST_CASE("Einstein residual of the closed forms") {
    CHECK(std::abs(residual_eq21(h_field(1), {0, 0})) < 1e-15);
    CHECK(std::abs(residual_eq21(h_field(2), {0, 0})) < 1e-15);
    CHECK(std::abs(residual_eq21(h_field(1), {1.3, -0.7})) < 1e-12);

    for (int j : {1, 2}) {
        double worst = 0.0;
        for (int a = 0; a < 50; ++a)
            for (int b = 0; b < 50; ++b) {
                const Vec2 p{-5.0 + 10.0 * a / 49.0, -5.0 + 10.0 * b / 49.0};
                worst = std::max(worst, std::abs(residual_eq21(h_field(j), p)));
            }
        CAPTURE(j);
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("dual equation residual of the closed forms") {
    CHECK(std::abs(residual_eq211(H_poly(1), {0.1, 0.2})) < 1e-12);
    CHECK(residual_eq211(H_poly(2), {0, 0}) == 0.0);

    for (int j : {1, 2}) {
        double worst = 0.0;
        int used = 0;
        const auto bb = Polytope::square(j).bounding_box();
        for (int a = 0; a < 50; ++a)
            for (int b = 0; b < 50; ++b) {
                const Vec2 p{bb[0].x + (bb[1].x - bb[0].x) * a / 49.0,
                             bb[0].y + (bb[1].y - bb[0].y) * b / 49.0};
                if (!Polytope::square(j).contains(p)) continue;
                ++used;
                worst = std::max(worst, std::abs(residual_eq211(H_poly(j), p)));
            }
        CAPTURE(j);
        CHECK(used > 900);
        CHECK(worst < 1e-11);
    }

    // truncation error of the hexagon expansion at the centre, by hand:
    // (23/54)^2 - (23/108)^2 - 5/36 = -11/3888
    CHECK(residual_eq211(H3_truncated(), {0, 0}) ==
          doctest::Approx(-11.0 / 3888.0).epsilon(1e-13));
}

TEST_CASE("equation residual operators, degenerate inputs") {
    const ConstField minus_one(-1.0);
    CHECK(residual_eq11(minus_one, 0.5, {0.3, 0.3}) == doctest::Approx(-1.0));
    const ConstField plus(0.5);
    CHECK_THROWS_AS((void)residual_eq11(plus, 0.5, {0, 0}), sign_error);

    const ConstField zero(0.0);
    CHECK(residual_eq13(zero, {0.2, 0.1}) == doctest::Approx(3.0));
}

TEST_CASE("bordered determinant equals its cofactor expansion") {
    for (unsigned seed : {101u, 102u, 103u}) {
        const SmoothConvexField phi(seed);
        const PsiOfPhiField psi(phi);
        std::mt19937 rng(seed * 7 + 1);
        std::uniform_real_distribution<double> R(0.0, 0.8), T(0.0, 2.0 * std::numbers::pi);
        for (int k = 0; k < 100; ++k) {
            const double r = R(rng), th = T(rng);
            const Vec2 p{r * std::cos(th), r * std::sin(th)};
            const double v = psi.value(p);
            const Vec2 g = psi.gradient(p);
            const Sym2 h = psi.hessian(p);
            const double det = bordered_det(v, g, h);
            const double exp = bordered_det_expanded(v, g, h);
            const double scale = std::max(1.0, std::abs(det));
            CHECK(std::abs(det - exp) < 1e-10 * scale);
        }
    }
}

TEST_CASE("equivalence of the two equation forms under the power transform") {
    // for any smooth negative convex phi:
    //   bordered(psi) + 3 = -3 ((-phi)^{5/2} det Hess phi - 1)
    for (unsigned seed : {201u, 202u, 203u}) {
        const SmoothConvexField phi(seed);
        const PsiOfPhiField psi(phi);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> R(0.0, 0.8), T(0.0, 2.0 * std::numbers::pi);
        for (int k = 0; k < 100; ++k) {
            const double r = R(rng), th = T(rng);
            const Vec2 p{r * std::cos(th), r * std::sin(th)};
            const double lhs = residual_eq13(psi, p);
            const double rhs = -3.0 * residual_eq11(phi, 0.5, p);
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }

    // disk test function: psi of phi = s^2 + t^2 - 1
    const Poly2 phi_disk("phi-disk", {{2, 0, Rational(1)}, {0, 2, Rational(1)}, {0, 0, Rational(-1)}});
    const PsiOfPhiField psi_disk(phi_disk);
    for (const Vec2 p : {Vec2{0.0, 0.0}, Vec2{0.3, -0.2}, Vec2{-0.5, 0.1}}) {
        const double lhs = residual_eq13(psi_disk, p);
        const double rhs = -3.0 * residual_eq11(phi_disk, 0.5, p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

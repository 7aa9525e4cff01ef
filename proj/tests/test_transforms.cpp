#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "asl/quadrature.hpp"
#include "asl/residuals.hpp"
#include "asl/transforms.hpp"
#include "test_util.hpp"

using namespace asl;
using namespace asl::testutil;

TEST_CASE("adaptive quadrature sanity") {
    const Vec2 I = adaptive_gl2(
        [](double t) -> Vec2 { return {std::exp(t), std::cos(t)}; }, 0.0, 1.0);
    CHECK(I.x == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(I.y == doctest::Approx(std::sin(1.0)).epsilon(1e-13));
}

TEST_CASE("moment maps of the closed potentials") {
    CHECK(moment_map(h_field(1), {0, 0}).norm() < 1e-15);
    CHECK(moment_map(h_field(2), {0, 0}).norm() < 1e-15);
    const Vec2 uv = moment_map(h_field(1), {20, 20});
    CHECK(std::abs(1.0 - (uv.x + uv.y)) < 1e-8); // 1-(u+v) = 3/(1+e^x+e^y)
    for (const Vec2 p : {Vec2{0.5, -1.0}, Vec2{3.0, 2.0}, Vec2{-4.0, 1.0}}) {
        CHECK(Polytope::square(1).contains(moment_map(h_field(1), p)));
        CHECK(Polytope::square(2).contains(moment_map(h_field(2), p)));
    }
}

TEST_CASE("gradient map sends polygon corners onto domain corners") {
    const Vec2 c2 = gradient_map_H(H_poly(2), Polytope::square(2), {1, 1});
    CHECK(c2.x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c2.y == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(Domain::omega(2).piece(1).value(c2)) < 1e-12);
    CHECK(std::abs(Domain::omega(2).piece(2).value(c2)) < 1e-12);

    const Vec2 e1 = gradient_map_H(H_poly(1), Polytope::square(1), {-1, 0});
    CHECK(e1.x == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(e1.y == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
    CHECK(std::abs(Domain::omega(1).piece(2).value(e1)) < 1e-14);

    // all four vertices of the square hit double zero sets
    for (double su : {-1.0, 1.0})
        for (double sv : {-1.0, 1.0}) {
            const Vec2 c = gradient_map_H(H_poly(2), Polytope::square(2), {su, sv});
            int zeros = 0;
            for (const auto& q : Domain::omega(2).pieces())
                if (std::abs(q.value(c)) < 1e-12) ++zeros;
            CHECK(zeros == 2);
        }

    CHECK_THROWS_AS(
        (void)gradient_map_H(H_poly(2), Polytope::square(2), {1.1, 0.0}), domain_error);
}

TEST_CASE("boundary correspondence tables") {
    // j = 1: {u+v=1} -> rho_11, {u=-1} -> rho_21, {v=-1} -> rho_31
    const Domain& o1 = Domain::omega(1);
    for (int k = 0; k < 50; ++k) {
        const double w = -1.0 + 3.0 * k / 49.0;
        const Vec2 a = H_poly(1).gradient({w, 1.0 - w});
        CHECK(std::abs(o1.piece(1).value(a)) < 1e-10);
        const Vec2 b = H_poly(1).gradient({-1.0, w});
        CHECK(std::abs(o1.piece(2).value(b)) < 1e-10);
        const Vec2 c = H_poly(1).gradient({w, -1.0});
        CHECK(std::abs(o1.piece(3).value(c)) < 1e-10);
    }
    // j = 2: v=1 -> rho_12, u=1 -> rho_22, v=-1 -> rho_32, u=-1 -> rho_42
    const Domain& o2 = Domain::omega(2);
    for (int k = 0; k < 50; ++k) {
        const double w = -1.0 + 2.0 * k / 49.0;
        CHECK(std::abs(o2.piece(1).value(H_poly(2).gradient({w, 1.0}))) < 1e-10);
        CHECK(std::abs(o2.piece(2).value(H_poly(2).gradient({1.0, w}))) < 1e-10);
        CHECK(std::abs(o2.piece(3).value(H_poly(2).gradient({w, -1.0}))) < 1e-10);
        CHECK(std::abs(o2.piece(4).value(H_poly(2).gradient({-1.0, w}))) < 1e-10);
    }
    // j = 3 truncation: {u=1} -> rho_23 exactly
    const Domain& o3 = Domain::omega(3);
    for (int k = 0; k < 50; ++k) {
        const double v = -1.0 + 1.0 * k / 49.0;
        const Vec2 st = H3_truncated().gradient({1.0, v});
        CHECK(std::abs(o3.piece(2).value(st)) < 1e-12);
    }
}

TEST_CASE("forward-map Jacobian equals the source Hessian") {
    for (int j : {1, 2}) {
        GradientMap map{&H_poly(j), Polytope::square(j).centroid()};
        for (const Vec2 uv : polytope_points(Polytope::square(j), 5, 91u + unsigned(j), 0.1)) {
            const double h = 1e-6;
            const Vec2 de = (map.forward({uv.x + h, uv.y}) - map.forward({uv.x - h, uv.y})) *
                            (0.5 / h);
            const Vec2 dn = (map.forward({uv.x, uv.y + h}) - map.forward({uv.x, uv.y - h})) *
                            (0.5 / h);
            const Sym2 hess = H_poly(j).hessian(uv);
            CHECK(std::abs(de.x - hess.xx) < 1e-7);
            CHECK(std::abs(de.y - hess.xy) < 1e-7);
            CHECK(std::abs(dn.x - hess.xy) < 1e-7);
            CHECK(std::abs(dn.y - hess.yy) < 1e-7);
        }
    }
}

TEST_CASE("gradient map inverse round trip and image containment") {
    for (int j : {1, 2}) {
        GradientMap map{&H_poly(j), Polytope::square(j).centroid()};
        for (const Vec2 uv : polytope_points(Polytope::square(j), 100, 41u + unsigned(j))) {
            const Vec2 st = map.forward(uv);
            CHECK(Domain::omega(j).contains(st));
            const Vec2 back = map.inverse(st);
            CHECK((back - uv).norm() < 1e-9);
        }
    }
}

TEST_CASE("Hessian inversion identities") {
    const PsiComposite psi1(1), psi2(2);
    CHECK(hessian_inverse_gap(H_poly(2), psi2, {0, 0}) < 1e-10);
    CHECK(hessian_inverse_gap(H_poly(1), psi1, {0.3, -0.2}) < 1e-8);

    for (int j : {1, 2}) {
        const PsiComposite& psi = (j == 1) ? psi1 : psi2;
        for (const Vec2 uv : polytope_points(Polytope::square(j), 100, 51u + unsigned(j), 0.02)) {
            const Vec2 st = H_poly(j).gradient(uv);
            const double dH = H_poly(j).hessian(uv).det();
            const double dP = psi.hessian(st).det();
            CHECK(std::abs(dH * dP - 1.0) < 1e-9);
            // (2.12): the pulled-back gradient recovers the polygon point
            const Vec2 g = psi.gradient(st);
            CHECK((g - uv).norm() < 1e-8);
            // (2.14)
            const Sym2 hh = H_poly(j).hessian(uv);
            const double gap = dH + psi.value(st) -
                               (uv.x * uv.x * hh.xx + 2 * uv.x * uv.y * hh.xy +
                                uv.y * uv.y * hh.yy) / 3.0;
            CHECK(std::abs(gap) < 1e-10);
        }
    }
}

TEST_CASE("equation residuals of the pulled-back closed forms") {
    for (int j : {1, 2}) {
        const PsiComposite psi(j);
        const PhiOfPsiField phi(psi);
        double worst13 = 0.0, worst11 = 0.0;
        for (const Vec2 uv : polytope_points(Polytope::square(j), 200, 61u + unsigned(j), 0.02)) {
            const Vec2 st = H_poly(j).gradient(uv);
            if (Domain::omega(j).min_rho(st) < 0.01) continue;
            worst13 = std::max(worst13, std::abs(residual_eq13(psi, st)));
            worst11 = std::max(worst11, std::abs(residual_eq11(phi, 0.5, st)));
        }
        CAPTURE(j);
        CHECK(worst13 < 1e-10);
        CHECK(worst11 < 1e-9);
    }
}

TEST_CASE("power transform and its inverse") {
    CHECK(psi_from_phi(-1.0) ==
          doctest::Approx(-std::pow(2.0 / 3.0, 2.0 / 3.0)).epsilon(1e-15));
    CHECK(psi_from_phi(-1.0) == doctest::Approx(-0.76314).epsilon(1e-5));
    CHECK(phi_from_psi(psi_from_phi(-0.37)) == doctest::Approx(-0.37).epsilon(1e-14));
    CHECK(psi_from_phi(0.0) == 0.0);
    CHECK(phi_from_psi(0.0) == 0.0);
    CHECK_THROWS_AS((void)psi_from_phi(0.5), sign_error);
    CHECK_THROWS_AS((void)phi_from_psi(0.5), sign_error);
    for (double phi : {-2.0, -0.9, -0.1, -1e-6})
        CHECK(phi_from_psi(psi_from_phi(phi)) == doctest::Approx(phi).epsilon(1e-14));
}

TEST_CASE("derivatives of the composite fields pass finite differences") {
    const PsiComposite psi2(2);
    const PhiOfPsiField phi2(psi2);
    for (const Vec2 st : {Vec2{0.05, -0.03}, Vec2{0.21, 0.12}, Vec2{-0.3, 0.05}}) {
        const Vec2 g = psi2.gradient(st), gfd = fd_gradient(psi2, st);
        CHECK((g - gfd).norm() < 1e-6);
        const Sym2 h = psi2.hessian(st), hfd = fd_hessian(psi2, st);
        CHECK(std::abs(h.xx - hfd.xx) < 1e-5);
        CHECK(std::abs(h.xy - hfd.xy) < 1e-5);
        CHECK(std::abs(h.yy - hfd.yy) < 1e-5);
        const Vec2 pg = phi2.gradient(st), pgfd = fd_gradient(phi2, st);
        CHECK((pg - pgfd).norm() < 1e-6);
    }
}

TEST_CASE("critical points of the potentials sit at the origin") {
    CHECK(critical_point(H_poly(1), Polytope::square(1).centroid()).norm() < 1e-12);
    CHECK(critical_point(H_poly(2), {0.3, 0.2}).norm() < 1e-12);
    CHECK(critical_point(H3_truncated(), {0.1, -0.05}).norm() < 1e-12);
}

TEST_CASE("recovery of the potential from its dual") {
    // centre: x = y = 0, h = ln 3 (j=1) and 2 ln 2 (j=2)
    const RecoverResult r1 = recover_h_from_H(H_poly(1), Polytope::square(1), {0, 0}, {0, 0});
    CHECK(std::abs(r1.x) < 1e-12);
    CHECK(std::abs(r1.y) < 1e-12);
    CHECK(r1.h == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    const RecoverResult r2 = recover_h_from_H(H_poly(2), Polytope::square(2), {0, 0}, {0, 0});
    CHECK(r2.h == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));

    // the moment of x = 1 on the second factor: u* = tanh(1/2)
    const double ustar = std::tanh(0.5);
    const RecoverResult rx = recover_h_from_H(H_poly(2), Polytope::square(2), {ustar, 0}, {0, 0});
    CHECK(rx.x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(rx.y) < 1e-6);

    // h = -ln(-psi) wherever psi is the Euler gap
    CHECK(rx.h == doctest::Approx(-std::log(-psi_poly(2).value({ustar, 0}))).epsilon(1e-12));

    // oracle comparison at interior targets
    for (int j : {1, 2}) {
        GradientMap inv_moment{&h_field(j), {0, 0}};
        for (const Vec2 uv : polytope_points(Polytope::square(j), 20, 71u + unsigned(j), 0.15)) {
            const RecoverResult r = recover_h_from_H(H_poly(j), Polytope::square(j), uv, {0, 0});
            const Vec2 xy = inv_moment.inverse(uv, 1e-12);
            CAPTURE(j);
            CAPTURE(uv.x);
            CAPTURE(uv.y);
            CHECK(std::abs(r.x - xy.x) < 1e-6);
            CHECK(std::abs(r.y - xy.y) < 1e-6);
            CHECK(std::abs(r.h - h_field(j).value(xy)) < 1e-6);
        }
    }

    CHECK_THROWS_AS((void)recover_h_from_H(H_poly(2), Polytope::square(2), {2.0, 0.0}, {0, 0}),
                    path_error);
    CHECK_THROWS_AS((void)recover_h_from_H(H_poly(2), Polytope::square(2),
                                           {1.0 - 1e-13, 0.0}, {0, 0}),
                    near_boundary_error);
}

TEST_CASE("grid Legendre transform against the closed forms") {
    for (int j : {1, 2}) {
        const LatticeField L = sample_on_polytope(H_poly(j), Polytope::square(j), 128);
        const MeshField dual = legendre_dual(L);
        const PsiComposite psi(j);
        double worst = 0.0;
        int used = 0;
        for (int jj = 0; jj < dual.ny; ++jj)
            for (int ii = 0; ii < dual.nx; ++ii) {
                if (!dual.has(ii, jj)) continue;
                ++used;
                const Vec2 st = dual.point[dual.idx(ii, jj)];
                worst = std::max(worst,
                                 std::abs(dual.value[dual.idx(ii, jj)] - psi.value(st)));
            }
        CAPTURE(j);
        CHECK(used > 5000);
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("quadratic fields are self dual") {
    const Poly2 q("q", {{2, 0, Rational(1, 2)}, {0, 2, Rational(1, 2)}});
    const LatticeField L = sample_on_polytope(q, Polytope::square(2), 64);
    const MeshField dual = legendre_dual(L);
    for (int jj = 0; jj < dual.ny; ++jj)
        for (int ii = 0; ii < dual.nx; ++ii) {
            if (!dual.has(ii, jj)) continue;
            const Vec2 st = dual.point[dual.idx(ii, jj)];
            CHECK(dual.value[dual.idx(ii, jj)] ==
                  doctest::Approx(0.5 * (st.x * st.x + st.y * st.y)).epsilon(1e-12));
        }
}

TEST_CASE("double transform returns the original field") {
    const LatticeField L = sample_on_polytope(H_poly(2), Polytope::square(2), 128);
    const MeshField dual = legendre_dual(L);
    const MeshField back = legendre_dual(dual);
    double worst = 0.0;
    int used = 0;
    for (int jj = 0; jj < back.ny; ++jj)
        for (int ii = 0; ii < back.nx; ++ii) {
            if (!back.has(ii, jj)) continue;
            ++used;
            const Vec2 uv = back.point[back.idx(ii, jj)];
            worst = std::max(worst,
                             std::abs(back.value[back.idx(ii, jj)] - H_poly(2).value(uv)));
        }
    CHECK(used > 4000);
    CHECK(worst < 1e-4);
}

TEST_CASE("non-convex input is rejected with node locations") {
    const Poly2 bad("bad", {{2, 0, Rational(-1, 2)}, {0, 2, Rational(-1, 2)}});
    const LatticeField L = sample_on_polytope(bad, Polytope::square(2), 32);
    CHECK_THROWS_AS((void)legendre_dual(L), convexity_error);
    try {
        (void)legendre_dual(L);
    } catch (const convexity_error& e) {
        CHECK(std::string(e.what()).find("(") != std::string::npos);
    }
}

TEST_CASE("parallel and serial transforms agree bitwise") {
    const LatticeField L = sample_on_polytope(H_poly(2), Polytope::square(2), 96);
    const MeshField a = legendre_dual(L, par::Exec::serial);
    const MeshField b = legendre_dual(L, par::Exec::parallel);
    REQUIRE(a.value.size() == b.value.size());
    for (std::size_t i = 0; i < a.value.size(); ++i) {
        CHECK(a.value[i] == b.value[i]);
        CHECK(a.point[i].x == b.point[i].x);
        CHECK(a.mask[i] == b.mask[i]);
    }
}

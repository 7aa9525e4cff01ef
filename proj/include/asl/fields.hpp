#pragma once

#include <memory>
#include <string>
#include <vector>

#include "asl/geometry.hpp"
#include "asl/numeric.hpp"

namespace asl {

/// Third derivatives of a scalar field, fully symmetric.
struct Third2 {
    double xxx = 0, xxy = 0, xyy = 0, yyy = 0;
};

/// A twice-differentiable scalar field of two variables with analytic
/// derivatives.
class Field2 {
public:
    virtual ~Field2() = default;
    virtual double value(Vec2 p) const = 0;
    virtual Vec2 gradient(Vec2 p) const = 0;
    virtual Sym2 hessian(Vec2 p) const = 0;
    virtual std::string label() const = 0;
};

/// Bivariate polynomial with exact rational coefficients. Derivative
/// polynomials are precomputed up to third order.
class Poly2 : public Field2 {
public:
    struct Term {
        int iu, iv;
        Rational coef;
    };

    Poly2() = default;
    Poly2(std::string label, std::vector<Term> terms);

    double value(Vec2 p) const override;
    Vec2 gradient(Vec2 p) const override;
    Sym2 hessian(Vec2 p) const override;
    Third2 third(Vec2 p) const;
    std::string label() const override { return label_; }

    Poly2 derivative(int du, int dv) const;
    Rational value_exact(Rational u, Rational v) const;

private:
    struct Flat {
        int iu, iv;
        double c;
    };
    static std::vector<Flat> flatten(const std::vector<Term>& ts);
    static double eval_flat(const std::vector<Flat>& f, Vec2 p);

    std::string label_;
    std::vector<Term> terms_;
    std::vector<Flat> v_, du_, dv_, duu_, duv_, dvv_, duuu_, duuv_, duvv_, dvvv_;
    void build();
};

/// The dual polynomial potentials on the moment polygons (j = 1, 2) and the
/// vanishing boundary potentials.
const Poly2& H_poly(int j);   // j in {1,2}
const Poly2& psi_poly(int j); // j in {1,2}

/// Checked evaluation on the closure of the polygon (domain error outside).
double H_exact(int j, Vec2 uv);
double psi_exact(int j, Vec2 uv);

/// Kaehler potentials h_j(x, y) on the plane, j in {1,2}; exact derivatives,
/// numerically stable for large |x|, |y|.
const Field2& h_field(int j);

/// Boundary restriction (r + 1)/6 with r = u^2 + uv + v^2. The point must
/// lie on the boundary of the hexagon within `tol`.
double H3_boundary(Vec2 uv, double tol = 1e-12);

/// Order-one truncation (r+1)/6 + tau / (12 (r-3)) of the hexagon potential,
/// tau = (1-u^2)(1-v^2)(1-(u+v)^2). Exact on the boundary where tau = 0.
class H3Truncated : public Field2 {
public:
    double value(Vec2 p) const override;
    Vec2 gradient(Vec2 p) const override;
    Sym2 hessian(Vec2 p) const override;
    std::string label() const override { return "H3-truncated-order1"; }
    int truncation_order() const { return 1; }
};

const H3Truncated& H3_truncated();

} // namespace asl

#include "asl/residuals.hpp"

#include <cmath>

namespace asl {

double bordered_det(double val, Vec2 g, Sym2 h) {
    // expand along the last row
    const double c1 = h.xy * g.y - h.yy * g.x; // cofactor sign folded in below
    const double c2 = h.xx * g.y - h.xy * g.x;
    return g.x * c1 - g.y * c2 + 3.0 * val * h.det();
}

double bordered_det_expanded(double val, Vec2 g, Sym2 h) {
    const double w = g.x * g.x * h.yy - 2.0 * g.x * g.y * h.xy + g.y * g.y * h.xx;
    return 3.0 * val * h.det() - w;
}

double residual_eq21(const Field2& h, Vec2 p) {
    return h.hessian(p).det() - std::exp(-h.value(p));
}

double residual_eq211(const Field2& H, Vec2 p) {
    const double u = p.x, v = p.y;
    const double val = H.value(p);
    const Vec2 g = H.gradient(p);
    const Sym2 h = H.hessian(p);
    const Sym2 m{h.yy - u * u / 3.0, h.xy + u * v / 3.0, h.xx - v * v / 3.0};
    return m.det() - (val - u * g.x - v * g.y);
}

double residual_eq13(const Field2& psi, Vec2 p) {
    return bordered_det(psi.value(p), psi.gradient(p), psi.hessian(p)) + 3.0;
}

double residual_eq11(const Field2& phi, double k, Vec2 p) {
    const double val = phi.value(p);
    if (!(val < 0.0))
        throw sign_error("residual_eq11: phi must be negative at the evaluation point");
    return std::pow(-val, 2.0 + k) * phi.hessian(p).det() - 1.0;
}

double legendre_identity_gap(int j, Vec2 p) {
    const Poly2& H = H_poly(j);
    const Poly2& psi = psi_poly(j);
    const Vec2 g = H.gradient(p);
    return p.x * g.x + p.y * g.y - H.value(p) - psi.value(p);
}

} // namespace asl

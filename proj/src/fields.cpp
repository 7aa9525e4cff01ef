#include "asl/fields.hpp"

#include <cmath>

namespace asl {

// ---------------------------------------------------------------------------
// Poly2

Poly2::Poly2(std::string label, std::vector<Term> terms)
    : label_(std::move(label)), terms_(std::move(terms)) {
    build();
}

namespace {

std::vector<Poly2::Term> diff_terms(const std::vector<Poly2::Term>& ts, int du, int dv) {
    std::vector<Poly2::Term> out;
    for (const auto& t : ts) {
        int iu = t.iu, iv = t.iv;
        Rational c = t.coef;
        bool dead = false;
        for (int k = 0; k < du; ++k) {
            if (iu == 0) { dead = true; break; }
            c = c * Rational(iu);
            --iu;
        }
        for (int k = 0; k < dv && !dead; ++k) {
            if (iv == 0) { dead = true; break; }
            c = c * Rational(iv);
            --iv;
        }
        if (!dead && !c.is_zero()) out.push_back({iu, iv, c});
    }
    return out;
}

} // namespace

Poly2 Poly2::derivative(int du, int dv) const {
    return Poly2(label_ + "_d" + std::to_string(du) + std::to_string(dv),
                 diff_terms(terms_, du, dv));
}

Rational Poly2::value_exact(Rational u, Rational v) const {
    Rational acc(0);
    for (const auto& t : terms_) {
        Rational m = t.coef;
        for (int k = 0; k < t.iu; ++k) m = m * u;
        for (int k = 0; k < t.iv; ++k) m = m * v;
        acc = acc + m;
    }
    return acc;
}

std::vector<Poly2::Flat> Poly2::flatten(const std::vector<Term>& ts) {
    std::vector<Flat> f;
    f.reserve(ts.size());
    for (const auto& t : ts) f.push_back({t.iu, t.iv, t.coef.to_double()});
    return f;
}

double Poly2::eval_flat(const std::vector<Flat>& f, Vec2 p) {
    double acc = 0.0;
    for (const auto& t : f) {
        double m = t.c;
        for (int k = 0; k < t.iu; ++k) m *= p.x;
        for (int k = 0; k < t.iv; ++k) m *= p.y;
        acc += m;
    }
    return acc;
}

void Poly2::build() {
    auto d = [&](int a, int b) { return flatten(diff_terms(terms_, a, b)); };
    v_ = flatten(terms_);
    du_ = d(1, 0);
    dv_ = d(0, 1);
    duu_ = d(2, 0);
    duv_ = d(1, 1);
    dvv_ = d(0, 2);
    duuu_ = d(3, 0);
    duuv_ = d(2, 1);
    duvv_ = d(1, 2);
    dvvv_ = d(0, 3);
}

double Poly2::value(Vec2 p) const { return eval_flat(v_, p); }
Vec2 Poly2::gradient(Vec2 p) const { return {eval_flat(du_, p), eval_flat(dv_, p)}; }
Sym2 Poly2::hessian(Vec2 p) const {
    return {eval_flat(duu_, p), eval_flat(duv_, p), eval_flat(dvv_, p)};
}
Third2 Poly2::third(Vec2 p) const {
    return {eval_flat(duuu_, p), eval_flat(duuv_, p), eval_flat(duvv_, p),
            eval_flat(dvvv_, p)};
}

// ---------------------------------------------------------------------------
// Closed forms on the polygons

const Poly2& H_poly(int j) {
    using R = Rational;
    // H1 = uv(u+v)/6 + (u^2+uv+v^2)/3 + 1/3
    static const Poly2 H1("H1", {{2, 1, R(1, 6)},
                                 {1, 2, R(1, 6)},
                                 {2, 0, R(1, 3)},
                                 {1, 1, R(1, 3)},
                                 {0, 2, R(1, 3)},
                                 {0, 0, R(1, 3)}});
    // H2 = (u^2+v^2)/4 - u^2 v^2 / 12 + 1/4
    static const Poly2 H2("H2", {{2, 0, R(1, 4)},
                                 {0, 2, R(1, 4)},
                                 {2, 2, R(-1, 12)},
                                 {0, 0, R(1, 4)}});
    switch (j) {
    case 1: return H1;
    case 2: return H2;
    default: throw index_error("H_poly: no closed form for j = " + std::to_string(j));
    }
}

const Poly2& psi_poly(int j) {
    using R = Rational;
    // psi1 = (1/3)(u+1)(v+1)(u+v-1) = [uv(u+v) + u^2+uv+v^2 - 1]/3
    static const Poly2 P1("psi1", {{2, 1, R(1, 3)},
                                   {1, 2, R(1, 3)},
                                   {2, 0, R(1, 3)},
                                   {1, 1, R(1, 3)},
                                   {0, 2, R(1, 3)},
                                   {0, 0, R(-1, 3)}});
    // psi2 = -(1/4)(1-u^2)(1-v^2)
    static const Poly2 P2("psi2", {{0, 0, R(-1, 4)},
                                   {2, 0, R(1, 4)},
                                   {0, 2, R(1, 4)},
                                   {2, 2, R(-1, 4)}});
    switch (j) {
    case 1: return P1;
    case 2: return P2;
    default: throw index_error("psi_poly: no closed form for j = " + std::to_string(j));
    }
}

double H_exact(int j, Vec2 uv) {
    if (!Polytope::square(j).contains_closure(uv, 1e-12))
        throw domain_error("H_exact: point outside the closed polygon");
    return H_poly(j).value(uv);
}

double psi_exact(int j, Vec2 uv) {
    if (!Polytope::square(j).contains_closure(uv, 1e-12))
        throw domain_error("psi_exact: point outside the closed polygon");
    return psi_poly(j).value(uv);
}

// ---------------------------------------------------------------------------
// Kaehler potentials

namespace {

// h1 = -log 9 - x - y + 3 log(1 + e^x + e^y)
class H1Potential final : public Field2 {
public:
    double value(Vec2 p) const override {
        const double m = std::max({0.0, p.x, p.y});
        const double lse =
            m + std::log(std::exp(-m) + std::exp(p.x - m) + std::exp(p.y - m));
        return -std::log(9.0) - p.x - p.y + 3.0 * lse;
    }
    Vec2 gradient(Vec2 p) const override {
        const auto [px, py] = fractions(p);
        return {-1.0 + 3.0 * px, -1.0 + 3.0 * py};
    }
    Sym2 hessian(Vec2 p) const override {
        const auto [px, py] = fractions(p);
        return {3.0 * px * (1.0 - px), -3.0 * px * py, 3.0 * py * (1.0 - py)};
    }
    std::string label() const override { return "h1"; }

private:
    static std::pair<double, double> fractions(Vec2 p) {
        const double m = std::max({0.0, p.x, p.y});
        const double e0 = std::exp(-m), ex = std::exp(p.x - m), ey = std::exp(p.y - m);
        const double s = e0 + ex + ey;
        return {ex / s, ey / s};
    }
};

// h2 = -2 log 2 - x - y + 2 log(1+e^x) + 2 log(1+e^y)
class H2Potential final : public Field2 {
public:
    double value(Vec2 p) const override {
        return -2.0 * std::log(2.0) - p.x - p.y + 2.0 * softplus(p.x) +
               2.0 * softplus(p.y);
    }
    Vec2 gradient(Vec2 p) const override {
        return {-1.0 + 2.0 * sigmoid(p.x), -1.0 + 2.0 * sigmoid(p.y)};
    }
    Sym2 hessian(Vec2 p) const override {
        const double sx = sigmoid(p.x), sy = sigmoid(p.y);
        return {2.0 * sx * (1.0 - sx), 0.0, 2.0 * sy * (1.0 - sy)};
    }
    std::string label() const override { return "h2"; }

private:
    static double softplus(double t) {
        return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    }
    static double sigmoid(double t) {
        return t > 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
    }
};

} // namespace

const Field2& h_field(int j) {
    static const H1Potential h1;
    static const H2Potential h2;
    switch (j) {
    case 1: return h1;
    case 2: return h2;
    default:
        throw index_error("h_field: no closed form for j = " + std::to_string(j));
    }
}

// ---------------------------------------------------------------------------
// Hexagon boundary data and truncated interior expansion

double H3_boundary(Vec2 p, double tol) {
    if (!Polytope::square(3).on_boundary(p, tol))
        throw precondition_error("H3_boundary: point is not on the hexagon boundary");
    const double r = p.x * p.x + p.x * p.y + p.y * p.y;
    return (r + 1.0) / 6.0;
}

namespace {

struct TauEval {
    double t, tu, tv, tuu, tuv, tvv;
};

TauEval tau_eval(Vec2 p) {
    const double u = p.x, v = p.y;
    const double A = 1.0 - u * u, B = 1.0 - v * v, C = 1.0 - (u + v) * (u + v);
    const double Au = -2.0 * u, Bv = -2.0 * v, Cu = -2.0 * (u + v);
    // A_uu = B_vv = C_uu = C_uv = C_vv = -2
    TauEval e;
    e.t = A * B * C;
    e.tu = Au * B * C + A * B * Cu;
    e.tv = A * Bv * C + A * B * Cu; // C_v = C_u
    e.tuu = -2.0 * B * C + 2.0 * Au * B * Cu - 2.0 * A * B;
    e.tuv = Au * Bv * C + Au * B * Cu + A * Bv * Cu - 2.0 * A * B;
    e.tvv = -2.0 * A * C + 2.0 * A * Bv * Cu - 2.0 * A * B;
    return e;
}

} // namespace

double H3Truncated::value(Vec2 p) const {
    const double r = p.x * p.x + p.x * p.y + p.y * p.y;
    const TauEval e = tau_eval(p);
    return (r + 1.0) / 6.0 + e.t / (12.0 * (r - 3.0));
}

Vec2 H3Truncated::gradient(Vec2 p) const {
    const double u = p.x, v = p.y;
    const double r = u * u + u * v + v * v;
    const double ru = 2.0 * u + v, rv = u + 2.0 * v;
    const TauEval e = tau_eval(p);
    const double w = 12.0 * (r - 3.0);
    const double gu = e.tu / w - e.t * 12.0 * ru / (w * w);
    const double gv = e.tv / w - e.t * 12.0 * rv / (w * w);
    return {ru / 6.0 + gu, rv / 6.0 + gv};
}

Sym2 H3Truncated::hessian(Vec2 p) const {
    const double u = p.x, v = p.y;
    const double r = u * u + u * v + v * v;
    const double ru = 2.0 * u + v, rv = u + 2.0 * v;
    const TauEval e = tau_eval(p);
    const double q = r - 3.0;
    // G = tau / (12 q):
    const double q2 = q * q, q3 = q2 * q;
    const double Guu =
        e.tuu / (12.0 * q) - (2.0 * e.tu * ru + e.t * 2.0) / (12.0 * q2) +
        2.0 * e.t * ru * ru / (12.0 * q3);
    const double Guv =
        e.tuv / (12.0 * q) - (e.tu * rv + e.tv * ru + e.t * 1.0) / (12.0 * q2) +
        2.0 * e.t * ru * rv / (12.0 * q3);
    const double Gvv =
        e.tvv / (12.0 * q) - (2.0 * e.tv * rv + e.t * 2.0) / (12.0 * q2) +
        2.0 * e.t * rv * rv / (12.0 * q3);
    return {1.0 / 3.0 + Guu, 1.0 / 6.0 + Guv, 1.0 / 3.0 + Gvv};
}

const H3Truncated& H3_truncated() {
    static const H3Truncated f;
    return f;
}

} // namespace asl

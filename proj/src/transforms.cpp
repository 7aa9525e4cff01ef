#include "asl/transforms.hpp"

#include <cmath>
#include <sstream>

#include "asl/quadrature.hpp"

namespace asl {

Vec2 GradientMap::inverse(Vec2 target, double tol, int max_iter) const {
    Vec2 w = inverse_seed;
    Vec2 r = source->gradient(w) - target;
    double rn = r.norm_inf();
    for (int it = 0; it < max_iter; ++it) {
        if (rn < tol) return w;
        const Sym2 J = source->hessian(w);
        if (std::abs(J.det()) < 1e-300)
            throw singularity_error("GradientMap::inverse: singular Hessian");
        const Vec2 step = J.inverse().apply(-r);
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const Vec2 w2 = w + lambda * step;
            const Vec2 r2 = source->gradient(w2) - target;
            if (r2.norm_inf() < rn) {
                w = w2;
                r = r2;
                rn = r2.norm_inf();
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    if (rn >= tol)
        throw singularity_error("GradientMap::inverse: no convergence (residual " +
                                std::to_string(rn) + ")");
    return w;
}

Vec2 gradient_map_H(const Field2& H, const Polytope& box, Vec2 uv) {
    if (!box.contains_closure(uv, 1e-12))
        throw domain_error("gradient_map_H: point outside the polygon closure");
    return H.gradient(uv);
}

Vec2 critical_point(const Field2& f, Vec2 seed, double tol) {
    GradientMap m{&f, seed};
    return m.inverse({0.0, 0.0}, tol);
}

double hessian_inverse_gap(const Field2& H, const Field2& psi_st, Vec2 uv) {
    const Vec2 st = H.gradient(uv);
    const Sym2 A = psi_st.hessian(st);
    const Sym2 B = H.hessian(uv);
    const Mat2 M = Mat2::from(A) * Mat2::from(B);
    return std::max(std::max(std::abs(M.a - 1.0), std::abs(M.d - 1.0)),
                    std::max(std::abs(M.b), std::abs(M.c)));
}

// ---------------------------------------------------------------------------
// The power transform (1.2) and its inverse

namespace {
const double kPsiOfPhi = std::pow(2.0 / 3.0, 2.0 / 3.0);  // psi = -k (-phi)^{3/2}
const double kPhiOfPsi = std::pow(1.5, 4.0 / 9.0);        // phi = -k (-psi)^{2/3}
} // namespace

double psi_from_phi(double phi) {
    if (phi > 0.0) throw sign_error("psi_from_phi: phi must be <= 0");
    return -kPsiOfPhi * std::pow(-phi, 1.5);
}

double phi_from_psi(double psi) {
    if (psi > 0.0) throw sign_error("phi_from_psi: psi must be <= 0");
    return -kPhiOfPsi * std::pow(-psi, 2.0 / 3.0);
}

// ---------------------------------------------------------------------------
// Composite fields

PsiComposite::PsiComposite(int j)
    : j_(j), H_(H_poly(j)), psi_(psi_poly(j)),
      map_{&H_, Polytope::square(j).centroid()} {}

Vec2 PsiComposite::invert(Vec2 st) const { return map_.inverse(st); }

double PsiComposite::value(Vec2 st) const { return psi_.value(invert(st)); }

Vec2 PsiComposite::gradient(Vec2 st) const {
    const Vec2 uv = invert(st);
    const Sym2 K = H_.hessian(uv).inverse();
    return K.apply(psi_.gradient(uv));
}

Sym2 PsiComposite::hessian(Vec2 st) const {
    const Vec2 uv = invert(st);
    const Sym2 Ks = H_.hessian(uv).inverse();
    const Mat2 K = Mat2::from(Ks);
    const Sym2 Hp = psi_.hessian(uv);
    const Vec2 gp = psi_.gradient(uv);
    const Third2 T = H_.third(uv);
    const Sym2 Ju{T.xxx, T.xxy, T.xyy}; // d(Hess H)/du
    const Sym2 Jv{T.xxy, T.xyy, T.yyy}; // d(Hess H)/dv

    // first chain-rule block K Hess(psi) K
    const Mat2 khk = K * Mat2::from(Hp) * K;

    // dK/ds_alpha = -K (Ju K_{u,alpha} + Jv K_{v,alpha}) K
    const Mat2 Js = Mat2::from(Ju) * Ks.xx + Mat2::from(Jv) * Ks.xy;
    const Mat2 Jt = Mat2::from(Ju) * Ks.xy + Mat2::from(Jv) * Ks.yy;
    const Mat2 Ts = -(K * Js * K);
    const Mat2 Tt = -(K * Jt * K);

    const double pss = khk.a + gp.x * Ts.a + gp.y * Ts.c;
    const double ptt = khk.d + gp.x * Tt.b + gp.y * Tt.d;
    const double pst1 = khk.b + gp.x * Ts.b + gp.y * Ts.d;
    const double pst2 = khk.c + gp.x * Tt.a + gp.y * Tt.c;
    return {pss, 0.5 * (pst1 + pst2), ptt};
}

std::string PsiComposite::label() const {
    return "psi" + std::to_string(j_) + "|Omega" + std::to_string(j_);
}

double PhiOfPsiField::value(Vec2 p) const { return phi_from_psi(psi_.value(p)); }

Vec2 PhiOfPsiField::gradient(Vec2 p) const {
    const double w = -psi_.value(p);
    const Vec2 g = psi_.gradient(p);
    const double f = kPhiOfPsi * (2.0 / 3.0) * std::pow(w, -1.0 / 3.0);
    return {f * g.x, f * g.y};
}

Sym2 PhiOfPsiField::hessian(Vec2 p) const {
    const double w = -psi_.value(p);
    const Vec2 g = psi_.gradient(p);
    const Sym2 h = psi_.hessian(p);
    const double c = kPhiOfPsi * (2.0 / 3.0);
    const double w13 = std::pow(w, -1.0 / 3.0), w43 = std::pow(w, -4.0 / 3.0);
    return {c * (w13 * h.xx + w43 * g.x * g.x / 3.0),
            c * (w13 * h.xy + w43 * g.x * g.y / 3.0),
            c * (w13 * h.yy + w43 * g.y * g.y / 3.0)};
}

double PsiOfPhiField::value(Vec2 p) const { return psi_from_phi(phi_.value(p)); }

Vec2 PsiOfPhiField::gradient(Vec2 p) const {
    const double w = -phi_.value(p);
    const Vec2 g = phi_.gradient(p);
    const double f = kPsiOfPhi * 1.5 * std::sqrt(w);
    return {f * g.x, f * g.y};
}

Sym2 PsiOfPhiField::hessian(Vec2 p) const {
    const double w = -phi_.value(p);
    const Vec2 g = phi_.gradient(p);
    const Sym2 h = phi_.hessian(p);
    const double c = kPsiOfPhi * 1.5;
    const double sq = std::sqrt(w), isq = 0.5 / sq;
    return {c * (sq * h.xx - isq * g.x * g.x), c * (sq * h.xy - isq * g.x * g.y),
            c * (sq * h.yy - isq * g.y * g.y)};
}

// ---------------------------------------------------------------------------
// Recovery of h from H

RecoverResult recover_h_from_H(const Field2& H, const Polytope& box, Vec2 target,
                               Vec2 base, double rel_tol) {
    const Vec2 d = target - base;
    if (!box.contains(base) || !box.contains(target))
        throw path_error("recover_h_from_H: endpoints must be interior");

    auto euler = [&](Vec2 p) {
        const double val = H.value(p);
        const Vec2 g = H.gradient(p);
        return val - p.x * g.x - p.y * g.y;
    };

    auto integrand = [&](double tau) -> Vec2 {
        const Vec2 p = base + tau * d;
        if (!box.contains_closure(p, 1e-12))
            throw path_error("recover_h_from_H: segment leaves the polygon");
        const double E = euler(p);
        if (E < 1e-12)
            throw near_boundary_error("recover_h_from_H: H - u H_u - v H_v below 1e-12");
        const double u = p.x, v = p.y;
        const Sym2 h = H.hessian(p);
        const double fx = (h.xx - v * v / 3.0) * d.x + (h.xy + u * v / 3.0) * d.y;
        const double fy = (h.xy + u * v / 3.0) * d.x + (h.yy - u * u / 3.0) * d.y;
        return {fx / E, fy / E};
    };

    const Vec2 xy = adaptive_gl2(integrand, 0.0, 1.0, rel_tol);
    const double Et = euler(target);
    if (Et < 1e-12)
        throw near_boundary_error("recover_h_from_H: target too close to the boundary");
    return {xy.x, xy.y, -std::log(Et)};
}

// ---------------------------------------------------------------------------
// Grid Legendre transform

LatticeField sample_on_polytope(const Field2& f, const Polytope& box, int N) {
    const auto bb = box.bounding_box();
    const double w = bb[1].x - bb[0].x, h = bb[1].y - bb[0].y;
    LatticeField out;
    out.step = std::max(w, h) / N;
    out.origin = bb[0];
    out.nx = int(std::floor(w / out.step + 0.5)) + 1;
    out.ny = int(std::floor(h / out.step + 0.5)) + 1;
    out.value.assign(std::size_t(out.nx) * out.ny, 0.0);
    out.mask.assign(std::size_t(out.nx) * out.ny, 0);
    for (int j = 0; j < out.ny; ++j)
        for (int i = 0; i < out.nx; ++i) {
            const Vec2 p = out.point(i, j);
            if (box.contains_closure(p, 1e-12)) {
                out.value[out.idx(i, j)] = f.value(p);
                out.mask[out.idx(i, j)] = 1;
            }
        }
    return out;
}

namespace {

[[noreturn]] void throw_nonconvex(const std::vector<std::pair<int, int>>& bad) {
    std::ostringstream os;
    os << "legendre_dual: input not convex at " << bad.size() << " node(s):";
    for (std::size_t k = 0; k < bad.size() && k < 8; ++k)
        os << " (" << bad[k].first << "," << bad[k].second << ")";
    throw convexity_error(os.str());
}

} // namespace

MeshField legendre_dual(const LatticeField& f, par::Exec mode) {
    // discrete convexity check wherever the full 9-point block exists
    std::vector<std::pair<int, int>> bad;
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            if (!(f.has(i, j) && f.has(i - 1, j) && f.has(i + 1, j) && f.has(i, j - 1) &&
                  f.has(i, j + 1) && f.has(i - 1, j - 1) && f.has(i + 1, j - 1) &&
                  f.has(i - 1, j + 1) && f.has(i + 1, j + 1)))
                continue;
            const double s2 = f.step * f.step;
            const double fxx =
                (f.value[f.idx(i + 1, j)] - 2.0 * f.value[f.idx(i, j)] +
                 f.value[f.idx(i - 1, j)]) / s2;
            const double fyy =
                (f.value[f.idx(i, j + 1)] - 2.0 * f.value[f.idx(i, j)] +
                 f.value[f.idx(i, j - 1)]) / s2;
            const double fxy =
                (f.value[f.idx(i + 1, j + 1)] - f.value[f.idx(i - 1, j + 1)] -
                 f.value[f.idx(i + 1, j - 1)] + f.value[f.idx(i - 1, j - 1)]) /
                (4.0 * s2);
            if (!(fxx > 0.0 && fxx * fyy - fxy * fxy > 0.0)) bad.push_back({i, j});
        }
    if (!bad.empty()) throw_nonconvex(bad);

    MeshField out;
    out.nx = f.nx;
    out.ny = f.ny;
    out.point.assign(std::size_t(f.nx) * f.ny, Vec2{});
    out.value.assign(std::size_t(f.nx) * f.ny, 0.0);
    out.mask.assign(std::size_t(f.nx) * f.ny, 0);

    par::for_index(f.ny, [&](std::int64_t j) {
        for (int i = 0; i < f.nx; ++i) {
            if (!(f.has(i, j) && f.has(i - 1, int(j)) && f.has(i + 1, int(j)) &&
                  f.has(i, int(j) - 1) && f.has(i, int(j) + 1)))
                continue;
            const Vec2 g{(f.value[f.idx(i + 1, int(j))] - f.value[f.idx(i - 1, int(j))]) /
                             (2.0 * f.step),
                         (f.value[f.idx(i, int(j) + 1)] - f.value[f.idx(i, int(j) - 1)]) /
                             (2.0 * f.step)};
            const Vec2 p = f.point(i, int(j));
            out.point[out.idx(i, int(j))] = g;
            out.value[out.idx(i, int(j))] = p.dot(g) - f.value[f.idx(i, int(j))];
            out.mask[out.idx(i, int(j))] = 1;
        }
    }, mode);
    return out;
}

MeshField legendre_dual(const MeshField& f, par::Exec mode) {
    std::vector<std::pair<int, int>> bad;
    MeshField out;
    out.nx = f.nx;
    out.ny = f.ny;
    out.point.assign(std::size_t(f.nx) * f.ny, Vec2{});
    out.value.assign(std::size_t(f.nx) * f.ny, 0.0);
    out.mask.assign(std::size_t(f.nx) * f.ny, 0);

    // Jacobian check first (serial; also collects offenders deterministically)
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            if (!(f.has(i, j) && f.has(i - 1, j) && f.has(i + 1, j) && f.has(i, j - 1) &&
                  f.has(i, j + 1)))
                continue;
            const Vec2 de = (f.point[f.idx(i + 1, j)] - f.point[f.idx(i - 1, j)]) * 0.5;
            const Vec2 dn = (f.point[f.idx(i, j + 1)] - f.point[f.idx(i, j - 1)]) * 0.5;
            if (!(de.x * dn.y - de.y * dn.x > 0.0)) bad.push_back({i, j});
        }
    if (!bad.empty()) throw_nonconvex(bad);

    par::for_index(f.ny, [&](std::int64_t jj) {
        const int j = int(jj);
        for (int i = 0; i < f.nx; ++i) {
            if (!(f.has(i, j) && f.has(i - 1, j) && f.has(i + 1, j) && f.has(i, j - 1) &&
                  f.has(i, j + 1)))
                continue;
            const Vec2 de = (f.point[f.idx(i + 1, j)] - f.point[f.idx(i - 1, j)]) * 0.5;
            const Vec2 dn = (f.point[f.idx(i, j + 1)] - f.point[f.idx(i, j - 1)]) * 0.5;
            const Vec2 gi{(f.value[f.idx(i + 1, j)] - f.value[f.idx(i - 1, j)]) * 0.5,
                          (f.value[f.idx(i, j + 1)] - f.value[f.idx(i, j - 1)]) * 0.5};
            // solve A^T g = gi with A = [de dn] columns = d(point)/d(index)
            const double det = de.x * dn.y - de.y * dn.x;
            const Vec2 g{(gi.x * dn.y - gi.y * de.y) / det,
                         (-gi.x * dn.x + gi.y * de.x) / det};
            const Vec2 p = f.point[f.idx(i, j)];
            out.point[out.idx(i, j)] = g;
            out.value[out.idx(i, j)] = p.dot(g) - f.value[f.idx(i, j)];
            out.mask[out.idx(i, j)] = 1;
        }
    }, mode);
    return out;
}

} // namespace asl

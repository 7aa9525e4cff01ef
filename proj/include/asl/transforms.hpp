#pragma once

#include <cstdint>
#include <vector>

#include "asl/fields.hpp"
#include "asl/parallel.hpp"

namespace asl {

/// Gradient map of a convex potential: forward is p -> grad f(p), the inverse
/// is a damped Newton solve. The Jacobian of the forward map is Hess f.
struct GradientMap {
    const Field2* source = nullptr;
    Vec2 inverse_seed; // Newton start, typically the polygon centroid

    Vec2 forward(Vec2 p) const { return source->gradient(p); }
    Vec2 inverse(Vec2 target, double tol = 1e-13, int max_iter = 50) const;
};

/// u = h_x, v = h_y
inline Vec2 moment_map(const Field2& h, Vec2 xy) { return h.gradient(xy); }

/// (s, t) = (H_u, H_v); the point must lie in the closure of the polygon.
Vec2 gradient_map_H(const Field2& H, const Polytope& box, Vec2 uv);

/// Interior critical point of a potential (where its gradient vanishes).
Vec2 critical_point(const Field2& f, Vec2 seed, double tol = 1e-13);

/// max-norm of Hess(psi)(s,t) * Hess(H)(u,v) - Id at (s,t) = grad H(u,v).
double hessian_inverse_gap(const Field2& H, const Field2& psi_st, Vec2 uv);

/// psi = -(2/3)^(2/3) (-phi)^(3/2) and its exact inverse.
double psi_from_phi(double phi);
double phi_from_psi(double psi);

/// The closed-form dual potential psi_j pulled over Omega_j through the
/// inverse gradient map of H_j; analytic derivatives by the chain rule.
class PsiComposite final : public Field2 {
public:
    explicit PsiComposite(int j);
    Vec2 invert(Vec2 st) const; // (u, v) with grad H = (s, t)
    double value(Vec2 st) const override;
    Vec2 gradient(Vec2 st) const override;
    Sym2 hessian(Vec2 st) const override;
    std::string label() const override;
    int domain() const { return j_; }

private:
    int j_;
    const Poly2& H_;
    const Poly2& psi_;
    GradientMap map_;
};

/// phi = -((3/2)^(2/3) (-psi))^(2/3) of a negative field psi.
class PhiOfPsiField final : public Field2 {
public:
    explicit PhiOfPsiField(const Field2& psi) : psi_(psi) {}
    double value(Vec2 p) const override;
    Vec2 gradient(Vec2 p) const override;
    Sym2 hessian(Vec2 p) const override;
    std::string label() const override { return "phi(" + psi_.label() + ")"; }

private:
    const Field2& psi_;
};

/// psi = -(2/3)^(2/3) (-phi)^(3/2) of a negative field phi.
class PsiOfPhiField final : public Field2 {
public:
    explicit PsiOfPhiField(const Field2& phi) : phi_(phi) {}
    double value(Vec2 p) const override;
    Vec2 gradient(Vec2 p) const override;
    Sym2 hessian(Vec2 p) const override;
    std::string label() const override { return "psi(" + phi_.label() + ")"; }

private:
    const Field2& phi_;
};

struct RecoverResult {
    double x, y, h;
};

/// Recovers the plane coordinates and the Kaehler potential from H by line
/// integration from `base` (assigned (x, y) = (0, 0)) to `target` along the
/// straight segment, plus h = -ln(H - u H_u - v H_v) at the target.
RecoverResult recover_h_from_H(const Field2& H, const Polytope& box, Vec2 target,
                               Vec2 base, double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Grid Legendre transform

/// Scalar samples on a regular lattice with a mask (1 = node carries data).
struct LatticeField {
    Vec2 origin;
    double step = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> value;  // row-major, j * nx + i
    std::vector<std::uint8_t> mask;

    std::size_t idx(int i, int j) const { return std::size_t(j) * nx + i; }
    bool has(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && mask[idx(i, j)] != 0;
    }
    Vec2 point(int i, int j) const {
        return {origin.x + step * i, origin.y + step * j};
    }
};

/// Scalar samples on a logically rectangular curvilinear mesh (the image of
/// a lattice under a discrete gradient map).
struct MeshField {
    int nx = 0, ny = 0;
    std::vector<Vec2> point;
    std::vector<double> value;
    std::vector<std::uint8_t> mask;

    std::size_t idx(int i, int j) const { return std::size_t(j) * nx + i; }
    bool has(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && mask[idx(i, j)] != 0;
    }
};

/// Samples an analytic field on an N-cell lattice over the polygon closure.
LatticeField sample_on_polytope(const Field2& f, const Polytope& box, int N);

/// Discrete Legendre transform of a convex lattice field: each node with a
/// full gradient stencil maps to (grad f, p . grad f - f). Rejects
/// non-convex input (discrete Hessian test) listing the offending nodes.
MeshField legendre_dual(const LatticeField& f, par::Exec mode = par::Exec::parallel);

/// Same transform applied to a mesh field (gradients through the mesh
/// Jacobian); used for the dual-of-dual round trip.
MeshField legendre_dual(const MeshField& f, par::Exec mode = par::Exec::parallel);

} // namespace asl

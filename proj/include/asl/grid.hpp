#pragma once

#include <span>
#include <vector>

#include "asl/geometry.hpp"

namespace asl {

// Leg order around a node. E/W, N/S, NE/SW, NW/SE form the four stencil
// lines; the diagonal pairs carry the mixed derivative.
enum LegDir : int {
    LEG_E = 0,
    LEG_W,
    LEG_N,
    LEG_S,
    LEG_NE,
    LEG_SW,
    LEG_NW,
    LEG_SE
};

struct GridLeg {
    int neighbor = -1; // interior node index; -1 means the leg ends on the boundary
    double h = 0.0;    // physical length of the leg
    double theta = 1.0;
};

/// First/second derivative weights along one stencil line through a node.
/// Up to four points (centre, both sides, one extra inward node when a side
/// is cut, which restores second-order consistency at the boundary).
struct LineOp {
    int n = 0;
    int col[4] = {-1, -1, -1, -1}; // interior node index; -1 = boundary value 0
    double w1[4] = {0, 0, 0, 0};
    double w2[4] = {0, 0, 0, 0};

    double d1(std::span<const double> f) const {
        double a = 0.0;
        for (int k = 0; k < n; ++k) a += w1[k] * (col[k] >= 0 ? f[std::size_t(col[k])] : 0.0);
        return a;
    }
    double d2(std::span<const double> f) const {
        double a = 0.0;
        for (int k = 0; k < n; ++k) a += w2[k] * (col[k] >= 0 ? f[std::size_t(col[k])] : 0.0);
        return a;
    }
};

struct GridNode {
    int ix = 0, iy = 0;
    Vec2 p;
    double bdist = 0.0; // distance to the boundary
    GridLeg leg[8];
    LineOp line[4]; // EW, NS, NE-SW, NW-SE
};

/// Boundary node: intersection of a grid line with the domain boundary.
/// Carries the Dirichlet value 0 of the dual potential.
struct BoundaryNode {
    Vec2 p;
    int piece = 0;
};

/// Uniform Cartesian grid over the domain bounding box with interior nodes
/// classified by containment and cut legs bisected onto the boundary
/// (Shortley-Weller treatment near the curved boundary).
class Grid {
public:
    Grid(const Domain& dom, int N);

    const Domain& domain() const { return *dom_; }
    int cells() const { return N_; }
    double step() const { return step_; }
    int nx() const { return nx_; }
    Vec2 origin() const { return origin_; }
    const std::vector<GridNode>& nodes() const { return nodes_; }
    const std::vector<BoundaryNode>& boundary_nodes() const { return bnodes_; }
    int node_at(int ix, int iy) const {
        if (ix < 0 || iy < 0 || ix >= nx_ || iy >= nx_) return -1;
        return index_[std::size_t(iy) * nx_ + ix];
    }

private:
    const Domain* dom_;
    int N_;
    int nx_;
    double step_;
    Vec2 origin_;
    std::vector<int> index_;
    std::vector<GridNode> nodes_;
    std::vector<BoundaryNode> bnodes_;
};

/// Finite-difference data of a nodal field at one interior node.
struct NodeDerivs {
    double v = 0, s = 0, t = 0, ss = 0, st = 0, tt = 0;
};

NodeDerivs node_derivs(const Grid& g, std::span<const double> f, int node);

} // namespace asl

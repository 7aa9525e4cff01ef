#include "asl/grid.hpp"

#include <cmath>
#include <limits>

namespace asl {

namespace {

// offsets in leg order E, W, N, S, NE, SW, NW, SE
constexpr int kOff[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                            {1, 1},  {-1, -1}, {-1, 1}, {1, -1}};

// derivative weights on arbitrary collinear offsets (Vandermonde solve)
void derivative_weights(const double* xs, int n, int order, double* w) {
    long double A[4][5];
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            long double p = 1.0L;
            for (int q = 0; q < k; ++q) p *= xs[i];
            A[k][i] = p;
        }
        A[k][n] = (k == order) ? (order == 2 ? 2.0L : 1.0L) : 0.0L;
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs((double)A[r][c]) > std::abs((double)A[piv][c])) piv = r;
        for (int q = 0; q <= n; ++q) std::swap(A[c][q], A[piv][q]);
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const long double m = A[r][c] / A[c][c];
            for (int q = c; q <= n; ++q) A[r][q] -= m * A[c][q];
        }
    }
    for (int i = 0; i < n; ++i) w[i] = double(A[i][n] / A[i][i]);
}

} // namespace

Grid::Grid(const Domain& dom, int N) : dom_(&dom), N_(N) {
    if (N < 16) throw parameter_error("Grid: resolution must be at least 16");
    const auto bb = dom.bounding_box();
    const double w = bb[1].x - bb[0].x, h = bb[1].y - bb[0].y;
    if (std::abs(w - h) > 1e-12 * std::max(w, h))
        throw geometry_error("Grid: bounding box must be square");
    step_ = w / N;
    origin_ = bb[0];
    nx_ = N + 1;

    const double snap = 1e-6 * step_;
    index_.assign(std::size_t(nx_) * nx_, -1);
    auto coord = [&](int ix, int iy) -> Vec2 {
        return {origin_.x + step_ * ix, origin_.y + step_ * iy};
    };
    for (int iy = 0; iy < nx_; ++iy)
        for (int ix = 0; ix < nx_; ++ix)
            if (dom.min_rho(coord(ix, iy)) > snap) {
                index_[std::size_t(iy) * nx_ + ix] = int(nodes_.size());
                GridNode n;
                n.ix = ix;
                n.iy = iy;
                n.p = coord(ix, iy);
                nodes_.push_back(n);
            }
    if (nodes_.empty()) throw geometry_error("Grid: empty interior");

    // legs: neighbour when interior, otherwise bisect the cut onto the boundary
    for (std::size_t ni = 0; ni < nodes_.size(); ++ni) {
        GridNode& n = nodes_[ni];
        n.bdist = dom.boundary_distance(n.p);
        for (int d = 0; d < 8; ++d) {
            const int jx = n.ix + kOff[d][0], jy = n.iy + kOff[d][1];
            const double full =
                (d < 4) ? step_ : step_ * std::sqrt(2.0);
            const int nb = node_at(jx, jy);
            if (nb >= 0) {
                n.leg[d] = {nb, full, 1.0};
                continue;
            }
            // the neighbour position is outside (or snapped): the segment
            // crosses the boundary exactly once
            const Vec2 q{origin_.x + step_ * jx, origin_.y + step_ * jy};
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const Vec2 pm{n.p.x + mid * (q.x - n.p.x), n.p.y + mid * (q.y - n.p.y)};
                (dom_->min_rho(pm) > 0.0 ? lo : hi) = mid;
            }
            // the exported cut is the exact bisection point; the stencil
            // length is floored so the 1/theta weights cannot amplify
            // rounding noise above the Newton tolerance
            const Vec2 cut{n.p.x + hi * (q.x - n.p.x), n.p.y + hi * (q.y - n.p.y)};
            const double theta = std::max(hi, 1e-4);
            n.leg[d] = {-1, theta * full, theta};
            // active piece at the cut: the rho of smallest magnitude
            int piece = 1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 1; i <= int(dom.pieces().size()); ++i) {
                const double v = std::abs(dom.piece(i).value(cut));
                if (v < best) {
                    best = v;
                    piece = i;
                }
            }
            bnodes_.push_back({cut, piece});
        }

        // derivative lines: EW, NS and the two diagonals; a cut side is
        // compensated by one extra inward node so the one-sided second
        // difference stays second-order consistent. Near piece junctions the
        // dual potential is only C^{1,1/2}, so wide stencils lose accuracy
        // there; pocket nodes keep the compact 3-point form.
        const bool pocket = dom.corner_distance(n.p) < 3.0 * step_;
        for (int ln = 0; ln < 4; ++ln) {
            const int dp = 2 * ln, dm = 2 * ln + 1;
            const GridLeg &P = n.leg[dp], &M = n.leg[dm];
            LineOp op;
            double xs[4] = {0.0, P.h, -M.h, 0.0};
            op.col[0] = int(ni);
            op.col[1] = P.neighbor;
            op.col[2] = M.neighbor;
            op.n = 3;
            const bool pcut = P.neighbor < 0, mcut = M.neighbor < 0;
            if (pcut != mcut && !pocket) {
                // extend one step past the full side
                const int sgn = pcut ? -1 : +1; // direction of the full side
                const int dd = pcut ? dm : dp;
                const int ext = node_at(n.ix + 2 * kOff[dd][0], n.iy + 2 * kOff[dd][1]);
                if (ext >= 0) {
                    const double full = (dd < 4) ? step_ : step_ * std::sqrt(2.0);
                    xs[3] = sgn * 2.0 * full;
                    op.col[3] = ext;
                    op.n = 4;
                }
            }
            derivative_weights(xs, op.n, 1, op.w1);
            derivative_weights(xs, op.n, 2, op.w2);
            n.line[ln] = op;
        }
    }
}

NodeDerivs node_derivs(const Grid& g, std::span<const double> f, int node) {
    const GridNode& n = g.nodes()[std::size_t(node)];
    NodeDerivs out;
    out.v = f[std::size_t(node)];
    out.s = n.line[0].d1(f);
    out.ss = n.line[0].d2(f);
    out.t = n.line[1].d1(f);
    out.tt = n.line[1].d2(f);
    out.st = 0.5 * (n.line[2].d2(f) - n.line[3].d2(f));
    return out;
}

} // namespace asl

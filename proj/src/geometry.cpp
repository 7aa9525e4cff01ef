#include "asl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asl {

namespace {

const Rational r0(0), r1(1);

std::vector<QuadraticPiece> omega_pieces(int j) {
    using R = Rational;
    const R h32(-3, 2), half(1, 2);
    std::vector<QuadraticPiece> ps;
    switch (j) {
    case 1:
        // rho_11 = 5/8 - 3/2 (s-t)^2 - 1/2 (s+t)
        ps.emplace_back(h32, R(3), h32, -half, -half, R(5, 8), 1, 1);
        // rho_21 = s - 3/2 (t + 1/6)^2 + 2/3
        ps.emplace_back(r0, r0, h32, r1, -half, R(5, 8), 2, 1);
        // rho_31 = t - 3/2 (s + 1/6)^2 + 2/3
        ps.emplace_back(h32, r0, r0, -half, r1, R(5, 8), 3, 1);
        break;
    case 2:
        // rho_12 = -t - 3/2 s^2 + 1/2
        ps.emplace_back(h32, r0, r0, r0, R(-1), half, 1, 2);
        // rho_22 = -s - 3/2 t^2 + 1/2
        ps.emplace_back(r0, r0, h32, R(-1), r0, half, 2, 2);
        // rho_32 = t - 3/2 s^2 + 1/2
        ps.emplace_back(h32, r0, r0, r0, r1, half, 3, 2);
        // rho_42 = s - 3/2 t^2 + 1/2
        ps.emplace_back(r0, r0, h32, r1, r0, half, 4, 2);
        break;
    case 3: {
        const R g(7, 24);
        // rho_13 = -t - 3/2 (s - t + 1/6)^2 + 1/3
        ps.emplace_back(h32, R(3), h32, -half, -half, g, 1, 3);
        // rho_23 = -s - 3/2 (t - 1/6)^2 + 1/3
        ps.emplace_back(r0, r0, h32, R(-1), half, g, 2, 3);
        // rho_33 = t - 3/2 (s + 1/6)^2 + 1/3
        ps.emplace_back(h32, r0, r0, -half, r1, g, 3, 3);
        // rho_43 = t - 3/2 (-s + t + 1/6)^2 + 1/3
        ps.emplace_back(h32, R(3), h32, half, half, g, 4, 3);
        // rho_53 = s - 3/2 (t + 1/6)^2 + 1/3
        ps.emplace_back(r0, r0, h32, r1, -half, g, 5, 3);
        // rho_63 = -t - 3/2 (s - 1/6)^2 + 1/3
        ps.emplace_back(h32, r0, r0, half, R(-1), g, 6, 3);
        break;
    }
    default:
        throw index_error("omega: domain index must be 1, 2 or 3");
    }
    return ps;
}

std::array<Vec2, 2> omega_bbox(int j) {
    switch (j) {
    case 1: return {Vec2{-2.0 / 3.0, -2.0 / 3.0}, Vec2{2.0 / 3.0, 2.0 / 3.0}};
    case 2: return {Vec2{-0.5, -0.5}, Vec2{0.5, 0.5}};
    case 3: return {Vec2{-1.0 / 3.0, -1.0 / 3.0}, Vec2{1.0 / 3.0, 1.0 / 3.0}};
    default: throw index_error("omega: domain index must be 1, 2 or 3");
    }
}

} // namespace

Domain::Domain(int id, std::vector<QuadraticPiece> pieces, std::array<Vec2, 2> bbox)
    : id_(id), pieces_(std::move(pieces)), bbox_(bbox) {
    const auto& tr = dense_trace();
    // consecutive trace entries at the same arclength mark piece junctions
    for (std::size_t k = 1; k < tr.size(); ++k)
        if (tr[k].piece != tr[k - 1].piece && tr[k].arclen == tr[k - 1].arclen)
            corners_.push_back(tr[k].p);
    // the trace start can itself be a junction
    const Vec2 p0 = tr.front().p;
    int zeros = 0;
    for (const auto& q : pieces_)
        if (std::abs(q.value(p0)) < 1e-9) ++zeros;
    bool known = false;
    for (const Vec2 c : corners_)
        if ((c - p0).norm() < 1e-9) known = true;
    if (zeros >= 2 && !known) corners_.push_back(p0);
}

double Domain::corner_distance(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2 c : corners_) d = std::min(d, (p - c).norm());
    return d;
}

const Domain& Domain::omega(int j) {
    static const Domain d1(1, omega_pieces(1), omega_bbox(1));
    static const Domain d2(2, omega_pieces(2), omega_bbox(2));
    static const Domain d3(3, omega_pieces(3), omega_bbox(3));
    switch (j) {
    case 1: return d1;
    case 2: return d2;
    case 3: return d3;
    default: throw index_error("omega: domain index must be 1, 2 or 3");
    }
}

Domain Domain::disk(Rational radius) {
    // rho = (r^2 - s^2 - t^2)/2, a single concave piece
    const Rational half(1, 2);
    std::vector<QuadraticPiece> ps;
    ps.emplace_back(-half, Rational(0), -half, Rational(0), Rational(0),
                    radius * radius * half, 1, 0);
    const double r = radius.to_double();
    return Domain(0, std::move(ps), {Vec2{-r, -r}, Vec2{r, r}});
}

const QuadraticPiece& Domain::piece(int i) const {
    if (i < 1 || i > int(pieces_.size()))
        throw index_error("piece index " + std::to_string(i) + " out of range for domain " +
                          std::to_string(id_));
    return pieces_[size_t(i - 1)];
}

double Domain::diameter() const {
    return (bbox_[1] - bbox_[0]).norm();
}

bool Domain::contains(Vec2 p) const {
    for (const auto& q : pieces_)
        if (!(q.value(p) > 0.0)) return false;
    return true;
}

double Domain::min_rho(Vec2 p) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& q : pieces_) m = std::min(m, q.value(p));
    return m;
}

Vec2 Domain::project_to_piece(Vec2 p, int piece_index) const {
    const QuadraticPiece& q = piece(piece_index);
    Vec2 x = p;
    for (int it = 0; it < 100; ++it) {
        const double v = q.value(x);
        if (std::abs(v) < 1e-15) return x;
        const Vec2 g = q.gradient(x);
        const double g2 = g.dot(g);
        if (g2 < 1e-30) {
            // critical point of the quadratic (disk centre): step off it
            x = x + Vec2{1e-8 * (1.0 + diameter()), 2e-8 * (1.0 + diameter())};
            continue;
        }
        x = x - g * (v / g2);
    }
    if (std::abs(q.value(x)) > 1e-9)
        throw geometry_error("project_to_piece: no convergence onto piece " +
                             std::to_string(piece_index) + " of domain " +
                             std::to_string(id_));
    return x;
}

double Domain::distance_to_piece(Vec2 p, int piece_index) const {
    return (project_to_piece(p, piece_index) - p).norm();
}

int Domain::nearest_piece(Vec2 p) const {
    int best = 1;
    double bestd = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= int(pieces_.size()); ++i) {
        const double d = distance_to_piece(p, i);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    return best;
}

double Domain::boundary_distance(Vec2 p) const {
    double bestd = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= int(pieces_.size()); ++i)
        bestd = std::min(bestd, distance_to_piece(p, i));
    return bestd;
}

RhoEval Domain::stitched_rho(Vec2 p, double collar_width) const {
    if (collar_width < 0.0) collar_width = default_collar_width();
    int best = 1;
    double bestd = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= int(pieces_.size()); ++i) {
        const double d = distance_to_piece(p, i);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    if (bestd > collar_width)
        throw collar_error("stitched_rho: point at distance " + std::to_string(bestd) +
                           " is outside the collar of width " + std::to_string(collar_width));
    const QuadraticPiece& q = piece(best);
    return {q.value(p), q.gradient(p), best};
}

double Domain::boundary_curvature(Vec2 p) const {
    const int i = nearest_piece(p);
    const QuadraticPiece& q = piece(i);
    const Vec2 g = q.gradient(p);
    const Sym2 h = q.hessian();
    const double gn = g.norm();
    if (gn < 1e-12)
        throw degenerate_boundary_error("boundary_curvature: vanishing gradient");
    const double num = g.y * g.y * h.xx - 2.0 * g.x * g.y * h.xy + g.x * g.x * h.yy;
    return -num / (gn * gn * gn);
}

namespace {

// counterclockwise unit tangent of the level set, interior on the left
Vec2 ccw_tangent(const QuadraticPiece& q, Vec2 p) {
    const Vec2 n_out = -q.gradient(p).normalized();
    return n_out.rot90();
}

} // namespace

const std::vector<Domain::TracePoint>& Domain::dense_trace() const {
    if (!trace_.empty()) return trace_;

    // starting point: boundary hit of the ray from the origin along +s
    const double diam = diameter();
    double lo = 0.0, hi = diam;
    while (min_rho({hi, 0.0}) > 0.0) {
        hi *= 2.0;
        if (hi > 16.0 * diam) throw geometry_error("dense_trace: unbounded ray");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_rho({mid, 0.0}) > 0.0 ? lo : hi) = mid;
    }
    Vec2 p0{hi, 0.0};

    auto active_at = [&](Vec2 p) {
        int best = 1;
        double bestv = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= int(pieces_.size()); ++i) {
            const double v = std::abs(piece(i).value(p));
            if (v < bestv) {
                bestv = v;
                best = i;
            }
        }
        return best;
    };
    int act = active_at(p0);
    p0 = project_to_piece(p0, act);

    // value of the nearest competing piece; negative means we walked past a corner
    auto competitor = [&](Vec2 p, int skip, int* which) {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= int(pieces_.size()); ++i) {
            if (i == skip) continue;
            const double v = piece(i).value(p);
            if (v < m) {
                m = v;
                if (which) *which = i;
            }
        }
        return m;
    };

    const double step = diam / 512.0;
    std::vector<TracePoint> pts;
    pts.push_back({p0, act, 0.0});

    Vec2 prev = p0;
    double arclen = 0.0;
    const int max_steps = 8192;
    for (int k = 0; k < max_steps; ++k) {
        Vec2 q = prev + step * ccw_tangent(piece(act), prev);
        q = project_to_piece(q, act);

        int next_piece = act;
        const double m2 = competitor(q, act, &next_piece);
        if (m2 < -1e-13) {
            // crossed a corner: bisect along the arc for the sign change of
            // the neighbouring rho (it vanishes to odd order there)
            const QuadraticPiece& other = piece(next_piece);
            Vec2 corner = prev;
            if (other.value(prev) > 0.0) {
                Vec2 a = prev, b = q;
                for (int it = 0; it < 120 && (b - a).norm() > 1e-15; ++it) {
                    Vec2 mid = project_to_piece({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, act);
                    (other.value(mid) > 0.0 ? a : b) = mid;
                }
                corner = b;
            }
            arclen += (corner - prev).norm();
            pts.push_back({corner, act, arclen}); // closes the old arc
            corner = project_to_piece(corner, next_piece);
            act = next_piece;
            pts.push_back({corner, act, arclen}); // opens the new arc
            prev = corner;
            continue;
        }

        arclen += (q - prev).norm();
        pts.push_back({q, act, arclen});
        prev = q;

        if (arclen > 0.6 * diam && (q - p0).norm() < 1.5 * step) {
            // close the loop
            arclen += (p0 - q).norm();
            pts.push_back({p0, act, arclen});
            trace_ = std::move(pts);
            return trace_;
        }
    }
    throw geometry_error("dense_trace: boundary loop did not close (domain " +
                         std::to_string(id_) + ")");
}

double Domain::boundary_length() const {
    return dense_trace().back().arclen;
}

std::vector<BoundarySample> Domain::boundary_samples(int count) const {
    if (count < int(pieces_.size()))
        throw precondition_error("boundary_samples: count must be >= number of pieces");
    const auto& tr = dense_trace();
    const double L = tr.back().arclen;

    std::vector<BoundarySample> out;
    out.reserve(size_t(count));
    size_t seg = 0;
    for (int m = 0; m < count; ++m) {
        const double target = L * double(m) / double(count);
        while (seg + 1 < tr.size() && tr[seg + 1].arclen < target) ++seg;
        const auto& A = tr[seg];
        const auto& B = tr[seg + 1];
        const double w = (B.arclen > A.arclen)
                             ? (target - A.arclen) / (B.arclen - A.arclen)
                             : 0.0;
        Vec2 p{A.p.x + w * (B.p.x - A.p.x), A.p.y + w * (B.p.y - A.p.y)};
        const int piece_id = B.piece; // segment lies on the arc entered at B
        p = project_to_piece(p, piece_id);
        // land on the closed side: the open domain must not contain the sample
        const double v = piece(piece_id).value(p);
        if (v > 0.0) {
            const Vec2 gq = piece(piece_id).gradient(p);
            p = p - gq * (2.0 * v / gq.dot(gq));
        }
        const Vec2 n = -piece(piece_id).gradient(p).normalized();
        out.push_back({p, piece_id, n});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polytope

Polytope::Polytope(int id, std::vector<std::array<Rational, 2>> vertices,
                   std::vector<HalfPlane> planes)
    : id_(id), vertices_(std::move(vertices)), planes_(std::move(planes)) {}

const Polytope& Polytope::square(int j) {
    using R = Rational;
    static const Polytope p1(
        1,
        {{R(-1), R(-1)}, {R(2), R(-1)}, {R(-1), R(2)}},
        {{R(1), R(1), R(1)}, {R(-1), R(0), R(1)}, {R(0), R(-1), R(1)}});
    static const Polytope p2(
        2,
        {{R(1), R(1)}, {R(-1), R(1)}, {R(-1), R(-1)}, {R(1), R(-1)}},
        {{R(1), R(0), R(1)},
         {R(-1), R(0), R(1)},
         {R(0), R(1), R(1)},
         {R(0), R(-1), R(1)}});
    static const Polytope p3(
        3,
        {{R(1), R(0)}, {R(0), R(1)}, {R(-1), R(1)}, {R(-1), R(0)}, {R(0), R(-1)}, {R(1), R(-1)}},
        {{R(1), R(1), R(1)},
         {R(-1), R(-1), R(1)},
         {R(1), R(0), R(1)},
         {R(-1), R(0), R(1)},
         {R(0), R(1), R(1)},
         {R(0), R(-1), R(1)}});
    switch (j) {
    case 1: return p1;
    case 2: return p2;
    case 3: return p3;
    default: throw index_error("square: polytope index must be 1, 2 or 3");
    }
}

const Polytope& Polytope::soliton() {
    using R = Rational;
    static const Polytope p(
        4,
        {{R(1), R(0)}, {R(0), R(1)}, {R(-1), R(1)}, {R(-1), R(-1)}, {R(1), R(-1)}},
        {{R(1), R(1), R(1)},
         {R(1), R(0), R(1)},
         {R(-1), R(0), R(1)},
         {R(0), R(1), R(1)},
         {R(0), R(-1), R(1)}});
    return p;
}

std::vector<Vec2> Polytope::vertices() const {
    std::vector<Vec2> v;
    v.reserve(vertices_.size());
    for (const auto& w : vertices_)
        v.push_back({w[0].to_double(), w[1].to_double()});
    return v;
}

Vec2 Polytope::centroid() const {
    Vec2 c{0, 0};
    for (const auto& w : vertices_) {
        c.x += w[0].to_double();
        c.y += w[1].to_double();
    }
    return c * (1.0 / double(vertices_.size()));
}

bool Polytope::contains(Vec2 p) const {
    for (const auto& h : planes_)
        if (!(h.eval(p) < 0.0)) return false;
    return true;
}

bool Polytope::contains_closure(Vec2 p, double tol) const {
    for (const auto& h : planes_)
        if (h.eval(p) > tol) return false;
    return true;
}

bool Polytope::on_boundary(Vec2 p, double tol) const {
    if (!contains_closure(p, tol)) return false;
    for (const auto& h : planes_)
        if (std::abs(h.eval(p)) <= tol) return true;
    return false;
}

std::array<Vec2, 2> Polytope::bounding_box() const {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const auto& w : vertices_) {
        const Vec2 v{w[0].to_double(), w[1].to_double()};
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
    return {lo, hi};
}

int parse_domain_token(const std::string& token) {
    if (token == "omega1") return 1;
    if (token == "omega2") return 2;
    if (token == "omega3") return 3;
    throw usage_error("unknown domain token '" + token + "' (expected omega1|omega2|omega3)");
}

int parse_polytope_token(const std::string& token) {
    if (token == "square1") return 1;
    if (token == "square2") return 2;
    if (token == "square3") return 3;
    throw usage_error("unknown polytope token '" + token +
                      "' (expected square1|square2|square3)");
}

} // namespace asl

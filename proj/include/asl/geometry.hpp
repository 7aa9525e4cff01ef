#pragma once

#include <array>
#include <vector>

#include "asl/numeric.hpp"

namespace asl {

/// One defining quadratic q(s,t) = a s^2 + b st + c t^2 + d s + e t + g.
/// The domains are intersections of {q > 0}; every piece is concave
/// (quadratic part negative semidefinite). Coefficients are exact
/// rationals, evaluation runs on cached doubles.
struct QuadraticPiece {
    Rational a, b, c, d, e, g;
    int piece = 0;  // 1-based index i of rho_{ij}
    int domain = 0; // j

    QuadraticPiece(Rational a_, Rational b_, Rational c_, Rational d_, Rational e_,
                   Rational g_, int piece_, int domain_)
        : a(a_), b(b_), c(c_), d(d_), e(e_), g(g_), piece(piece_), domain(domain_),
          ad_(a_.to_double()), bd_(b_.to_double()), cd_(c_.to_double()),
          dd_(d_.to_double()), ed_(e_.to_double()), gd_(g_.to_double()) {}

    double value(Vec2 p) const {
        return ad_ * p.x * p.x + bd_ * p.x * p.y + cd_ * p.y * p.y + dd_ * p.x +
               ed_ * p.y + gd_;
    }
    Vec2 gradient(Vec2 p) const {
        return {2.0 * ad_ * p.x + bd_ * p.y + dd_, bd_ * p.x + 2.0 * cd_ * p.y + ed_};
    }
    Sym2 hessian() const { return {2.0 * ad_, bd_, 2.0 * cd_}; }

    Rational value_exact(Rational s, Rational t) const {
        return a * s * s + b * s * t + c * t * t + d * s + e * t + g;
    }

    /// Quadratic part has eigenvalues <= 0.
    bool concave_quadratic_part() const {
        const Rational tr = a + a + c + c;
        const Rational det = Rational(4) * a * c - b * b;
        return (tr.num() <= 0) && (det.num() >= 0);
    }

private:
    double ad_, bd_, cd_, dd_, ed_, gd_;
};

/// Closed half plane  nu*u + nv*v <= c.
struct HalfPlane {
    Rational nu, nv, c;
    double eval(Vec2 p) const {
        return nu.to_double() * p.x + nv.to_double() * p.y - c.to_double();
    }
};

/// Moment polygon. Vertices are exact rationals, listed counterclockwise.
class Polytope {
public:
    Polytope(int id, std::vector<std::array<Rational, 2>> vertices,
             std::vector<HalfPlane> planes);

    /// The polygons attached to the three built-in domains.
    static const Polytope& square(int j);
    /// The pentagon {|u|<=1, |v|<=1, u+v<=1} of the soliton sector.
    static const Polytope& soliton();

    int id() const { return id_; }
    const std::vector<HalfPlane>& half_planes() const { return planes_; }
    const std::vector<std::array<Rational, 2>>& vertices_exact() const {
        return vertices_;
    }
    std::vector<Vec2> vertices() const;
    Vec2 centroid() const;

    bool contains(Vec2 p) const;                            // open polygon
    bool contains_closure(Vec2 p, double tol = 1e-12) const;
    bool on_boundary(Vec2 p, double tol = 1e-12) const;
    std::array<Vec2, 2> bounding_box() const;

private:
    int id_;
    std::vector<std::array<Rational, 2>> vertices_;
    std::vector<HalfPlane> planes_;
};

struct BoundarySample {
    Vec2 point;
    int piece = 0;
    Vec2 outward_normal;
};

/// Value and gradient of the stitched defining function, together with the
/// piece that realized it.
struct RhoEval {
    double value = 0.0;
    Vec2 gradient;
    int piece = 0;
};

/// A strictly convex bounded planar domain cut out by concave quadratics,
/// Omega = intersection of {rho_i > 0}.
class Domain {
public:
    /// The three built-in domains (j = 1, 2, 3).
    static const Domain& omega(int j);
    /// Disk of given radius, a synthetic domain for solver self-tests.
    static Domain disk(Rational radius = Rational(1));

    int id() const { return id_; }
    const std::vector<QuadraticPiece>& pieces() const { return pieces_; }
    const QuadraticPiece& piece(int i) const; // 1-based
    std::array<Vec2, 2> bounding_box() const { return bbox_; }
    double diameter() const;
    double default_collar_width() const { return 0.1 * diameter(); }

    bool contains(Vec2 p) const;
    /// min_i rho_i; positive inside, negative outside, zero on the boundary.
    double min_rho(Vec2 p) const;

    /// Distance from p to the zero set of one piece (Newton projection).
    double distance_to_piece(Vec2 p, int piece_index) const;
    /// Projection of p onto the zero set of one piece.
    Vec2 project_to_piece(Vec2 p, int piece_index) const;
    /// Index (1-based) of the piece whose zero set is nearest to p;
    /// exact ties resolved toward the lower index.
    int nearest_piece(Vec2 p) const;
    /// Distance to the nearest zero set.
    double boundary_distance(Vec2 p) const;

    /// Stitched defining function: rho and grad rho of the nearest piece.
    /// Only defined in a collar around the boundary.
    RhoEval stitched_rho(Vec2 p, double collar_width = -1.0) const;

    /// Curvature of the boundary at a point of it (positive for these domains).
    double boundary_curvature(Vec2 p) const;

    /// `count` points marched counterclockwise along the boundary at equal
    /// arclength spacing, each with its active piece and outward unit normal.
    std::vector<BoundarySample> boundary_samples(int count) const;

    /// Total boundary length (arclength of the traced loop).
    double boundary_length() const;

    /// Piece-junction points of the boundary (empty for the disk).
    const std::vector<Vec2>& corners() const { return corners_; }
    double corner_distance(Vec2 p) const;

private:
    Domain(int id, std::vector<QuadraticPiece> pieces, std::array<Vec2, 2> bbox);

    struct TracePoint {
        Vec2 p;
        int piece;
        double arclen;
    };
    const std::vector<TracePoint>& dense_trace() const;

    int id_;
    std::vector<QuadraticPiece> pieces_;
    std::array<Vec2, 2> bbox_;
    mutable std::vector<TracePoint> trace_; // built eagerly by the constructor
    std::vector<Vec2> corners_;
};

/// CLI token ("omega1" ...) to domain index.
int parse_domain_token(const std::string& token);
/// CLI token ("square1" ...) to polytope index.
int parse_polytope_token(const std::string& token);

} // namespace asl

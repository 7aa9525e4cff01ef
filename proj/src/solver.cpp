#include "asl/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>

#include "asl/residuals.hpp"
#include "asl/transforms.hpp"

namespace asl {

void SolverConfig::validate() const {
    if (grid_n < 16) throw parameter_error("SolverConfig: grid_n must be >= 16");
    if (!(tol > 0.0)) throw parameter_error("SolverConfig: tol must be positive");
    if (max_iter < 1) throw parameter_error("SolverConfig: max_iter must be >= 1");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct StencilWeights {
    double wss = 0, wst = 0, ws = 0, wtt = 0, wt = 0, wc = 0;
};

constexpr int kSlots = 17; // 4 lines x up-to-4 points + centre

// Writes the linearization row of one node into its fixed triplet slots;
// boundary points carry the Dirichlet zero and drop out.
void emit_row(const Grid& g, int node, const StencilWeights& w,
              std::vector<Triplet>& trip) {
    const GridNode& n = g.nodes()[std::size_t(node)];
    const double wl1[4] = {w.ws, w.wt, 0.0, 0.0};
    const double wl2[4] = {w.wss, w.wtt, 0.5 * w.wst, -0.5 * w.wst};
    const std::size_t base = std::size_t(node) * kSlots;
    int slot = 0;
    double diag = w.wc;
    for (int ln = 0; ln < 4; ++ln) {
        const LineOp& op = n.line[ln];
        for (int k = 0; k < op.n; ++k) {
            const double coef = wl1[ln] * op.w1[k] + wl2[ln] * op.w2[k];
            if (op.col[k] == node)
                diag += coef;
            else if (op.col[k] >= 0)
                trip[base + std::size_t(slot++)] = Triplet(node, op.col[k], coef);
        }
    }
    trip[base + std::size_t(slot++)] = Triplet(node, node, diag);
    while (slot < kSlots) trip[base + std::size_t(slot++)] = Triplet(node, node, 0.0);
}

// ---- dual-potential equation (bordered determinant + 3) -------------------

double psi_residual_at(const Grid& g, std::span<const double> f, int i) {
    const NodeDerivs d = node_derivs(g, f, i);
    return bordered_det(d.v, {d.s, d.t}, {d.ss, d.st, d.tt}) + 3.0;
}

StencilWeights psi_weights_at(const Grid& g, std::span<const double> f, int i) {
    const NodeDerivs d = node_derivs(g, f, i);
    const double m11 = d.ss, m12 = d.st, m13 = d.s;
    const double m22 = d.tt, m23 = d.t, m33 = 3.0 * d.v;
    StencilWeights w;
    w.wss = m22 * m33 - m23 * m23;
    w.wst = 2.0 * (m13 * m23 - m12 * m33);
    w.ws = 2.0 * (m12 * m23 - m13 * m22);
    w.wtt = m11 * m33 - m13 * m13;
    w.wt = 2.0 * (m12 * m13 - m11 * m23);
    w.wc = 3.0 * (m11 * m22 - m12 * m12);
    return w;
}

// ---- direct phi equation ---------------------------------------------------
// Globalized on log det Hess(phi) - (2+k) log(-phi), polished on the
// algebraic form (-phi)^{2+k} det Hess(phi) - 1: the log form damps well from
// shallow starts but carries an fp noise floor near the sqrt-type boundary,
// the algebraic form is exact to machine precision near the solution.

bool phi_log_residual_at(const Grid& g, std::span<const double> f, int i, double k,
                         double* out) {
    const NodeDerivs d = node_derivs(g, f, i);
    const double det = d.ss * d.tt - d.st * d.st;
    if (!(det > 0.0) || !(d.v < 0.0)) return false;
    *out = std::log(det) + (2.0 + k) * std::log(-d.v);
    return true;
}

StencilWeights phi_log_weights_at(const Grid& g, std::span<const double> f, int i,
                                  double k) {
    const NodeDerivs d = node_derivs(g, f, i);
    const double det = d.ss * d.tt - d.st * d.st;
    StencilWeights w;
    w.wss = d.tt / det;
    w.wtt = d.ss / det;
    w.wst = -2.0 * d.st / det;
    w.wc = (2.0 + k) / d.v;
    return w;
}

bool phi_residual_at(const Grid& g, std::span<const double> f, int i, double k,
                     double* out) {
    const NodeDerivs d = node_derivs(g, f, i);
    if (!(d.v < 0.0)) return false;
    const double det = d.ss * d.tt - d.st * d.st;
    *out = std::pow(-d.v, 2.0 + k) * det - 1.0;
    return true;
}

StencilWeights phi_weights_at(const Grid& g, std::span<const double> f, int i,
                              double k) {
    const NodeDerivs d = node_derivs(g, f, i);
    const double det = d.ss * d.tt - d.st * d.st;
    const double P = std::pow(-d.v, 2.0 + k);
    StencilWeights w;
    w.wss = P * d.tt;
    w.wtt = P * d.ss;
    w.wst = -2.0 * P * d.st;
    w.wc = -(2.0 + k) * std::pow(-d.v, 1.0 + k) * det;
    return w;
}

// ---- shared Newton machinery ----------------------------------------------

struct NewtonOut {
    std::vector<double> x;
    std::vector<double> trace;
    int iterations = 0;
    double residual_inf = 0.0;
};

NewtonOut newton_solve(
    const Grid& g, std::vector<double> x0, const SolverConfig& cfg,
    const std::function<bool(std::span<const double>, std::span<double>)>& residual,
    const std::function<void(std::span<const double>, std::vector<Triplet>&)>& jacobian) {
    const int n = int(g.nodes().size());
    std::vector<double> x = std::move(x0);
    std::vector<double> G(x.size()), G2(x.size()), x2(x.size());
    std::vector<Triplet> trip(x.size() * kSlots);
    std::vector<double> trace;

    if (!residual(x, G))
        throw solver_error("newton: initial guess is outside the admissible set", {});
    double rn = inf_norm(G);
    trace.push_back(rn);

    Eigen::SparseLU<SpMat> lu;
    std::vector<double> rowscale(x.size());
    int it = 0;
    for (; it < cfg.max_iter && rn >= cfg.tol; ++it) {
        jacobian(x, trip);
        // row equilibration keeps the cut-cell rows from dominating the pivots
        std::fill(rowscale.begin(), rowscale.end(), 0.0);
        for (const Triplet& t : trip)
            rowscale[std::size_t(t.row())] =
                std::max(rowscale[std::size_t(t.row())], std::abs(t.value()));
        for (double& s : rowscale)
            if (s == 0.0) s = 1.0;
        std::vector<Triplet> scaled(trip.size());
        for (std::size_t k = 0; k < trip.size(); ++k)
            scaled[k] = Triplet(trip[k].row(), trip[k].col(),
                                trip[k].value() / rowscale[std::size_t(trip[k].row())]);
        SpMat J(n, n);
        J.setFromTriplets(scaled.begin(), scaled.end());
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw solver_error("newton: sparse factorization failed", trace);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) rhs(i) = -G[std::size_t(i)] / rowscale[std::size_t(i)];
        Eigen::VectorXd d = lu.solve(rhs);
        d += lu.solve(Eigen::VectorXd(rhs - J * d)); // one refinement step

        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= cfg.damping_floor) {
            for (int i = 0; i < n; ++i)
                x2[std::size_t(i)] = x[std::size_t(i)] + lambda * d(i);
            if (residual(x2, G2)) {
                const double rn2 = inf_norm(G2);
                if (rn2 < rn) {
                    x.swap(x2);
                    G.swap(G2);
                    rn = rn2;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw solver_error("newton: damping exhausted at residual " +
                                   std::to_string(rn),
                               trace);
        trace.push_back(rn);
    }
    if (rn >= cfg.tol)
        throw solver_error("newton: no convergence within max_iter (residual " +
                               std::to_string(rn) + ")",
                           trace);
    return {std::move(x), std::move(trace), it, rn};
}

// ---- initial guesses -------------------------------------------------------

// Solves the Poisson problem laplace(w) = 1, w = 0 on the boundary, and
// scales it to the requested depth. Convex and boundary compatible.
std::vector<double> poisson_init(const Grid& g, double depth) {
    const int n = int(g.nodes().size());
    std::vector<Triplet> trip;
    trip.reserve(std::size_t(n) * 9);
    for (int i = 0; i < n; ++i) {
        const GridNode& nd = g.nodes()[std::size_t(i)];
        double diag = 0.0;
        for (int ln = 0; ln < 2; ++ln) {
            const LineOp& op = nd.line[ln];
            for (int k = 0; k < op.n; ++k) {
                if (op.col[k] == i)
                    diag += op.w2[k];
                else if (op.col[k] >= 0)
                    trip.emplace_back(i, op.col[k], op.w2[k]);
            }
        }
        trip.emplace_back(i, i, diag);
    }
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw solver_error("poisson_init: factorization failed", {});
    const Eigen::VectorXd w = lu.solve(Eigen::VectorXd::Ones(n));
    double wmin = 0.0;
    for (int i = 0; i < n; ++i) wmin = std::min(wmin, w(i));
    if (!(wmin < 0.0)) throw solver_error("poisson_init: unexpected sign", {});
    const double scale = depth / (-wmin);
    std::vector<double> out(g.nodes().size());
    for (int i = 0; i < n; ++i) out[std::size_t(i)] = scale * w(i);
    return out;
}

std::vector<double> paraboloid_init(const Grid& g, double depth) {
    const auto bb = g.domain().bounding_box();
    const Vec2 center = (bb[0] + bb[1]) * 0.5;
    double r2max = 0.0;
    for (const auto& nd : g.nodes())
        r2max = std::max(r2max, (nd.p - center).dot(nd.p - center));
    const double R2 = 1.04 * r2max + 1e-12;
    const double c = depth / R2;
    std::vector<double> out(g.nodes().size());
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
        const Vec2 d = g.nodes()[i].p - center;
        out[i] = c * (d.dot(d) - R2);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

void assemble_residual(const Grid& g, std::span<const double> psi,
                       std::span<double> out, par::Exec mode) {
    par::for_index(std::int64_t(g.nodes().size()),
                   [&](std::int64_t i) { out[std::size_t(i)] = psi_residual_at(g, psi, int(i)); },
                   mode);
}

void assemble_residual_serial(const Grid& g, std::span<const double> psi,
                              std::span<double> out) {
    for (std::size_t i = 0; i < g.nodes().size(); ++i)
        out[i] = psi_residual_at(g, psi, int(i));
}

bool discrete_convexity(const Grid& g, std::span<const double> psi) {
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
        const NodeDerivs d = node_derivs(g, psi, int(i));
        if (!(d.ss > 0.0 && d.ss * d.tt - d.st * d.st > 0.0)) return false;
    }
    return true;
}

SolveReport solve_psi(const Domain& dom, const SolverConfig& cfg, par::Exec mode) {
    cfg.validate();
    auto grid = std::make_shared<Grid>(dom, cfg.grid_n);
    const Grid& g = *grid;

    std::vector<double> x0 = (cfg.init == SolverConfig::Init::poisson)
                                 ? poisson_init(g, cfg.init_depth)
                                 : paraboloid_init(g, cfg.init_depth);

    auto residual = [&g, mode](std::span<const double> x, std::span<double> out) {
        assemble_residual(g, x, out, mode);
        return true;
    };
    auto jacobian = [&g, mode](std::span<const double> x, std::vector<Triplet>& trip) {
        par::for_index(std::int64_t(g.nodes().size()),
                       [&](std::int64_t i) {
                           emit_row(g, int(i), psi_weights_at(g, x, int(i)), trip);
                       },
                       mode);
    };

    NewtonOut nw;
    try {
        nw = newton_solve(g, std::move(x0), cfg, residual, jacobian);
    } catch (const solver_error&) {
        throw;
    }

    for (double v : nw.x)
        if (!(v < 0.0))
            throw convexity_error("solve_psi: converged field is not negative");
    if (!discrete_convexity(g, nw.x))
        throw convexity_error("solve_psi: converged field lost discrete convexity");

    SolveReport rep;
    rep.domain_id = dom.id();
    rep.grid_n = cfg.grid_n;
    rep.k = 0.5;
    rep.iterations = nw.iterations;
    rep.residual_inf = nw.residual_inf;
    rep.trace = std::move(nw.trace);
    rep.grid = grid;
    rep.value = std::move(nw.x);
    rep.min_value = *std::min_element(rep.value.begin(), rep.value.end());
    return rep;
}

namespace {

double eq11_deep_residual(const Grid& g, std::span<const double> phi, double k,
                          int collar_cells) {
    const double cut = collar_cells * g.step();
    double m = 0.0;
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
        if (g.nodes()[i].bdist <= cut) continue;
        const NodeDerivs d = node_derivs(g, phi, int(i));
        if (!(d.v < 0.0)) continue;
        const double r =
            std::pow(-d.v, 2.0 + k) * (d.ss * d.tt - d.st * d.st) - 1.0;
        m = std::max(m, std::abs(r));
    }
    return m;
}

} // namespace

SolveReport solve_phi(const Domain& dom, double k, const SolverConfig& cfg,
                      par::Exec mode) {
    if (!(k > 0.0)) throw parameter_error("solve_phi: k must be positive");
    cfg.validate();

    if (std::abs(k - 0.5) < 1e-12) {
        SolveReport rep = solve_psi(dom, cfg, mode);
        for (double& v : rep.value) v = phi_from_psi(v);
        rep.k = k;
        rep.min_value = *std::min_element(rep.value.begin(), rep.value.end());
        rep.residual_eq11_deep =
            eq11_deep_residual(*rep.grid, rep.value, k, cfg.collar_cells);
        return rep;
    }

    auto grid = std::make_shared<Grid>(dom, cfg.grid_n);
    const Grid& g = *grid;
    std::vector<double> x0 = (cfg.init == SolverConfig::Init::paraboloid)
                                 ? paraboloid_init(g, cfg.init_depth)
                                 : poisson_init(g, cfg.init_depth);

    auto log_residual = [&g, k](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < g.nodes().size(); ++i)
            if (!phi_log_residual_at(g, x, int(i), k, &out[i])) return false;
        return true;
    };
    auto log_jacobian = [&g, k, mode](std::span<const double> x, std::vector<Triplet>& trip) {
        par::for_index(std::int64_t(g.nodes().size()),
                       [&](std::int64_t i) {
                           emit_row(g, int(i), phi_log_weights_at(g, x, int(i), k), trip);
                       },
                       mode);
    };
    auto residual = [&g, k](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < g.nodes().size(); ++i)
            if (!phi_residual_at(g, x, int(i), k, &out[i])) return false;
        return true;
    };
    auto jacobian = [&g, k, mode](std::span<const double> x, std::vector<Triplet>& trip) {
        par::for_index(std::int64_t(g.nodes().size()),
                       [&](std::int64_t i) {
                           emit_row(g, int(i), phi_weights_at(g, x, int(i), k), trip);
                       },
                       mode);
    };

    SolverConfig coarse = cfg;
    coarse.tol = std::max(1e-6, cfg.tol);
    NewtonOut ph1 = newton_solve(g, std::move(x0), coarse, log_residual, log_jacobian);
    NewtonOut nw = newton_solve(g, std::move(ph1.x), cfg, residual, jacobian);
    nw.iterations += ph1.iterations;
    nw.trace.insert(nw.trace.begin(), ph1.trace.begin(), ph1.trace.end());

    SolveReport rep;
    rep.domain_id = dom.id();
    rep.grid_n = cfg.grid_n;
    rep.k = k;
    rep.iterations = nw.iterations;
    rep.residual_inf = nw.residual_inf;
    rep.trace = std::move(nw.trace);
    rep.grid = grid;
    rep.value = std::move(nw.x);
    rep.min_value = *std::min_element(rep.value.begin(), rep.value.end());
    rep.residual_eq11_deep = eq11_deep_residual(g, rep.value, k, cfg.collar_cells);
    return rep;
}

ResidualStats residual_report(const Grid& g, std::span<const double> psi,
                              par::Exec mode) {
    const std::size_t n = g.nodes().size();
    std::vector<double> r(n);
    assemble_residual(g, psi, r, mode);
    ResidualStats st;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(r[i]);
        sum2 += a * a;
        if (a > st.inf) {
            st.inf = a;
            st.argmax = g.nodes()[i].p;
            st.node = int(i);
        }
    }
    st.l2 = std::sqrt(sum2);
    return st;
}

double oracle_error_inf(const SolveReport& rep, const Field2& exact, par::Exec mode) {
    const Grid& g = *rep.grid;
    std::vector<double> err(g.nodes().size());
    par::for_index(std::int64_t(g.nodes().size()),
                   [&](std::int64_t i) {
                       err[std::size_t(i)] = std::abs(rep.value[std::size_t(i)] -
                                                      exact.value(g.nodes()[std::size_t(i)].p));
                   },
                   mode);
    return inf_norm(err);
}

} // namespace asl

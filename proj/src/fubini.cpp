#include "asl/fubini.hpp"

#include <cmath>

namespace asl {

namespace {

// least squares through modified Gram-Schmidt on scaled columns
struct LsqResult {
    std::vector<double> coef;
    double cond = 0.0;
};

LsqResult lsq_fit(const std::vector<std::vector<double>>& cols,
                  const std::vector<double>& y) {
    const std::size_t m = y.size(), c = cols.size();
    std::vector<double> scale(c);
    std::vector<std::vector<double>> Q(c, std::vector<double>(m));
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (double v : cols[j]) s = std::max(s, std::abs(v));
        if (s == 0.0) throw fit_error("lsq_fit: zero column");
        scale[j] = s;
        for (std::size_t i = 0; i < m; ++i) Q[j][i] = cols[j][i] / s;
    }
    std::vector<std::vector<double>> R(c, std::vector<double>(c, 0.0));
    double rmin = 1e300, rmax = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                double dot = 0.0;
                for (std::size_t r = 0; r < m; ++r) dot += Q[i][r] * Q[j][r];
                R[i][j] += dot;
                for (std::size_t r = 0; r < m; ++r) Q[j][r] -= dot * Q[i][r];
            }
        double nrm = 0.0;
        for (double v : Q[j]) nrm += v * v;
        nrm = std::sqrt(nrm);
        R[j][j] = nrm;
        rmin = std::min(rmin, nrm);
        rmax = std::max(rmax, nrm);
        if (nrm < 1e-14)
            throw fit_error("lsq_fit: rank-deficient design (condition > 1e14)");
        for (std::size_t r = 0; r < m; ++r) Q[j][r] /= nrm;
    }
    const double cond = rmax / rmin;
    if (cond > 1e12)
        throw fit_error("lsq_fit: ill-conditioned design, condition " +
                        std::to_string(cond));
    std::vector<double> qy(c, 0.0);
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t r = 0; r < m; ++r) qy[j] += Q[j][r] * y[r];
    std::vector<double> a(c, 0.0);
    for (std::size_t jj = c; jj-- > 0;) {
        double s = qy[jj];
        for (std::size_t i = jj + 1; i < c; ++i) s -= R[jj][i] * a[i];
        a[jj] = s / R[jj][jj];
    }
    for (std::size_t j = 0; j < c; ++j) a[j] /= scale[j];
    return {std::move(a), cond};
}

} // namespace

ExpansionCoefficients expand_along_normal(const ScalarField& psi, const Domain& dom,
                                          Vec2 bp, std::span<const double> depths,
                                          int degree) {
    if (degree < 2) throw parameter_error("expand_along_normal: degree must be >= 2");
    if (int(depths.size()) < degree + 1)
        throw parameter_error("expand_along_normal: need more probe depths than degree");
    for (std::size_t k = 1; k < depths.size(); ++k)
        if (!(depths[k] > depths[k - 1]))
            throw parameter_error("expand_along_normal: depths must be increasing");

    const RhoEval at_bp = dom.stitched_rho(bp);
    const Vec2 n_in = at_bp.gradient.normalized(); // rho grows inward

    const std::size_t m = depths.size();
    std::vector<double> rho(m), val(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Vec2 p = bp + depths[k] * n_in;
        if (!dom.contains(p))
            throw probe_error("expand_along_normal: probe point left the domain");
        rho[k] = dom.stitched_rho(p).value;
        val[k] = psi(p);
    }

    std::vector<std::vector<double>> cols;
    cols.assign(std::size_t(degree), std::vector<double>(m));
    for (int d = 0; d < degree; ++d)
        for (std::size_t k = 0; k < m; ++k) cols[std::size_t(d)][k] = std::pow(rho[k], d + 1);
    const LsqResult fit = lsq_fit(cols, val);

    ExpansionCoefficients out;
    out.point = bp;
    out.piece = at_bp.piece;
    out.a1 = fit.coef[0];
    out.a2 = fit.coef[1];
    out.f = -fit.coef[1];
    out.cond = fit.cond;
    out.degree = degree;
    out.depths.assign(depths.begin(), depths.end());
    double res = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double model = 0.0;
        for (int d = degree; d-- > 0;) model = (model + fit.coef[std::size_t(d)]) * rho[k];
        res = std::max(res, std::abs(model - val[k]));
    }
    out.fit_residual = res;
    return out;
}

double fubini_pick_closed_form(int j, Vec2 p, double tol) {
    if (j == 1) {
        if (std::abs(Domain::omega(1).piece(2).value(p)) > tol)
            throw unsupported_edge_error(
                "fubini_pick_closed_form: closed form is known on the rho_21 edge only");
        return -1.0 / (-4.0 * p.x + 2.0 * p.y - 1.0);
    }
    if (j == 2) {
        if (std::abs(Domain::omega(2).piece(2).value(p)) > tol)
            throw unsupported_edge_error(
                "fubini_pick_closed_form: closed form is known on the rho_22 edge only");
        return -1.0 / (6.0 * p.x - 2.0);
    }
    throw index_error("fubini_pick_closed_form: closed form exists for j = 1, 2 only");
}

std::vector<ProfileEntry> profile_boundary(const ScalarField& psi, const Domain& dom,
                                           int count, std::span<const double> depths,
                                           int degree) {
    const auto samples = dom.boundary_samples(count);
    std::vector<ProfileEntry> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            out[i].coef = expand_along_normal(psi, dom, samples[i].point, depths, degree);
            out[i].ok = true;
        } catch (const error& e) {
            out[i].ok = false;
            out[i].error = e.what();
            out[i].coef.point = samples[i].point;
            out[i].coef.piece = samples[i].piece;
        }
    }
    return out;
}

std::vector<double> default_analytic_depths(const Domain& dom) {
    // shallow window: the cubic model aliases against the quartic tail of
    // the expansion, so the probes stay within ~4e-4 of the diameter
    const double diam = dom.diameter();
    std::vector<double> d;
    for (int k = 1; k <= 8; ++k) d.push_back(diam * 5e-5 * k);
    return d;
}

std::vector<double> default_grid_depths(double step) {
    return {2.0 * step, 3.0 * step, 4.0 * step, 5.0 * step, 6.0 * step};
}

double grid_interpolate(const Grid& g, std::span<const double> values, Vec2 p) {
    const double fx = (p.x - g.origin().x) / g.step();
    const double fy = (p.y - g.origin().y) / g.step();
    const int ix = int(std::lround(fx)), iy = int(std::lround(fy));
    double w[2][3];
    const double xi = fx - ix, eta = fy - iy;
    w[0][0] = 0.5 * xi * (xi - 1.0);
    w[0][1] = 1.0 - xi * xi;
    w[0][2] = 0.5 * xi * (xi + 1.0);
    w[1][0] = 0.5 * eta * (eta - 1.0);
    w[1][1] = 1.0 - eta * eta;
    w[1][2] = 0.5 * eta * (eta + 1.0);
    double acc = 0.0;
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
            const int node = g.node_at(ix + di, iy + dj);
            if (node < 0)
                throw probe_error("grid_interpolate: incomplete 3x3 patch at (" +
                                  std::to_string(ix + di) + "," + std::to_string(iy + dj) +
                                  ")");
            acc += w[0][di + 1] * w[1][dj + 1] * values[std::size_t(node)];
        }
    return acc;
}

} // namespace asl

#include "asl/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace asl {

namespace {

// coordinates that appear repeatedly are lattice lines; stray values are
// boundary cuts
std::vector<double> frequent_coords(std::vector<double> xs, double eps) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j + 1 < xs.size() && xs[j + 1] - xs[i] <= eps) ++j;
        if (j - i + 1 >= 3) out.push_back(xs[i + (j - i) / 2]);
        i = j + 1;
    }
    return out;
}

} // namespace

FieldCsv read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("read_field_csv: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    std::vector<Vec2> pts;
    std::vector<double> vals;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line.find("s") == std::string::npos || line.find("t") == std::string::npos)
                throw parse_error("read_field_csv: line 1: expected an s,t,value header");
            continue;
        }
        double s, t, v;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &t, &v) != 3)
            throw parse_error("read_field_csv: line " + std::to_string(lineno) +
                              ": expected three comma-separated numbers");
        pts.push_back({s, t});
        vals.push_back(v);
    }
    if (pts.size() < 4) throw parse_error("read_field_csv: not enough samples");

    FieldCsv f;
    f.bbox = {Vec2{std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()},
              Vec2{-std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()}};
    for (const Vec2 p : pts) {
        f.bbox[0].x = std::min(f.bbox[0].x, p.x);
        f.bbox[0].y = std::min(f.bbox[0].y, p.y);
        f.bbox[1].x = std::max(f.bbox[1].x, p.x);
        f.bbox[1].y = std::max(f.bbox[1].y, p.y);
    }
    const double span = std::max(f.bbox[1].x - f.bbox[0].x, f.bbox[1].y - f.bbox[0].y);
    const double eps = 1e-9 * span;

    std::vector<double> xs, ys;
    for (const Vec2 p : pts) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const std::vector<double> gx = frequent_coords(std::move(xs), eps);
    const std::vector<double> gy = frequent_coords(std::move(ys), eps);
    if (gx.size() < 2 || gy.size() < 2)
        throw parse_error("read_field_csv: input is not grid-structured");
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < gx.size(); ++i) step = std::min(step, gx[i] - gx[i - 1]);
    for (std::size_t i = 1; i < gy.size(); ++i) step = std::min(step, gy[i] - gy[i - 1]);

    f.step = step;
    f.origin = {gx.front(), gy.front()};
    f.nx = int(std::lround((gx.back() - gx.front()) / step)) + 1;
    f.ny = int(std::lround((gy.back() - gy.front()) / step)) + 1;
    if (f.nx <= 1 || f.ny <= 1 || std::size_t(f.nx) * std::size_t(f.ny) > 100000000u)
        throw parse_error("read_field_csv: implausible lattice shape");
    f.value.assign(std::size_t(f.nx) * f.ny, 0.0);
    f.mask.assign(std::size_t(f.nx) * f.ny, 0);

    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double fx = (pts[k].x - f.origin.x) / step;
        const double fy = (pts[k].y - f.origin.y) / step;
        const int i = int(std::lround(fx)), j = int(std::lround(fy));
        const bool on = std::abs(fx - i) < 1e-6 && std::abs(fy - j) < 1e-6 && i >= 0 &&
                        j >= 0 && i < f.nx && j < f.ny;
        if (on) {
            f.value[f.idx(i, j)] = vals[k];
            f.mask[f.idx(i, j)] = 1;
        } else {
            f.offgrid.push_back(pts[k]);
        }
    }
    return f;
}

namespace {

struct SegKey {
    long long a, b;
    bool operator<(const SegKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

SegKey key_of(Vec2 p, Vec2 origin, double quant) {
    return {llround((p.x - origin.x) / quant), llround((p.y - origin.y) / quant)};
}

} // namespace

std::vector<std::vector<Vec2>> contour_lines(const FieldCsv& f, double level) {
    // marching squares over cells with four valid corners
    std::vector<std::pair<Vec2, Vec2>> segs;
    auto cross = [&](Vec2 a, double va, Vec2 b, double vb) -> Vec2 {
        const double w = (level - va) / (vb - va);
        return {a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)};
    };
    for (int j = 0; j + 1 < f.ny; ++j)
        for (int i = 0; i + 1 < f.nx; ++i) {
            if (!(f.has(i, j) && f.has(i + 1, j) && f.has(i, j + 1) && f.has(i + 1, j + 1)))
                continue;
            const Vec2 p00{f.origin.x + f.step * i, f.origin.y + f.step * j};
            const Vec2 p10{p00.x + f.step, p00.y};
            const Vec2 p01{p00.x, p00.y + f.step};
            const Vec2 p11{p00.x + f.step, p00.y + f.step};
            const double v00 = f.value[f.idx(i, j)] - level;
            const double v10 = f.value[f.idx(i + 1, j)] - level;
            const double v01 = f.value[f.idx(i, j + 1)] - level;
            const double v11 = f.value[f.idx(i + 1, j + 1)] - level;
            const int c = (v00 > 0 ? 1 : 0) | (v10 > 0 ? 2 : 0) | (v01 > 0 ? 4 : 0) |
                          (v11 > 0 ? 8 : 0);
            if (c == 0 || c == 15) continue;
            const Vec2 bottom = cross(p00, v00 + level, p10, v10 + level);
            const Vec2 top = cross(p01, v01 + level, p11, v11 + level);
            const Vec2 left = cross(p00, v00 + level, p01, v01 + level);
            const Vec2 right = cross(p10, v10 + level, p11, v11 + level);
            switch (c) {
            case 1: case 14: segs.push_back({left, bottom}); break;
            case 2: case 13: segs.push_back({bottom, right}); break;
            case 3: case 12: segs.push_back({left, right}); break;
            case 4: case 11: segs.push_back({left, top}); break;
            case 5: case 10: segs.push_back({top, bottom}); break;
            case 6: case 9:
                segs.push_back({left, top});
                segs.push_back({bottom, right});
                break;
            case 7: case 8: segs.push_back({top, right}); break;
            }
        }

    // chain segments by quantized endpoints
    const double quant = 1e-7 * f.step;
    std::multimap<SegKey, std::size_t> ends;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        ends.insert({key_of(segs[k].first, f.origin, quant), k});
        ends.insert({key_of(segs[k].second, f.origin, quant), k});
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<Vec2>> lines;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        std::vector<Vec2> chain{segs[k].first, segs[k].second};
        for (int dir = 0; dir < 2; ++dir) {
            for (;;) {
                const Vec2 tip = dir == 0 ? chain.back() : chain.front();
                const SegKey kk = key_of(tip, f.origin, quant);
                std::size_t next = segs.size();
                for (auto [it, end] = ends.equal_range(kk); it != end; ++it)
                    if (!used[it->second]) {
                        next = it->second;
                        break;
                    }
                if (next == segs.size()) break;
                used[next] = true;
                const SegKey ka = key_of(segs[next].first, f.origin, quant);
                const Vec2 add = (ka.a == kk.a && ka.b == kk.b) ? segs[next].second
                                                                : segs[next].first;
                if (dir == 0)
                    chain.push_back(add);
                else
                    chain.insert(chain.begin(), add);
            }
        }
        lines.push_back(std::move(chain));
    }
    return lines;
}

namespace {

const char* kPalette[6] = {"#1f6fb4", "#c23b22", "#2c8f4b",
                           "#8458b3", "#d97c1a", "#3aa6a6"};

void svg_polyline(std::ostream& os, const std::vector<Vec2>& pts, const char* color,
                  double ox, double oy, double scale, double height) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    char buf[64];
    for (const Vec2 p : pts) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f ", (p.x - ox) * scale,
                      height - (p.y - oy) * scale);
        os << buf;
    }
    os << "\"/>\n";
}

} // namespace

std::string contour_svg(const FieldCsv& f, const std::vector<double>& levels,
                        const Domain* dom, std::vector<double>* missing) {
    const double w = f.bbox[1].x - f.bbox[0].x, h = f.bbox[1].y - f.bbox[0].y;
    const double pad = 0.06 * std::max(w, h);
    const double scale = 560.0 / (std::max(w, h) + 2.0 * pad);
    const double ox = f.bbox[0].x - pad, oy = f.bbox[0].y - pad;
    const double width = (w + 2 * pad) * scale, height = (h + 2 * pad) * scale;

    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    os << buf;
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // boundary polyline
    std::vector<Vec2> boundary;
    if (dom != nullptr) {
        for (const auto& b : dom->boundary_samples(512)) boundary.push_back(b.point);
    } else if (f.offgrid.size() >= 3) {
        boundary = f.offgrid;
        Vec2 c{0, 0};
        for (const Vec2 p : boundary) c = c + p;
        c = c * (1.0 / double(boundary.size()));
        std::sort(boundary.begin(), boundary.end(), [&](Vec2 a, Vec2 b) {
            return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
        });
    }
    if (!boundary.empty()) {
        boundary.push_back(boundary.front());
        svg_polyline(os, boundary, "#000000", ox, oy, scale, height);
    }

    for (std::size_t li = 0; li < levels.size(); ++li) {
        const auto lines = contour_lines(f, levels[li]);
        if (lines.empty()) {
            if (missing) missing->push_back(levels[li]);
            continue;
        }
        std::snprintf(buf, sizeof buf, "<!-- level %.6g -->\n", levels[li]);
        os << buf;
        for (const auto& ln : lines)
            svg_polyline(os, ln, kPalette[li % 6], ox, oy, scale, height);
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace asl

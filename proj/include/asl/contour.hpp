#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "asl/geometry.hpp"

namespace asl {

/// A field read back from an `s,t,value` CSV. Rows that sit on a common
/// lattice are gridded; the rest (boundary cuts) are kept aside.
struct FieldCsv {
    Vec2 origin;
    double step = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> value;
    std::vector<std::uint8_t> mask;
    std::vector<Vec2> offgrid;
    std::array<Vec2, 2> bbox{};

    std::size_t idx(int i, int j) const { return std::size_t(j) * nx + i; }
    bool has(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && mask[idx(i, j)] != 0;
    }
};

FieldCsv read_field_csv(const std::string& path);

/// Marching squares on the masked lattice; returns chained polylines.
std::vector<std::vector<Vec2>> contour_lines(const FieldCsv& f, double level);

/// Deterministic SVG with the domain boundary and one polyline set per
/// level. Levels that produce no segments are returned in `missing`.
std::string contour_svg(const FieldCsv& f, const std::vector<double>& levels,
                        const Domain* dom, std::vector<double>* missing);

} // namespace asl

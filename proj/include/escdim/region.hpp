#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

#include "escdim/extended_complex.hpp"

namespace escdim {

// Axis-aligned rectangle with an optional membership predicate, sampled on a
// uniform grid of `resolution` cells per axis. All quadratures over a region
// use the midpoint rule on this grid.
struct PlanarRegion {
    double x_min, x_max, y_min, y_max;
    std::function<bool(cd)> member;  // empty -> the whole rectangle
    int resolution;

    PlanarRegion(double x0, double x1, double y0, double y1,
                 std::function<bool(cd)> pred = {}, int res = 1024)
        : x_min(x0), x_max(x1), y_min(y0), y_max(y1),
          member(std::move(pred)), resolution(res) {
        if (!(x_min < x_max) || !(y_min < y_max))
            throw std::invalid_argument("degenerate rectangle");
        if (resolution < 2)
            throw std::invalid_argument("resolution must be >= 2 per axis");
    }

    double cell_w() const { return (x_max - x_min) / resolution; }
    double cell_h() const { return (y_max - y_min) / resolution; }
    cd cell_center(int ix, int iy) const {
        return cd(x_min + (ix + 0.5) * cell_w(), y_min + (iy + 0.5) * cell_h());
    }
    bool contains(cd z) const {
        if (z.real() < x_min || z.real() > x_max) return false;
        if (z.imag() < y_min || z.imag() > y_max) return false;
        return !member || member(z);
    }
};

}  // namespace escdim

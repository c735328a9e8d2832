#include "escdim/sphere.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "escdim/parallel.hpp"

namespace escdim {

namespace {

// Midpoint-rule sum of f over the member cells of `a`. Per-row partial sums
// are reduced in row order, so the result does not depend on the thread count.
double grid_integral(const PlanarRegion& a, const std::function<double(cd)>& f) {
    int n = a.resolution;
    std::vector<double> rows(n, 0.0);
    parallel_rows(n, [&](int iy) {
        double s = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            cd z = a.cell_center(ix, iy);
            if (!a.member || a.member(z)) s += f(z);
        }
        rows[iy] = s;
    });
    double total = 0.0;
    for (int iy = 0; iy < n; ++iy) total += rows[iy];
    return total * a.cell_w() * a.cell_h();
}

double spherical_weight(cd z) {
    double q = 1.0 + std::norm(z);
    return 4.0 / (q * q);
}

double density_on_b_grid(const PlanarRegion& a, const PlanarRegion& b,
                         bool spherical) {
    int n = b.resolution;
    std::vector<double> num_rows(n, 0.0), den_rows(n, 0.0);
    parallel_rows(n, [&](int iy) {
        double num = 0.0, den = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            cd z = b.cell_center(ix, iy);
            if (b.member && !b.member(z)) continue;
            double w = spherical ? spherical_weight(z) : 1.0;
            den += w;
            if (a.contains(z)) num += w;
        }
        num_rows[iy] = num;
        den_rows[iy] = den;
    });
    double num = 0.0, den = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        num += num_rows[iy];
        den += den_rows[iy];
    }
    if (den == 0.0) throw std::invalid_argument("empty denominator region");
    return num / den;  // cell area cancels
}

}  // namespace

double spherical_area(const PlanarRegion& a) {
    return grid_integral(a, spherical_weight);
}

double euclidean_area(const PlanarRegion& a) {
    return grid_integral(a, [](cd) { return 1.0; });
}

double spherical_density(const PlanarRegion& a, const PlanarRegion& b) {
    return density_on_b_grid(a, b, true);
}

double euclidean_density(const PlanarRegion& a, const PlanarRegion& b) {
    return density_on_b_grid(a, b, false);
}

LogArea logarea(const PlanarRegion& a, double cap) {
    // Reject a member cell whose closed rectangle contains the origin: the
    // midpoint rule would silently average across a non-integrable singularity.
    double w = a.cell_w(), h = a.cell_h();
    if (a.x_min <= 0.0 && 0.0 <= a.x_max && a.y_min <= 0.0 && 0.0 <= a.y_max) {
        double fx = -a.x_min / w, fy = -a.y_min / h;
        for (int ix : {static_cast<int>(std::floor(fx)) - 1,
                       static_cast<int>(std::floor(fx))}) {
            for (int iy : {static_cast<int>(std::floor(fy)) - 1,
                           static_cast<int>(std::floor(fy))}) {
                if (ix < 0 || iy < 0 || ix >= a.resolution || iy >= a.resolution)
                    continue;
                double cx_lo = a.x_min + ix * w, cy_lo = a.y_min + iy * h;
                if (cx_lo <= 0.0 && 0.0 <= cx_lo + w && cy_lo <= 0.0 &&
                    0.0 <= cy_lo + h && a.contains(a.cell_center(ix, iy)))
                    throw std::domain_error("singular integrand at origin");
            }
        }
    }
    LogArea out;
    out.value = grid_integral(a, [](cd z) { return 1.0 / std::norm(z); });
    out.divergent = out.value > cap;
    return out;
}

TwbResult twb_finiteness(const PlanarRegion& region,
                         const std::function<double(cd)>& k_field,
                         double band_tol, double cap) {
    int n = region.resolution;
    double corner = std::max({std::hypot(region.x_min, region.y_min),
                              std::hypot(region.x_min, region.y_max),
                              std::hypot(region.x_max, region.y_min),
                              std::hypot(region.x_max, region.y_max)});
    int nbands = std::max(1, static_cast<int>(std::ceil(std::log2(corner))) + 1);
    // band j collects samples with |z| in [2^j, 2^{j+1})
    std::vector<double> band_rows(static_cast<size_t>(n) * nbands, 0.0);
    std::vector<signed char> row_bad(n, 0);
    std::vector<int> row_top(n, -1);
    parallel_rows(n, [&](int iy) {
        double* bands = &band_rows[static_cast<size_t>(iy) * nbands];
        for (int ix = 0; ix < n; ++ix) {
            cd z = region.cell_center(ix, iy);
            double r2 = std::norm(z);
            if (r2 <= 1.0) continue;
            if (region.member && !region.member(z)) continue;
            double k = k_field(z);
            if (k < 1.0) {
                row_bad[iy] = 1;
                continue;
            }
            int j = std::min(nbands - 1,
                             static_cast<int>(std::floor(std::log2(r2) / 2.0)));
            bands[j] += (k - 1.0) / r2;
            if (j > row_top[iy]) row_top[iy] = j;
        }
    });
    for (int iy = 0; iy < n; ++iy)
        if (row_bad[iy]) throw std::domain_error("invalid dilatation");
    double cell = region.cell_w() * region.cell_h();
    std::vector<double> band_total(nbands, 0.0);
    int top = -1;
    for (int iy = 0; iy < n; ++iy) {
        for (int j = 0; j < nbands; ++j)
            band_total[j] += band_rows[static_cast<size_t>(iy) * nbands + j];
        top = std::max(top, row_top[iy]);
    }
    TwbResult out;
    for (int j = 0; j < nbands; ++j) out.value += band_total[j] * cell;
    out.tail_band = top >= 0 ? band_total[top] * cell : 0.0;
    out.finite = out.tail_band < band_tol && out.value <= cap;
    return out;
}

}  // namespace escdim

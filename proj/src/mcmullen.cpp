#include "escdim/mcmullen.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "escdim/parallel.hpp"

namespace escdim {

namespace {

void validate(const NestedCoverSpec& spec) {
    if (spec.log_delta.size() != spec.log_diam.size())
        throw std::invalid_argument("spec sequences differ in length");
    if (spec.log_diam.size() < 2)
        throw std::invalid_argument("need at least two levels");
    for (double ld : spec.log_delta)
        if (!(std::isfinite(ld) && ld <= 0.0))
            throw std::invalid_argument("density weights must lie in (0,1]");
    double prev = 0.0;
    for (double dm : spec.log_diam) {
        if (!(dm < 0.0) || dm >= prev)
            throw std::invalid_argument("diameters not contracting");
        prev = dm;
    }
}

std::string contraction_message(const char* what, double ratio) {
    std::ostringstream os;
    os << "contraction violated: " << what << " = " << ratio << " >= 1";
    return os.str();
}

}  // namespace

BoundSequence mcmullen_bound(const NestedCoverSpec& spec) {
    validate(spec);
    const size_t n = spec.log_diam.size() - 1;
    BoundSequence out;
    out.beta.reserve(n);
    out.raw.reserve(n);
    double sum = -spec.log_delta[0], comp = 0.0;
    for (size_t l = 1; l <= n; ++l) {
        detail::kahan_add(sum, comp, -spec.log_delta[l]);
        double raw = 2.0 - sum / (-spec.log_diam[l - 1]);
        out.raw.push_back(raw);
        out.beta.push_back(std::min(2.0, std::max(0.0, raw)));
    }
    const size_t quarter = (3 * n) / 4;
    out.limit = -std::numeric_limits<double>::infinity();
    for (size_t i = quarter; i < n; ++i) out.limit = std::max(out.limit, out.beta[i]);
    out.last_diff = n >= 2 ? out.beta[n - 1] - out.beta[n - 2] : 0.0;
    return out;
}

NestedCoverSpec paper_cover_spec(double rho, double R, double C2, double C7,
                                 int L) {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    if (!(R > 1.0)) throw std::invalid_argument("R must exceed 1");
    if (!(C2 > 0.0 && C7 > 0.0))
        throw std::invalid_argument("constants must be positive");
    if (L < 2) throw std::invalid_argument("need at least two levels");
    const double step = std::log(C2) - 0.5 * (1.0 + rho) * std::log(R);
    if (!(step < 0.0))
        throw std::invalid_argument(
            contraction_message("C2/R^((1+rho)/2)", std::exp(step)));
    if (!(C7 < R)) throw std::invalid_argument("C7 must be below R");
    NestedCoverSpec spec;
    spec.log_delta.assign(size_t(L), std::log(C7) - std::log(R));
    spec.log_diam.resize(size_t(L));
    for (int l = 1; l <= L; ++l) spec.log_diam[size_t(l - 1)] = l * step;
    return spec;
}

NestedCoverSpec wpexp_cover_spec(double R, double A4, double A5, int L) {
    if (!(R > 1.0)) throw std::invalid_argument("R must exceed 1");
    if (!(A4 > 0.0 && A5 > 0.0))
        throw std::invalid_argument("constants must be positive");
    if (L < 2) throw std::invalid_argument("need at least two levels");
    const double step = std::log(A4) - R - 1.5 * std::log(R);
    if (!(step < 0.0))
        throw std::invalid_argument(
            contraction_message("A4/(e^R R^(3/2))", std::exp(step)));
    if (!(A5 < R * R)) throw std::invalid_argument("A5 must be below R^2");
    NestedCoverSpec spec;
    spec.log_delta.assign(size_t(L), std::log(A5) - 2.0 * std::log(R));
    spec.log_diam.resize(size_t(L));
    for (int l = 1; l <= L; ++l) spec.log_diam[size_t(l - 1)] = l * step;
    return spec;
}

NestedCoverSpec escalating_cover_spec(double rho, double C8, double C9,
                                      int L) {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    if (!(C8 > 0.0 && C9 > 0.0))
        throw std::invalid_argument("constants must be positive");
    if (L < 2) throw std::invalid_argument("need at least two levels");
    // the k-th factor is C8/e^{k(1+rho)/2}; the first is the least contracting
    const double worst = std::log(C8) - 0.5 * (1.0 + rho);
    if (!(worst < 0.0))
        throw std::invalid_argument(
            contraction_message("C8/R_1^((1+rho)/2)", std::exp(worst)));
    if (!(C9 < M_E)) throw std::invalid_argument("C9 must be below R_1 = e");
    NestedCoverSpec spec;
    spec.log_delta.resize(size_t(L));
    spec.log_diam.resize(size_t(L));
    const double lc8 = std::log(C8), lc9 = std::log(C9);
    for (int k = 1; k <= L; ++k) {
        spec.log_delta[size_t(k - 1)] = lc9 - k;
        spec.log_diam[size_t(k - 1)] =
            k * lc8 - 0.25 * (1.0 + rho) * k * (k + 1.0);
    }
    return spec;
}

double dimension_formula(double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    return 2.0 * rho / (1.0 + rho);
}

double order_from_dimension(double d) {
    if (!(d >= 0.0 && d < 2.0))
        throw std::invalid_argument("dimension must lie in [0,2)");
    return d / (2.0 - d);
}

BoxCount box_counting_dimension(const std::vector<cd>& points,
                                const std::vector<double>& scales) {
    if (points.size() < 1000)
        throw std::invalid_argument("need at least 1000 points");
    if (scales.size() < 4)
        throw std::invalid_argument("insufficient scale span");
    for (size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0) || (i > 0 && !(scales[i] < scales[i - 1])))
            throw std::invalid_argument("scales must decrease");
    }
    if (!(scales.front() / scales.back() >=
          std::pow(10.0, 1.5) * (1.0 - 1e-12)))
        throw std::invalid_argument("insufficient scale span");

    double x0 = points[0].real(), y0 = points[0].imag();
    double x1 = x0, y1 = y0;
    for (const cd& p : points) {
        x0 = std::min(x0, p.real());
        y0 = std::min(y0, p.imag());
        x1 = std::max(x1, p.real());
        y1 = std::max(y1, p.imag());
    }

    BoxCount out;
    out.scales = scales;
    std::vector<double> lx, ly;
    for (double s : scales) {
        if ((x1 - x0) / s > 2e9 || (y1 - y0) / s > 2e9)
            throw std::invalid_argument("scale too fine for the bounding box");
        std::unordered_set<unsigned long long> cells;
        cells.reserve(points.size());
        for (const cd& p : points) {
            auto ix = static_cast<unsigned long long>((p.real() - x0) / s);
            auto iy = static_cast<unsigned long long>((p.imag() - y0) / s);
            cells.insert((ix << 32) | iy);
        }
        out.counts.push_back(static_cast<long long>(cells.size()));
        lx.push_back(-std::log(s));
        ly.push_back(std::log(double(cells.size())));
    }

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(lx.size());
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    out.slope = sxy / sxx;
    return out;
}

std::vector<EscapingPoint> escaping_sampler(const ModelFunction& m,
                                            const PlanarRegion& grid,
                                            const EscapeSchedule& schedule,
                                            int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const int res = grid.resolution;
    std::vector<std::vector<EscapingPoint>> rows(static_cast<size_t>(res));
    parallel_rows(res, [&](int iy) {
        std::vector<EscapingPoint>& out = rows[size_t(iy)];
        for (int ix = 0; ix < res; ++ix) {
            cd z0 = grid.cell_center(ix, iy);
            if (!grid.contains(z0)) continue;
            ExtendedComplex cur(z0);
            int absorbed = 0;
            bool keep = true;
            for (int k = 1; k <= depth; ++k) {
                if (!cur.is_inf()) {
                    cur = m.eval(cur.value());
                    if (cur.is_inf()) absorbed = k;
                }
                if (!(cur.mod() > schedule(k))) {
                    keep = false;
                    break;
                }
            }
            if (keep) out.push_back({z0, absorbed == 0 ? depth : absorbed});
        }
    });
    std::vector<EscapingPoint> merged;
    for (const auto& row : rows)
        merged.insert(merged.end(), row.begin(), row.end());
    return merged;
}

}  // namespace escdim

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "escdim/models.hpp"
#include "escdim/region.hpp"
#include "escdim/schedule.hpp"

namespace escdim {

// Nested-cover data (Δ_ℓ, d_ℓ), ℓ = 1..L, stored in logs so that diameters
// like e^{-200·ℓ} stay representable. log_delta holds log Δ_ℓ <= 0 (densities
// in (0,1]); log_diam holds log d_ℓ < 0, strictly decreasing.
struct NestedCoverSpec {
    std::vector<double> log_delta;
    std::vector<double> log_diam;
};

// Per-level lower bounds β_ℓ = 2 - Σ_{j=1}^{ℓ+1} |log Δ_j| / |log d_ℓ|.
// With L levels supplied the sum needs Δ_{ℓ+1}, so β exists for ℓ = 1..L-1.
struct BoundSequence {
    std::vector<double> beta;  // clamped to [0, 2]
    std::vector<double> raw;   // unclamped, for diagnostics
    double limit;              // max of beta over the final quarter of levels
    double last_diff;          // beta_{L-1} - beta_{L-2}; 0 with one entry
};

BoundSequence mcmullen_bound(const NestedCoverSpec& spec);

namespace detail {

inline void kahan_add(double& sum, double& comp, double term) {
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

}  // namespace detail

// O(1)-memory version of mcmullen_bound for level counts far beyond what a
// materialized spec can hold (the 1/ℓ convergence of constant-density covers
// needs ~1e9 levels for single-digit-nanodigit accuracy). The callables are
// queried at 1-based levels and must satisfy the NestedCoverSpec invariants;
// returns only the limit estimate, computed exactly as the array version
// does (compensated prefix sum, max over the final quarter of levels).
template <class FDelta, class FDiam>
double mcmullen_bound_limit(FDelta&& log_delta, FDiam&& log_diam,
                            long long levels) {
    if (levels < 2) throw std::invalid_argument("need at least two levels");
    const long long n = levels - 1;  // number of beta values
    const long long quarter = (3 * n) / 4;
    double first = log_delta(1);
    if (!(std::isfinite(first) && first <= 0.0))
        throw std::invalid_argument("density weights must lie in (0,1]");
    double sum = -first, comp = 0.0;
    double prev_diam = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (long long l = 1; l <= n; ++l) {
        double ld = log_delta(l + 1);
        if (!(std::isfinite(ld) && ld <= 0.0))
            throw std::invalid_argument("density weights must lie in (0,1]");
        detail::kahan_add(sum, comp, -ld);
        double dm = log_diam(l);
        if (!(dm < 0.0) || dm >= prev_diam)
            throw std::invalid_argument("diameters not contracting");
        prev_diam = dm;
        if (l - 1 >= quarter) {
            double beta = std::min(2.0, std::max(0.0, 2.0 - sum / (-dm)));
            best = std::max(best, beta);
        }
    }
    return best;
}

// d_l = (C2/R^{(1+rho)/2})^l, Δ_l = C7/R.
NestedCoverSpec paper_cover_spec(double rho, double R, double C2, double C7,
                                 int L);

// d_l = (A4/(e^R R^{3/2}))^l, Δ_l = A5/R².
NestedCoverSpec wpexp_cover_spec(double R, double A4, double A5, int L);

// Escalating radii R_k = e^k: d_k = Π_{j<=k} C8/R_j^{(1+rho)/2}, Δ_k = C9/R_k.
NestedCoverSpec escalating_cover_spec(double rho, double C8, double C9, int L);

// 2ρ/(1+ρ), the escaping-set dimension of an order-ρ model; strictly
// increasing from (0,∞) onto (0,2).
double dimension_formula(double rho);

// d/(2-d), the exact inverse of dimension_formula on [0,2).
double order_from_dimension(double d);

struct BoxCount {
    double slope;  // log(occupied boxes) vs log(1/scale), least squares
    std::vector<double> scales;
    std::vector<long long> counts;
};

// Axis-aligned box counting, grid anchored at the bounding-box corner.
// Needs >= 1000 points and >= 4 decreasing scales spanning >= 1.5 decades.
BoxCount box_counting_dimension(const std::vector<cd>& points,
                                const std::vector<double>& scales);

struct EscapingPoint {
    cd z;
    int depth;  // step at which the orbit hit ∞, or the full depth if finite
};

// Grid centers whose k-th iterate lies outside D(0, R_k) for every k <=
// depth. ∞ is absorbing, so prepoles pass all finite thresholds. Rows run in
// parallel and are merged in row order; output is deterministic, row-major.
std::vector<EscapingPoint> escaping_sampler(const ModelFunction& m,
                                            const PlanarRegion& grid,
                                            const EscapeSchedule& schedule,
                                            int depth);

}  // namespace escdim

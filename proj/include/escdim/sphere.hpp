#pragma once

#include <functional>

#include "escdim/region.hpp"

namespace escdim {

// Spherical area of the region under the metric density 2/(1+|z|^2), i.e.
// area element 4 dx dy/(1+x^2+y^2)^2 (sphere of radius 1, total area 4*pi).
double spherical_area(const PlanarRegion& a);

// Plain Euclidean area of the region, same grid convention.
double euclidean_area(const PlanarRegion& a);

// dens(A, B) = area(A ∩ B)/area(B), both areas taken on b's grid so the
// ratio of a set in itself is exactly 1. Throws std::invalid_argument
// "empty denominator region" when no grid cell of b is a member.
double spherical_density(const PlanarRegion& a, const PlanarRegion& b);
double euclidean_density(const PlanarRegion& a, const PlanarRegion& b);

struct LogArea {
    double value = 0.0;
    bool divergent = false;  // partial sums exceeded the cap
};

// ∬_A dx dy/(x^2+y^2). The caller must keep the region away from the origin:
// a member cell whose closed rectangle contains 0 throws std::domain_error
// "singular integrand at origin". Partial sums above `cap` set the divergent
// flag (the in-scope divergent integrands grow without bound as the region
// is enlarged, so the cap is a coarse guard, not a convergence test).
LogArea logarea(const PlanarRegion& a, double cap = 1e6);

struct TwbResult {
    double value = 0.0;
    bool finite = true;
    double tail_band = 0.0;  // contribution of the outermost dyadic band
};

// Quadrature of (K-1)/(x^2+y^2) over region ∩ {|z| > 1}. Finiteness of this
// integral is decided by the decay of dyadic band contributions
// |z| ∈ [2^j, 2^{j+1}): a conformal-at-infinity field makes them decay
// geometrically, while K bounded away from 1 on full annuli contributes a
// constant ≈ 2π·log2·inf(K-1) per band. The integral is declared finite when
// the outermost sampled band contributes less than band_tol and the total
// stays below cap. K < 1 at any sample throws std::domain_error
// "invalid dilatation".
TwbResult twb_finiteness(const PlanarRegion& region,
                         const std::function<double(cd)>& k_field,
                         double band_tol = 0.05, double cap = 1e6);

}  // namespace escdim

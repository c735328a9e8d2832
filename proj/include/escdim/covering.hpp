#pragma once

#include <utility>
#include <vector>

#include "escdim/extended_complex.hpp"
#include "escdim/models.hpp"

namespace escdim {

// The escape component around one pole: {|f| > R} near a_j sits between two
// concentric disks whose radii come out of the Koebe estimates. outer/inner
// is exactly 8.
struct CoverComponent {
    cd a;
    double b_abs = 1.0;
    double R = 0.0;
    double inner = 0.0;  // |b|/(4 sqrt R)
    double outer = 0.0;  // 2|b|/sqrt R
};

// An ordered sequence of poles visited by a composed inverse branch,
// together with the derivative constant c1 of the single-branch bound.
struct BranchChain {
    std::vector<PoleDatum> poles;
    double c1 = 0.5;
};

struct Disk {
    cd center;
    double radius = 0.0;
};

// Growth theorem for f univalent on D(z0, r), evaluated at |z - z0| = la*r:
//   la/(1+la)^2 * deriv * r <= |f(z) - f(z0)| <= la/(1-la)^2 * deriv * r.
// Both bounds are attained by the extremal z/(1-z)^2.
std::pair<double, double> koebe_value_bounds(double deriv, double r,
                                             double la);

// Distortion theorem companion: |f'(z)| at |z - z0| = la*r lies in
// [(1-la)/(1+la)^3, (1+la)/(1-la)^3] * deriv. Same extremal.
std::pair<double, double> koebe_derivative_bounds(double deriv, double la);

// One-quarter theorem: f(D(z0, r)) contains D(f(z0), deriv*r/4).
Disk koebe_quarter(cd image_center, double deriv, double r);

// Disk sandwich for the escape component of one pole at level R.
CoverComponent component_bounds(const PoleDatum& p, double R);

// |g'(z)| <= c1 |b_j| / |z|^{3/2} for an inverse branch g of f near the
// pole a_j, valid for |z| >= R. c1 = 1/2 is exact for the pure local model
// f = (b/(z-a))^2, whose inverse is g(w) = a + b/sqrt(w).
double branch_derivative_bound(double b_abs, double z_mod, double c1 = 0.5);

// Diameter bounds for the image of the outermost component under the
// composed branch g_{j1} o ... o g_{j(l-1)}:
//   euclidean = c1^{l-1} (4/sqrt R) |b_1| prod_{k>=2} |b_k|/|a_k|^{3/2}
//   spherical = c1^{l-1} (32/sqrt R) prod_{k>=1} |b_k|/|a_k|^{3/2}
// Any pole with |a_k| < R is out of contract: "chain leaves B(R)".
std::pair<double, double> chain_diameter(const BranchChain& chain, double R);

// 4x the largest finite singular value of the model (critical values of the
// underlying elliptic function plus the asymptotic/branch-point images the
// inner map contributes). Escape radii must stay above this floor for the
// component sandwich to make sense. Kinds without a catalogued singular-value
// set are refused.
double escape_radius_floor(const ModelFunction& m);

}  // namespace escdim

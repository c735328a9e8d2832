#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "escdim/extended_complex.hpp"

namespace escdim {

// Rank-2 lattice Λ = Zω₁ + Zω₂, orientation-normalized at construction so
// Im(ω₂/ω₁) > 0 (ω₂ is negated when needed; collinear generators throw).
// Besides the constructing generators it carries a Lagrange–Gauss reduced
// basis (r1, r2) of the same lattice — the shortest basis, which the
// summation and reduction routines use — and the Eisenstein invariants
// g2 = 60·Σ' w^{-4}, g3 = 140·Σ' w^{-6}, computed once by accelerated shell
// summation (see lattice.cpp).
class Lattice {
public:
    Lattice(cd omega1, cd omega2);

    cd w1() const { return w1_; }
    cd w2() const { return w2_; }
    cd r1() const { return r1_; }
    cd r2() const { return r2_; }
    cd tau() const { return w2_ / w1_; }

    double area() const { return area_; }  // |Im(conj(ω₁)·ω₂)|
    // diameter bound |r1| + |r2| of the fundamental cell of the reduced basis
    double cell_diameter() const { return cell_diameter_; }

    cd G4() const { return G4_; }
    cd G6() const { return G6_; }
    cd g2() const { return g2_; }
    cd g3() const { return g3_; }

private:
    cd w1_, w2_;  // constructing generators, orientation-normalized
    cd r1_, r2_;  // reduced basis, Im(r2/r1) > 0
    double area_ = 0.0;
    double cell_diameter_ = 0.0;
    cd G4_, G6_, g2_, g3_;
};

// z = z0 + λ with λ ∈ Λ and z0 in the centered fundamental cell of the
// reduced basis; |z0| is minimal among the four nearest representatives,
// ties broken towards the smaller |λ|.
std::pair<cd, cd> reduce_to_fundamental(cd z, const Lattice& lat);

// Exhaustive enumeration of {λ ∈ Λ : |λ - center| <= r} via the bounding box
// of the disk in generator coordinates. Deterministic (row-major in the
// integer coordinates of the reduced basis).
std::vector<cd> lattice_points_in_disk(const Lattice& lat, cd center, double r);

// Same enumeration without materializing the points.
long long lattice_point_count_in_disk(const Lattice& lat, cd center, double r);

// Same enumeration again, streaming each point to fn (for censuses that are
// countable but too large to store).
void visit_lattice_points_in_disk(const Lattice& lat, cd center, double r,
                                  const std::function<void(cd)>& fn);

}  // namespace escdim

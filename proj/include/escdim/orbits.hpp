#pragma once

#include <vector>

#include "escdim/models.hpp"
#include "escdim/region.hpp"
#include "escdim/schedule.hpp"

namespace escdim {

// bounded:      never certified outside the schedule once it first dipped in
// prepole:      some iterate landed on ∞ (depth = that step)
// escaping:     |z_k| > R_k for every step through the cap (depth = cap)
// undetermined: exited the schedule early but re-entered a later window
//               (depth = longest intact prefix); never merged with bounded
enum class OrbitClass { bounded, prepole, escaping, undetermined };

struct OrbitRecord {
    cd start;
    std::vector<ExtendedComplex> trajectory;  // z_1, z_2, ..., length <= cap
    OrbitClass cls;
    int depth;
    EscapeSchedule schedule;
};

// Applies eval repeatedly, classifying against the schedule. ∞ is terminal;
// every other orbit runs the full cap so that late re-entries are seen.
OrbitRecord iterate(const ModelFunction& m, cd z, const EscapeSchedule& schedule,
                    int cap = 64);

struct PixelRecord {
    OrbitClass cls;
    int depth;
    double final_modulus;  // |last iterate|; +inf on prepole pixels
};

struct EscapeField {
    PlanarRegion region;  // resolution forced to the render resolution
    int resolution;
    std::vector<PixelRecord> pixels;  // row-major, iy slow index

    const PixelRecord& at(int ix, int iy) const {
        return pixels[size_t(iy) * size_t(resolution) + size_t(ix)];
    }
};

// One orbit per pixel center (midpoint rule, so a 3x refinement revisits
// every coarse center exactly). Region membership predicates are ignored:
// an image has no holes. Rows run in parallel, assembled in row order.
EscapeField render_escape_field(const ModelFunction& m, const PlanarRegion& region,
                                int resolution, const EscapeSchedule& schedule,
                                int cap = 64);

}  // namespace escdim

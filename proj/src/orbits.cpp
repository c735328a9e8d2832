#include "escdim/orbits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "escdim/parallel.hpp"

namespace escdim {

OrbitRecord iterate(const ModelFunction& m, cd z, const EscapeSchedule& schedule,
                    int cap) {
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    OrbitRecord rec;
    rec.start = z;
    rec.schedule = schedule;
    rec.trajectory.reserve(size_t(cap));
    ExtendedComplex cur(z);
    int intact = 0;
    int pole_step = 0;
    bool prefix_alive = true;
    bool reentered = false;
    for (int k = 1; k <= cap; ++k) {
        cur = m.eval(cur.value());
        rec.trajectory.push_back(cur);
        if (cur.is_inf()) {
            pole_step = k;
            break;
        }
        bool outside = cur.mod() > schedule(k);
        if (prefix_alive) {
            if (outside)
                intact = k;
            else
                prefix_alive = false;
        } else if (outside) {
            reentered = true;
        }
    }
    if (pole_step > 0) {
        rec.cls = OrbitClass::prepole;
        rec.depth = pole_step;
    } else if (intact == cap) {
        rec.cls = OrbitClass::escaping;
        rec.depth = cap;
    } else if (reentered) {
        rec.cls = OrbitClass::undetermined;
        rec.depth = intact;
    } else {
        rec.cls = OrbitClass::bounded;
        rec.depth = cap;
    }
    return rec;
}

EscapeField render_escape_field(const ModelFunction& m, const PlanarRegion& region,
                                int resolution, const EscapeSchedule& schedule,
                                int cap) {
    if (resolution < 16)
        throw std::invalid_argument("resolution must be >= 16");
    PlanarRegion stored = region;
    stored.resolution = resolution;
    EscapeField field{stored, resolution, {}};
    field.pixels.resize(size_t(resolution) * size_t(resolution));
    parallel_rows(resolution, [&](int iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            OrbitRecord rec =
                iterate(m, field.region.cell_center(ix, iy), schedule, cap);
            double fm = rec.trajectory.back().mod();
            field.pixels[size_t(iy) * size_t(resolution) + size_t(ix)] = {
                rec.cls, rec.depth, fm};
        }
    });
    return field;
}

}  // namespace escdim

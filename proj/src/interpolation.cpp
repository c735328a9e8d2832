#include "escdim/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace escdim {

namespace {

double strip_height(const InterpolationStack& s) {
    double h = s.a_prime - s.b;
    if (!(h > 0.0)) throw std::invalid_argument("degenerate interpolation stack");
    return h;
}

void require_inside(const InterpolationStack& s, cd z) {
    double y = z.imag();
    if (y < 0.0 || y > strip_height(s))
        throw std::domain_error("outside interpolation strip");
}

// Wirtinger derivatives of L at z. L_x is real; L_y mixes the horizontal
// shear between the two boundary maps with the vertical compression kappa.
struct Partials {
    cd lz, lzb;
};

Partials partials_at(const InterpolationStack& s, cd z) {
    double h = strip_height(s);
    double kappa = (s.a - s.b) / h;
    double x = z.real();
    double t = z.imag() / h;
    double lx = (1.0 - t) * s.dchi1(x) + t * s.dchi2(x);
    cd ly((s.chi2(x) - s.chi1(x)) / h, kappa);
    cd i(0.0, 1.0);
    return {(lx - i * ly) / 2.0, (lx + i * ly) / 2.0};
}

}  // namespace

InterpolationStack identity_stack(double a, double a_prime, double b) {
    InterpolationStack s;
    s.a = a;
    s.a_prime = a_prime;
    s.b = b;
    s.chi1 = s.chi2 = [](double x) { return x; };
    s.dchi1 = s.dchi2 = [](double) { return 1.0; };
    return s;
}

cd interpolation_map(const InterpolationStack& s, cd z) {
    require_inside(s, z);
    double h = strip_height(s);
    double kappa = (s.a - s.b) / h;
    double x = z.real();
    double t = z.imag() / h;
    return cd((1.0 - t) * s.chi1(x) + t * s.chi2(x), kappa * z.imag());
}

double interpolation_jacobian(const InterpolationStack& s, cd z) {
    require_inside(s, z);
    double h = strip_height(s);
    double t = z.imag() / h;
    double x = z.real();
    return (s.a - s.b) / h * ((1.0 - t) * s.dchi1(x) + t * s.dchi2(x));
}

double dilatation(const InterpolationStack& s, cd z) {
    require_inside(s, z);
    Partials p = partials_at(s, z);
    double lz = std::abs(p.lz), lzb = std::abs(p.lzb);
    double jac = (lz - lzb) * (lz + lzb);
    if (!(jac > 0.0)) throw std::domain_error("orientation violation");
    // (lz+lzb)/(lz-lzb) computed through the Jacobian to avoid cancellation
    return (lz + lzb) * (lz + lzb) / jac;
}

double dilatation_supremum(const InterpolationStack& s, int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid must be at least 2x2");
    double h = strip_height(s);
    double sup = 1.0;
    for (int ix = 0; ix < nx; ++ix) {
        double x = double(ix) / nx;
        for (int iy = 0; iy < ny; ++iy) {
            double y = h * double(iy) / (ny - 1);
            sup = std::max(sup, dilatation(s, cd(x, y)));
        }
    }
    return sup;
}

}  // namespace escdim

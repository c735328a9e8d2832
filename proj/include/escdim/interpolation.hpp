#pragma once

// Quasiconformal interpolation between two boundary diffeomorphisms across a
// horizontal strip. Coordinates are normalized so the lower edge of the strip
// sits on the real axis: the map lives on 0 <= Im z <= a' - b and sends that
// strip onto 0 <= Im w <= a - b, matching chi1 below and chi2 above.

#include <complex>
#include <functional>

namespace escdim {

using cd = std::complex<double>;

// Strip parameters a, a', b with b < min(a, a'), plus the boundary
// diffeomorphisms chi1 (lower edge) and chi2 (upper edge) with their
// derivatives. Both chi_i must be strictly increasing and satisfy
// chi_i(x+1) = chi_i(x) + 1; neither property is checked here — the
// dilatation reports an orientation violation if the data is bad.
struct InterpolationStack {
    double a = 1.0;
    double a_prime = 1.0;
    double b = 0.0;
    std::function<double(double)> chi1, chi2;
    std::function<double(double)> dchi1, dchi2;
};

InterpolationStack identity_stack(double a, double a_prime, double b);

// L(x+iy) = (1-t) chi1(x) + t chi2(x) + i ((a-b)/(a'-b)) y with t = y/(a'-b).
// Throws if z lies outside the closed strip.
cd interpolation_map(const InterpolationStack& s, cd z);

// det DL = ((a-b)/(a'-b)) ((1-t) chi1'(x) + t chi2'(x))
double interpolation_jacobian(const InterpolationStack& s, cd z);

// K = (|L_z| + |L_zbar|) / (|L_z| - |L_zbar|); throws "orientation violation"
// when the Jacobian is not positive.
double dilatation(const InterpolationStack& s, cd z);

// sup of K over an nx-by-ny grid: x over one period [0,1), y over the strip.
double dilatation_supremum(const InterpolationStack& s, int nx, int ny);

}  // namespace escdim

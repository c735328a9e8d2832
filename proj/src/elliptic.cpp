#include "escdim/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace escdim {

EllipticFunction::EllipticFunction(Lattice lat, int truncation,
                                   double eps_pole_rel)
    : lat_(std::move(lat)), M_(truncation) {
    if (M_ < 8) throw std::invalid_argument("truncation order must be >= 8");
    if (!(eps_pole_rel > 0.0))
        throw std::invalid_argument("pole threshold must be positive");
    eps_pole_ = eps_pole_rel * lat_.cell_diameter();

    cd r1 = lat_.r1(), r2 = lat_.r2();
    w_.reserve(2 * M_ * (M_ + 1));
    // truncated Eisenstein sums P_{2k}(M), 2k = 4..12, over the same shells
    cd p[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
    auto add = [&](int m, int n) {
        if (!(m > 0 || (m == 0 && n > 0))) return;  // one per ±w pair
        cd w = double(m) * r1 + double(n) * r2;
        w_.push_back(w);
        cd iw2 = 1.0 / (w * w);
        tw2_.push_back(2.0 * iw2);
        cd q = iw2 * iw2;
        for (auto& pk : p) {
            pk += q;
            q *= iw2;
        }
    };
    for (int s = 1; s <= M_; ++s) {
        for (int m = -s; m <= s; ++m) {
            add(m, s);
            add(m, -s);
        }
        for (int n = -s + 1; n <= s - 1; ++n) {
            add(s, n);
            add(-s, n);
        }
    }

    // G8, G10, G12 follow from G4, G6 by the classical recursions.
    cd G4 = lat_.G4(), G6 = lat_.G6();
    cd G8 = (3.0 / 7.0) * G4 * G4;
    cd G10 = (5.0 / 11.0) * G4 * G6;
    cd G12 = (18.0 * G4 * G4 * G4 + 25.0 * G6 * G6) / 143.0;
    const cd G[5] = {G4, G6, G8, G10, G12};
    for (int k = 0; k < 5; ++k) T_[k] = G[k] - 2.0 * p[k];

    // critical values at the half periods of the constructing generators
    const cd half[3] = {0.5 * lat_.w1(), 0.5 * (lat_.w1() + lat_.w2()),
                        0.5 * lat_.w2()};
    for (int k = 0; k < 3; ++k) {
        ExtendedComplex v = wp(half[k], *this);
        if (v.is_inf())
            throw std::runtime_error("critical value evaluated at a pole");
        e_[k] = v.value();
        cd e = e_[k];
        cubic_res_[k] = std::abs(4.0 * e * e * e - lat_.g2() * e - lat_.g3());
    }
}

ExtendedComplex wp(cd z, const EllipticFunction& f) {
    auto [z0, lam] = reduce_to_fundamental(z, f.lattice());
    (void)lam;
    if (std::abs(z0) < f.eps_pole()) return ExtendedComplex::infinity();
    cd s = 1.0 / (z0 * z0);
    const auto& w = f.shell_points();
    const auto& tw2 = f.shell_inv_sq();
    for (size_t i = 0; i < w.size(); ++i) {
        cd d = z0 - w[i], e = z0 + w[i];
        s += 1.0 / (d * d) + 1.0 / (e * e) - tw2[i];
    }
    const auto& T = f.tails();
    cd z2 = z0 * z0;
    s += z2 * (3.0 * T[0] +
               z2 * (5.0 * T[1] +
                     z2 * (7.0 * T[2] + z2 * (9.0 * T[3] + z2 * 11.0 * T[4]))));
    ExtendedComplex out(s);
    if (!out.is_inf() && out.mod() > kOverflowThreshold) return ExtendedComplex::infinity();
    return out;
}

ExtendedComplex wp_prime(cd z, const EllipticFunction& f) {
    auto [z0, lam] = reduce_to_fundamental(z, f.lattice());
    (void)lam;
    if (std::abs(z0) < f.eps_pole()) return ExtendedComplex::infinity();
    cd z03 = z0 * z0 * z0;
    cd s = -2.0 / z03;
    const auto& w = f.shell_points();
    for (size_t i = 0; i < w.size(); ++i) {
        cd d = z0 - w[i], e = z0 + w[i];
        s += -2.0 / (d * d * d) - 2.0 / (e * e * e);
    }
    const auto& T = f.tails();
    cd z2 = z0 * z0;
    s += z0 * (6.0 * T[0] +
               z2 * (20.0 * T[1] +
                     z2 * (42.0 * T[2] + z2 * (72.0 * T[3] + z2 * 110.0 * T[4]))));
    ExtendedComplex out(s);
    if (!out.is_inf() && out.mod() > kOverflowThreshold) return ExtendedComplex::infinity();
    return out;
}

CriticalValues critical_values(const EllipticFunction& f) {
    CriticalValues cv;
    cv.e1 = f.e1();
    cv.e2 = f.e2();
    cv.e3 = f.e3();
    cv.cubic_residual = f.cubic_residuals();
    return cv;
}

}  // namespace escdim

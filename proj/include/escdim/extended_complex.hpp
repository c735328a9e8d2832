#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace escdim {

using cd = std::complex<double>;

// A point of the Riemann sphere: either a finite complex number or the single
// point at infinity. Any non-finite coordinate (overflow, division blow-up)
// collapses to infinity, so a finite value always carries finite coordinates.
class ExtendedComplex {
public:
    ExtendedComplex() = default;
    ExtendedComplex(cd z)
        : v_(z), inf_(!(std::isfinite(z.real()) && std::isfinite(z.imag()))) {
        if (inf_) v_ = cd(0.0, 0.0);
    }
    ExtendedComplex(double x) : ExtendedComplex(cd(x, 0.0)) {}

    static ExtendedComplex infinity() {
        ExtendedComplex e;
        e.inf_ = true;
        return e;
    }

    bool is_inf() const { return inf_; }
    cd value() const { return v_; }  // meaningful only when finite
    double mod() const {
        return inf_ ? std::numeric_limits<double>::infinity() : std::abs(v_);
    }

    friend bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const ExtendedComplex& a, const ExtendedComplex& b) {
        return !(a == b);
    }

private:
    cd v_{0.0, 0.0};
    bool inf_ = false;
};

// 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), extended by continuity to infinity.
// Symmetric, bounded by 2 (antipodal points). The subtraction is done after
// dividing both arguments by the larger hypot factor, so huge finite moduli
// cannot overflow the numerator.
inline double chordal_distance(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf()) return 2.0 / std::hypot(1.0, std::abs(b.value()));
    if (b.is_inf()) return 2.0 / std::hypot(1.0, std::abs(a.value()));
    cd z = a.value(), w = b.value();
    double za = std::abs(z), zb = std::abs(w);
    if (za < zb) {
        std::swap(z, w);
        std::swap(za, zb);
    }
    double d1 = std::hypot(1.0, za);  // >= max(1, |z|)
    double d2 = std::hypot(1.0, zb);
    return 2.0 * std::abs(z / d1 - w / d1) / d2;
}

}  // namespace escdim

#include "escdim/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace escdim {

namespace {

constexpr double kMaxInventory = 6e6;
// count-only censuses stream the enumeration, so they can afford more
constexpr double kMaxCensus = 2e8;

// c must avoid the lattice and its half-periods so that no inner image of a
// regular point collides with a pole and every log/power branch below is
// well defined. c = 0 may be admitted verbatim by the caller (identity-map
// consistency configuration).
void validate_offset(const Lattice& lat, cd c, bool allow_zero) {
    if (allow_zero && c == cd(0.0, 0.0)) return;
    double tol = 1e-9 * lat.cell_diameter();
    if (std::abs(reduce_to_fundamental(c, lat).first) < tol)
        throw std::invalid_argument("offset c is a lattice point");
    if (std::abs(reduce_to_fundamental(2.0 * c, lat).first) < tol)
        throw std::invalid_argument("offset c is a half-period");
}

bool pole_order_lt(const PoleDatum& x, const PoleDatum& y) {
    double ax = std::abs(x.a), ay = std::abs(y.a);
    if (ax != ay) return ax < ay;
    return std::arg(x.a) < std::arg(y.a);
}

// Local-expansion probe: |f(z)| d^m against b^m at inner distance ~1e-4 from
// the lattice point (d = b * 10^{-8/m} keeps that inner distance uniform
// across coefficient scales). Probes that would vanish next to |a| in double
// precision are skipped — for wp-exp this automatically exempts the far
// poles whose coefficients underflow any representable offset.
bool pole_probe_feasible(const PoleDatum& p) {
    if (p.approximate) return false;
    double d = p.b_abs * std::pow(10.0, -8.0 / p.multiplicity);
    return d > std::abs(p.a) * 1e-10;
}

void check_local_expansion(const ModelFunction& m, const PoleDatum& p) {
    double d = p.b_abs * std::pow(10.0, -8.0 / p.multiplicity);
    double want = std::pow(p.b_abs, p.multiplicity);
    for (int q = 0; q < 4; ++q) {
        cd z = p.a + std::polar(d, M_PI / 4.0 + q * M_PI / 2.0);
        ExtendedComplex v = m.eval(z);
        if (v.is_inf()) throw std::runtime_error("pole verification failed");
        double got = std::abs(v.value()) * std::pow(d, p.multiplicity);
        if (std::abs(got - want) > 1e-2 * want)
            throw std::runtime_error("pole verification failed");
    }
}

void spot_check(const ModelFunction& m, const std::vector<PoleDatum>& poles,
                int budget = 8) {
    for (const PoleDatum& p : poles) {
        if (budget == 0) break;
        if (!pole_probe_feasible(p)) continue;
        check_local_expansion(m, p);
        --budget;
    }
}

}  // namespace

double leading_coefficient(const ModelFunction& m, const PoleDatum& p) {
    if (!(p.b_abs > 0.0) || !std::isfinite(p.b_abs))
        throw std::domain_error("degenerate pole");
    if (pole_probe_feasible(p)) check_local_expansion(m, p);
    return p.b_abs;
}

long long ModelFunction::pole_count_in_disk(double r) const {
    long long total = 0;
    for (const PoleDatum& p : poles_in_disk(r)) total += p.multiplicity;
    return total;
}

// ---------------------------------------------------------------- PlainWp

PlainWp::PlainWp(Lattice lat, int truncation)
    : f_(std::move(lat), truncation) {}

ExtendedComplex PlainWp::eval(cd z, bool*) const { return wp(z, f_); }

std::vector<PoleDatum> PlainWp::poles_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    std::vector<PoleDatum> out;
    for (cd lam : lattice_points_in_disk(f_.lattice(), cd(0.0, 0.0), r))
        out.push_back({lam, 2, 1.0, lam, false});
    std::sort(out.begin(), out.end(), pole_order_lt);
    spot_check(*this, out);
    return out;
}

long long PlainWp::pole_count_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    return 2 * lattice_point_count_in_disk(f_.lattice(), cd(0.0, 0.0), r);
}

// ------------------------------------------------------------------ WpExp

WpExp::WpExp(Lattice lat, cd c, int truncation)
    : f_(std::move(lat), truncation), c_(c) {
    validate_offset(f_.lattice(), c_, false);
}

ExtendedComplex WpExp::eval(cd z, bool*) const {
    cd w = std::exp(z) + c_;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        return ExtendedComplex::infinity();
    return wp(w, f_);
}

std::vector<PoleDatum> WpExp::poles_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const Lattice& lat = f_.lattice();
    if (!(M_PI * std::exp(2.0 * r) / lat.area() < kMaxInventory))
        throw std::length_error("pole inventory too large");
    double outer = std::exp(r), inner = std::exp(-r);
    std::vector<PoleDatum> out;
    for (cd lam : lattice_points_in_disk(lat, c_, outer)) {
        cd u = lam - c_;
        double au = std::abs(u);
        if (au < inner) continue;
        cd w0 = std::log(u);
        double s2 = r * r - w0.real() * w0.real();
        if (s2 < 0.0) continue;
        double s = std::sqrt(s2);
        int klo = int(std::ceil((-s - w0.imag()) / (2.0 * M_PI)));
        int khi = int(std::floor((s - w0.imag()) / (2.0 * M_PI)));
        for (int k = klo; k <= khi; ++k) {
            cd a = w0 + cd(0.0, 2.0 * M_PI * k);
            if (std::abs(a) > r) continue;
            out.push_back({a, 2, 1.0 / au, lam, false});
        }
    }
    std::sort(out.begin(), out.end(), pole_order_lt);
    spot_check(*this, out);
    return out;
}

long long WpExp::pole_count_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const Lattice& lat = f_.lattice();
    if (!(M_PI * std::exp(2.0 * r) / lat.area() < kMaxCensus))
        throw std::length_error("pole census too large");
    double outer = std::exp(r), inner = std::exp(-r);
    long long total = 0;
    visit_lattice_points_in_disk(lat, c_, outer, [&](cd lam) {
        cd u = lam - c_;
        double au = std::abs(u);
        if (au < inner) return;
        cd w0 = std::log(u);
        double s2 = r * r - w0.real() * w0.real();
        if (s2 < 0.0) return;
        double s = std::sqrt(s2);
        int klo = int(std::ceil((-s - w0.imag()) / (2.0 * M_PI)));
        int khi = int(std::floor((s - w0.imag()) / (2.0 * M_PI)));
        for (int k = klo; k <= khi; ++k)
            if (!(std::abs(w0 + cd(0.0, 2.0 * M_PI * k)) > r)) total += 2;
    });
    return total;
}

// ----------------------------------------------------------------- WpCosh

namespace {
cd arccosh_principal(cd z) {
    return std::log(z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0));
}
}  // namespace

WpCosh::WpCosh(Lattice lat, int truncation) : f_(std::move(lat), truncation) {
    const Lattice& l = f_.lattice();
    if (std::abs(l.w1() - 1.0) > 1e-9 ||
        std::abs(l.w2() - cd(0.0, 2.0 * M_PI)) > 1e-9)
        throw std::invalid_argument("lattice must have periods 1 and 2*pi*i");
}

ExtendedComplex WpCosh::eval(cd z, bool*) const {
    return wp(arccosh_principal(z), f_);
}

std::vector<PoleDatum> WpCosh::poles_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    std::vector<PoleDatum> out;
    if (r >= 1.0) out.push_back({cd(1.0, 0.0), 1, 0.5, cd(0.0, 0.0), false});
    for (int m = 1; std::cosh(double(m)) <= r; ++m)
        out.push_back({cd(std::cosh(double(m)), 0.0), 2, std::sinh(double(m)),
                       cd(double(m), 0.0), false});
    spot_check(*this, out);
    return out;
}

// ---------------------------------------------------------------- WpPower

WpPower::WpPower(Lattice lat, double rho, cd c, Branch branch, int truncation)
    : f_(std::move(lat), truncation), rho_(rho), c_(c), branch_(branch) {
    if (!(rho_ > 0.0) || !(rho_ <= 2.0))
        throw std::invalid_argument("rho must lie in (0, 2]");
    validate_offset(f_.lattice(), c_, true);
}

ExtendedComplex WpPower::eval(cd z, bool* seam) const {
    if (seam && z.imag() == 0.0 && z.real() < 0.0) *seam = true;
    cd h;
    if (rho_ == 2.0) {
        h = z;
    } else if (z == cd(0.0, 0.0)) {
        h = cd(0.0, 0.0);
    } else if (branch_ == Branch::plus) {
        h = std::pow(z, rho_ / 2.0);
    } else {
        cd zc = std::conj(z);
        // keep arg(zc) = +pi on the seam itself: conj flips +0 to -0, which
        // would otherwise cancel against the outer conjugation
        if (z.imag() == 0.0) zc = cd(z.real(), 0.0);
        h = std::conj(std::pow(zc, rho_ / 2.0));
    }
    return wp(h + c_, f_);
}

std::vector<PoleDatum> WpPower::poles_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const Lattice& lat = f_.lattice();
    double inner_r = std::pow(r, rho_ / 2.0);
    if (!(M_PI * inner_r * inner_r / lat.area() < kMaxInventory))
        throw std::length_error("pole inventory too large");
    double half_angle = rho_ * M_PI / 2.0;
    std::vector<PoleDatum> out;
    for (cd lam : lattice_points_in_disk(lat, c_, inner_r)) {
        cd u = lam - c_;
        if (u == cd(0.0, 0.0)) {
            // only the identity inner map turns the origin into a pole
            if (rho_ == 2.0) out.push_back({cd(0.0, 0.0), 2, 1.0, lam, false});
            continue;
        }
        if (!(std::abs(std::arg(u)) < half_angle)) continue;
        cd a = (rho_ == 2.0) ? u : std::pow(u, 2.0 / rho_);
        // both branches coincide with the principal power off the seam ray,
        // and the open sector keeps every pole off that ray
        if (std::abs(a) > r) continue;
        double b = (2.0 / rho_) * std::pow(std::abs(a), 1.0 - rho_ / 2.0);
        out.push_back({a, 2, b, lam, false});
    }
    std::sort(out.begin(), out.end(), pole_order_lt);
    spot_check(*this, out);
    return out;
}

long long WpPower::pole_count_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const Lattice& lat = f_.lattice();
    double inner_r = std::pow(r, rho_ / 2.0);
    if (!(M_PI * inner_r * inner_r / lat.area() < kMaxCensus))
        throw std::length_error("pole census too large");
    double half_angle = rho_ * M_PI / 2.0;
    long long total = 0;
    visit_lattice_points_in_disk(lat, c_, inner_r, [&](cd lam) {
        cd u = lam - c_;
        if (u == cd(0.0, 0.0)) {
            if (rho_ == 2.0) total += 2;
            return;
        }
        if (!(std::abs(std::arg(u)) < half_angle)) return;
        cd a = (rho_ == 2.0) ? u : std::pow(u, 2.0 / rho_);
        if (std::abs(a) > r) return;
        total += 2;
    });
    return total;
}

// --------------------------------------------------------------- PowerLift

PowerLift::PowerLift(std::shared_ptr<const ModelFunction> inner, int n)
    : inner_(std::move(inner)), n_(n) {
    if (!inner_) throw std::invalid_argument("lift needs an inner model");
    if (n_ < 1) throw std::invalid_argument("lift exponent must be positive");
}

ExtendedComplex PowerLift::eval(cd z, bool* seam) const {
    cd w(1.0, 0.0);
    for (int i = 0; i < n_; ++i) w *= z;
    return inner_->eval(w, seam);
}

std::vector<PoleDatum> PowerLift::poles_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    std::vector<PoleDatum> out;
    for (const PoleDatum& p : inner_->poles_in_disk(std::pow(r, double(n_)))) {
        if (p.a == cd(0.0, 0.0)) {
            out.push_back({cd(0.0, 0.0), p.multiplicity * n_,
                           std::pow(p.b_abs, 1.0 / n_), p.lambda, p.approximate});
            continue;
        }
        double ra = std::pow(std::abs(p.a), 1.0 / n_);
        double th = std::arg(p.a);
        double bg = p.b_abs / (n_ * std::pow(ra, double(n_ - 1)));
        for (int k = 0; k < n_; ++k) {
            cd ag = std::polar(ra, (th + 2.0 * M_PI * k) / n_);
            out.push_back({ag, p.multiplicity, bg, p.lambda, p.approximate});
        }
    }
    std::sort(out.begin(), out.end(), pole_order_lt);
    spot_check(*this, out);
    return out;
}

std::string PowerLift::kind() const { return "power-lift:" + inner_->kind(); }

// ----------------------------------------------------------- GluedOrderTwo

namespace {

double glue_strip_height(const InterpolationStack& s) {
    double h = s.a_prime - s.b;
    if (!(h > 0.0)) throw std::invalid_argument("degenerate interpolation stack");
    return h;
}

cd corrected(const InterpolationStack& s, cd z) {
    double t = std::min(std::abs(z.imag()) / glue_strip_height(s), 1.0);
    double x = z.real();
    return cd((1.0 - t) * s.chi2(x) + t * x, z.imag());
}

// max of |chi2(x) - x| over one period, padded; bounds how far the 1-D
// solve below can wander from Re(lambda - c)
double shear_bound(const InterpolationStack& s) {
    double m = 0.0;
    for (int i = 0; i <= 64; ++i) {
        double x = double(i) / 64.0;
        m = std::max(m, std::abs(s.chi2(x) - x));
    }
    return m + 1.0;
}

// solve (1-t) chi2(x) + t x = target for the strictly increasing lhs
double solve_seam_x(const InterpolationStack& s, double t, double target,
                    double pad) {
    auto g = [&](double x) { return (1.0 - t) * s.chi2(x) + t * x; };
    double lo = target - pad, hi = target + pad;
    for (int i = 0; i < 100 && g(lo) > target; ++i) lo -= pad;
    for (int i = 0; i < 100 && g(hi) < target; ++i) hi += pad;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

GluedOrderTwo::GluedOrderTwo(Lattice upper, Lattice lower, InterpolationStack h1,
                             InterpolationStack h2, cd c1, cd c2, int truncation)
    : upper_(std::move(upper), truncation),
      lower_(std::move(lower), truncation),
      h1_(std::move(h1)),
      h2_(std::move(h2)),
      c1_(c1),
      c2_(c2) {
    if (std::abs(upper_.lattice().w1() - 1.0) > 1e-9 ||
        std::abs(lower_.lattice().w1() - 1.0) > 1e-9)
        throw std::invalid_argument("lattices must share horizontal period 1");
    glue_strip_height(h1_);
    glue_strip_height(h2_);
}

ExtendedComplex GluedOrderTwo::eval(cd z, bool*) const {
    if (z.imag() >= 0.0) return wp(corrected(h1_, z) + c1_, upper_);
    return wp(corrected(h2_, z) + c2_, lower_);
}

std::vector<PoleDatum> GluedOrderTwo::poles_in_disk(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    std::vector<PoleDatum> out, checkable;
    struct Side {
        const EllipticFunction* f;
        const InterpolationStack* s;
        cd c;
        bool up;
    };
    for (const Side& side : {Side{&upper_, &h1_, c1_, true},
                             Side{&lower_, &h2_, c2_, false}}) {
        double hh = glue_strip_height(*side.s);
        double pad = shear_bound(*side.s);
        for (cd lam : lattice_points_in_disk(side.f->lattice(), side.c, r + pad)) {
            cd a = lam - side.c;
            double y = a.imag();
            // the closed seam belongs to the upper expression
            if (side.up ? y < 0.0 : y >= 0.0) continue;
            if (std::abs(y) >= hh) {
                if (std::abs(a) <= r) {
                    out.push_back({a, 2, 1.0, lam, false});
                    // keep the probe clear of the correction strip
                    if (std::abs(y) >= hh + 1e-3) checkable.push_back(out.back());
                }
                continue;
            }
            double t = std::abs(y) / hh;
            double x0 = solve_seam_x(*side.s, t, a.real(), pad);
            cd loc(x0, y);
            if (std::abs(loc) > r) continue;
            double dx = (1.0 - t) * side.s->dchi2(x0) + t;
            out.push_back({loc, 2, 1.0 / dx, lam, true});
        }
    }
    std::sort(out.begin(), out.end(), pole_order_lt);
    spot_check(*this, checkable);
    return out;
}

double gluing_residual(const GluedOrderTwo& m, const std::vector<double>& samples) {
    double worst = 0.0;
    for (double x : samples) {
        ExtendedComplex up = wp(cd(m.stack1().chi2(x), 0.0) + m.c1(), m.upper());
        ExtendedComplex lo = wp(cd(m.stack2().chi2(x), 0.0) + m.c2(), m.lower());
        worst = std::max(worst, chordal_distance(up, lo));
    }
    return worst;
}

}  // namespace escdim

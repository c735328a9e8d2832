#include "escdim/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "escdim/elliptic.hpp"
#include "escdim/lattice.hpp"

namespace escdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// census size at which the hybrid counter anchors its asymptotic branch
constexpr double kAnchorCensus = 2e6;

// log(e^{2r} J(r)) with J(r) = int_0^{2r} e^{-2u} sqrt(u(2r-u)) du, the
// r-dependent part of the wp-exp pole-count asymptotic. u = v^2 removes the
// sqrt singularity at u = 0; Simpson on the smooth integrand.
double log_density_tail(double r) {
    const int n = 4096;
    double V = std::sqrt(2.0 * r);
    double h = V / n;
    auto g = [&](double v) {
        double w = 2.0 * r - v * v;
        if (w < 0.0) w = 0.0;
        return 2.0 * v * v * std::exp(-2.0 * v * v) * std::sqrt(w);
    };
    double s = g(0.0) + g(V);
    for (int i = 1; i < n; ++i) s += g(i * h) * (i % 2 ? 4.0 : 2.0);
    return 2.0 * r + std::log(s * h / 3.0);
}

}  // namespace

long long count_poles(const ModelFunction& f, double r) {
    return f.pole_count_in_disk(r);
}

double origin_multiplicity(const ModelFunction& f) {
    double n0 = 0.0;
    for (const PoleDatum& p : f.poles_in_disk(1e-9))
        if (p.a == cd(0.0, 0.0)) n0 += p.multiplicity;
    return n0;
}

LogCounter::LogCounter(const ModelFunction& f) : f_(&f) {
    if (f.kind() != "wp-exp") return;
    const auto& we = dynamic_cast<const WpExp&>(f);
    double area = we.elliptic().lattice().area();
    r_switch_ = 0.5 * std::log(std::max(100.0, kAnchorCensus * area / M_PI));
    long long exact = f.pole_count_in_disk(r_switch_);
    if (exact <= 0)
        throw std::runtime_error("empty census at the switch radius");
    anchor_ = std::log(double(exact)) - log_density_tail(r_switch_);
}

double LogCounter::log_n(double r) const {
    if (r_switch_ == 0.0 || r <= r_switch_) {
        long long c = f_->pole_count_in_disk(r);
        return c > 0 ? std::log(double(c)) : -kInf;
    }
    return anchor_ + log_density_tail(r);
}

double LogCounter::n(double r) const {
    if (r_switch_ == 0.0 || r <= r_switch_)
        return double(f_->pole_count_in_disk(r));
    return std::exp(anchor_ + log_density_tail(r));
}

double count_poles_log(const ModelFunction& f, double r) {
    return LogCounter(f).log_n(r);
}

StepGrid exact_jump_grid(const std::vector<PoleDatum>& poles, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    StepGrid g;
    std::vector<std::pair<double, double>> jumps;  // (modulus, multiplicity)
    for (const PoleDatum& p : poles) {
        double s = std::abs(p.a);
        if (s == 0.0)
            g.n0 += p.multiplicity;
        else if (s <= r)
            jumps.push_back({s, double(p.multiplicity)});
    }
    std::sort(jumps.begin(), jumps.end());
    double level = g.n0;
    size_t i = 0;
    while (i < jumps.size()) {
        double s = jumps[i].first, add = 0.0;
        while (i < jumps.size() && jumps[i].first == s) {
            add += jumps[i].second;
            ++i;
        }
        g.t.push_back(s);
        g.n.push_back(level);
        level += add;
        g.t.push_back(s);
        g.n.push_back(level);
    }
    g.t.push_back(r);
    g.n.push_back(level);
    return g;
}

double integrated_counting(const std::vector<double>& t,
                           const std::vector<double>& n, double n0, double r) {
    if (t.size() != n.size())
        throw std::invalid_argument("grid size mismatch");
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    double acc = n0 * std::log(r);
    double prev_u = 0.0, prev_v = 0.0;
    bool open = false;  // a segment start is pending in (prev_u, prev_v)
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0))
            throw std::invalid_argument("grid radii must be positive");
        if (i > 0 && t[i] < t[i - 1])
            throw std::invalid_argument("grid radii must be nondecreasing");
        double u = std::log(t[i]), v = n[i] - n0;
        if (open) {
            if (t[i] <= r) {
                acc += 0.5 * (v + prev_v) * (u - prev_u);
            } else {
                // clip the straddling segment at r, linearly in log t
                double ur = std::log(r);
                double vr = prev_v;
                if (u > prev_u)
                    vr += (v - prev_v) * (ur - prev_u) / (u - prev_u);
                acc += 0.5 * (vr + prev_v) * (ur - prev_u);
                return acc;
            }
        } else if (t[i] > r) {
            return acc;  // the whole grid lies beyond r
        }
        prev_u = u;
        prev_v = v;
        open = true;
    }
    if (open && std::exp(prev_u) < r)  // carry the last level flat up to r
        acc += prev_v * (std::log(r) - prev_u);
    return acc;
}

double integrated_counting_exact(const std::vector<PoleDatum>& poles,
                                 double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    double acc = 0.0;
    for (const PoleDatum& p : poles) {
        double s = std::abs(p.a);
        if (s == 0.0)
            acc += p.multiplicity * std::log(r);
        else if (s <= r)
            acc += p.multiplicity * std::log(r / s);
    }
    return acc;
}

ProximityResult proximity_of(const std::function<ExtendedComplex(cd)>& f,
                             double r, int q) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    if (q < 16) throw std::invalid_argument("need at least 16 circle points");
    double rr = r;
    for (int attempt = 0; attempt <= 8; ++attempt) {
        double sum = 0.0;
        bool hit = false;
        for (int i = 0; i < q; ++i) {
            double th = 2.0 * M_PI * i / q;
            ExtendedComplex v = f(std::polar(rr, th));
            if (v.is_inf()) {
                hit = true;
                break;
            }
            double mod = std::abs(v.value());
            if (mod > 1.0) sum += std::log(mod);
        }
        if (!hit) return {sum / q, rr, attempt};
        rr *= 1.0 + 1e-6;
    }
    throw std::runtime_error("every nudged circle met a pole");
}

ProximityResult proximity(const ModelFunction& f, double r, int q) {
    return proximity_of([&f](cd z) { return f.eval(z); }, r, q);
}

OrderEstimate estimate_order(const std::vector<CountingSample>& samples,
                             double r_lo, double r_hi) {
    std::vector<std::pair<double, double>> pts;  // (log r, log n)
    double used_lo = 0.0, used_hi = 0.0;
    for (const CountingSample& s : samples)
        if (s.r >= r_lo && s.r <= r_hi && s.n > 0.0 && std::isfinite(s.log_n)) {
            if (pts.empty() || s.r < used_lo) used_lo = s.r;
            if (pts.empty() || s.r > used_hi) used_hi = s.r;
            pts.push_back({std::log(s.r), s.log_n});
        }
    if (pts.size() < 5) throw std::invalid_argument("window too small");
    double xm = 0.0, ym = 0.0;
    for (auto& p : pts) {
        xm += p.first;
        ym += p.second;
    }
    xm /= pts.size();
    ym /= pts.size();
    double sxx = 0.0, sxy = 0.0;
    for (auto& p : pts) {
        sxx += (p.first - xm) * (p.first - xm);
        sxy += (p.first - xm) * (p.second - ym);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("window too small");
    OrderEstimate est;
    est.slope = sxy / sxx;
    est.intercept = ym - est.slope * xm;
    double ss = 0.0;
    for (auto& p : pts) {
        double res = p.second - (est.intercept + est.slope * p.first);
        ss += res * res;
    }
    est.rms = std::sqrt(ss / pts.size());
    est.r_lo = used_lo;
    est.r_hi = used_hi;
    est.count = int(pts.size());
    return est;
}

OrderEstimate lower_order(const std::vector<CountingSample>& samples) {
    bool found = false;
    OrderEstimate best;
    for (size_t i = 0; i + 5 <= samples.size(); ++i) {
        OrderEstimate est;
        try {
            est = estimate_order(samples, samples[i].r, samples.back().r);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (!found || est.slope < best.slope) {
            best = est;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("window too small");
    return best;
}

double characteristic(const CharacteristicInput& in, double r, int q) {
    double N = in.n0 * std::log(r);
    for (double s : in.pole_moduli) {
        if (!(s > 0.0))
            throw std::invalid_argument("pole moduli must be positive");
        if (s <= r) N += std::log(r / s);
    }
    return proximity_of(in.value, r, q).value + N;
}

CharacteristicInput model_characteristic(const ModelFunction& f,
                                         double r_max) {
    CharacteristicInput in;
    in.value = [&f](cd z) { return f.eval(z); };
    for (const PoleDatum& p : f.poles_in_disk(r_max)) {
        double s = std::abs(p.a);
        if (s == 0.0)
            in.n0 += p.multiplicity;
        else
            for (int i = 0; i < p.multiplicity; ++i) in.pole_moduli.push_back(s);
    }
    return in;
}

namespace {

// roots of wp = a in one fundamental cell, Newton-refined from a seed grid;
// returns (root, multiplicity) pairs with total multiplicity 2 (the degree
// of wp on the torus). A critical value a yields one double root.
std::vector<std::pair<cd, int>> cell_apoints(const EllipticFunction& f, cd a) {
    const Lattice& lat = f.lattice();
    double tol_val = 1e-9 * std::max(1.0, std::abs(a));
    // Newton at a double root converges linearly and stalls around
    // sqrt(tol_val), so clustering has to be much coarser than the simple-root
    // accuracy
    double tol_z = 1e-4 * lat.cell_diameter();
    std::vector<cd> roots;
    const int grid = 24;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            cd z = (i + 0.5) / grid * lat.r1() + (j + 0.5) / grid * lat.r2();
            bool converged = false;
            for (int it = 0; it < 60; ++it) {
                ExtendedComplex v = wp(z, f), d = wp_prime(z, f);
                if (v.is_inf() || d.is_inf()) break;
                cd num = v.value() - a;
                if (std::abs(num) <= tol_val) {
                    converged = true;
                    break;
                }
                if (!(std::abs(d.value()) > 0.0)) break;
                cd step = num / d.value();
                if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
                    break;
                z -= step;
            }
            if (!converged) continue;
            cd z0 = reduce_to_fundamental(z, lat).first;
            bool dup = false;
            for (cd w : roots)
                if (std::abs(reduce_to_fundamental(z0 - w, lat).first) < tol_z)
                    dup = true;
            if (!dup) roots.push_back(z0);
        }
    }
    std::vector<std::pair<cd, int>> out;
    if (roots.size() == 2) {
        // generic pair z0, -z0 mod the lattice
        if (std::abs(reduce_to_fundamental(roots[0] + roots[1], lat).first) >
            tol_z)
            throw std::runtime_error("a-point search failed");
        out.push_back({roots[0], 1});
        out.push_back({roots[1], 1});
    } else if (roots.size() == 1) {
        // a critical value: the double root is a zero of wp', so polish it
        // there (quadratic convergence, using wp'' = 6 wp^2 - g2/2)
        cd z0 = roots[0];
        for (int it = 0; it < 30; ++it) {
            ExtendedComplex d = wp_prime(z0, f), v = wp(z0, f);
            if (d.is_inf() || v.is_inf()) break;
            cd dd = 6.0 * v.value() * v.value() - 0.5 * lat.g2();
            if (!(std::abs(dd) > 0.0)) break;
            cd step = d.value() / dd;
            z0 -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z0))) break;
        }
        if (std::abs(reduce_to_fundamental(2.0 * z0, lat).first) >
            1e-6 * lat.cell_diameter())
            throw std::runtime_error("a-point search failed");
        out.push_back({z0, 2});
    } else {
        throw std::runtime_error("a-point search failed");
    }
    return out;
}

// refuses the generic-model path of fft_residual unless a coarse scan finds
// the a-level set empty
void require_level_set_empty(const ModelFunction& f, cd a, double r_max) {
    ExtendedComplex av(a);
    const int grid = 64;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            cd z((2.0 * (i + 0.5) / grid - 1.0) * r_max,
                 (2.0 * (j + 0.5) / grid - 1.0) * r_max);
            if (chordal_distance(f.eval(z), av) < 0.05)
                throw std::invalid_argument(
                    "a-point census is only available for plain-wp");
        }
    }
}

}  // namespace

CharacteristicInput plain_wp_apoint_characteristic(const PlainWp& f, cd a,
                                                   double r_max) {
    const Lattice& lat = f.elliptic().lattice();
    CharacteristicInput in;
    in.value = [&f, a](cd z) -> ExtendedComplex {
        ExtendedComplex v = f.eval(z);
        if (v.is_inf()) return ExtendedComplex(cd(0.0, 0.0));
        cd d = v.value() - a;
        if (d == cd(0.0, 0.0)) return ExtendedComplex::infinity();
        return ExtendedComplex(1.0 / d);
    };
    for (const auto& [z0, mult] : cell_apoints(f.elliptic(), a)) {
        for (cd lam : lattice_points_in_disk(lat, -z0, r_max)) {
            double s = std::abs(z0 + lam);
            if (s == 0.0) {
                in.n0 += mult;  // unreachable for finite a; kept for form
                continue;
            }
            for (int i = 0; i < mult; ++i) in.pole_moduli.push_back(s);
        }
    }
    return in;
}

double fft_residual(const ModelFunction& f, cd a,
                    const std::vector<double>& radii, int q) {
    if (radii.empty()) throw std::invalid_argument("need at least one radius");
    double r_max = *std::max_element(radii.begin(), radii.end());
    CharacteristicInput cf = model_characteristic(f, r_max);
    CharacteristicInput cg;
    if (const auto* pw = dynamic_cast<const PlainWp*>(&f)) {
        cg = plain_wp_apoint_characteristic(*pw, a, r_max);
    } else {
        require_level_set_empty(f, a, r_max);
        cg.value = [&f, a](cd z) -> ExtendedComplex {
            ExtendedComplex v = f.eval(z);
            if (v.is_inf()) return ExtendedComplex(cd(0.0, 0.0));
            cd d = v.value() - a;
            if (d == cd(0.0, 0.0)) return ExtendedComplex::infinity();
            return ExtendedComplex(1.0 / d);
        };
    }
    double worst = 0.0;
    for (double r : radii)
        worst = std::max(worst, std::abs(characteristic(cf, r, q) -
                                         characteristic(cg, r, q)));
    return worst;
}

namespace {

double first_pole_modulus(const ModelFunction& f) {
    for (double r = 1.0; r <= 16.0; r *= 2.0) {
        std::vector<PoleDatum> inv = f.poles_in_disk(r);
        for (const PoleDatum& p : inv)
            if (std::abs(p.a) > 0.0) return std::abs(p.a);
    }
    throw std::runtime_error("no pole within radius 16");
}

}  // namespace

std::vector<CountingSample> make_counting_samples(const ModelFunction& f,
                                                  double r_lo, double r_hi,
                                                  int per_decade, int q,
                                                  bool with_proximity) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo))
        throw std::invalid_argument("bad radius window");
    if (per_decade < 1)
        throw std::invalid_argument("per_decade must be positive");
    LogCounter lc(f);
    double n0 = origin_multiplicity(f);

    int steps =
        std::max(1, int(std::ceil(per_decade * std::log10(r_hi / r_lo))));
    std::vector<double> radii(steps + 1);
    for (int i = 0; i <= steps; ++i)
        radii[i] = (i == steps)
                       ? r_hi
                       : r_lo * std::pow(r_hi / r_lo, double(i) / steps);

    // N column: exact step-grid integration when the whole inventory is
    // affordable; otherwise an exact (or, failing that, asymptotic) anchor
    // at r_lo plus trapezoid accumulation over the sample grid itself.
    constexpr double kExactNLimit = 200000.0;
    std::vector<double> Ncol(radii.size(), 0.0);
    bool exact_full = false;
    try {
        if (double(f.pole_count_in_disk(r_hi)) <= kExactNLimit) {
            StepGrid g = exact_jump_grid(f.poles_in_disk(r_hi), r_hi);
            for (size_t i = 0; i < radii.size(); ++i)
                Ncol[i] = integrated_counting(g.t, g.n, g.n0, radii[i]);
            exact_full = true;
        }
    } catch (const std::length_error&) {
    }
    if (!exact_full) {
        double integral = 0.0;  // int_0^{r_lo} (n - n0)/t dt
        bool anchored = false;
        try {
            if (double(f.pole_count_in_disk(r_lo)) <= kExactNLimit) {
                integral = integrated_counting_exact(f.poles_in_disk(r_lo),
                                                     r_lo) -
                           n0 * std::log(r_lo);
                anchored = true;
            }
        } catch (const std::length_error&) {
        }
        if (!anchored) {
            // numeric lower tail from the first pole modulus
            double s0 = first_pole_modulus(f);
            int m = std::max(2, int(std::ceil(
                                    64.0 * std::log10(std::max(r_lo / s0,
                                                               1.001)))));
            double pu = std::log(s0), pv = lc.n(s0) - n0;
            for (int i = 1; i <= m; ++i) {
                double t = s0 * std::pow(r_lo / s0, double(i) / m);
                double u = std::log(t), v = lc.n(t) - n0;
                integral += 0.5 * (v + pv) * (u - pu);
                pu = u;
                pv = v;
            }
        }
        double pu = std::log(radii[0]), pv = lc.n(radii[0]) - n0;
        Ncol[0] = integral + n0 * std::log(radii[0]);
        for (size_t i = 1; i < radii.size(); ++i) {
            double u = std::log(radii[i]), v = lc.n(radii[i]) - n0;
            integral += 0.5 * (v + pv) * (u - pu);
            Ncol[i] = integral + n0 * std::log(radii[i]);
            pu = u;
            pv = v;
        }
    }

    std::vector<CountingSample> out;
    out.reserve(radii.size());
    for (size_t i = 0; i < radii.size(); ++i) {
        CountingSample s;
        s.r = radii[i];
        s.n = lc.n(s.r);
        s.log_n = std::isfinite(s.n) ? (s.n > 0.0 ? std::log(s.n) : -kInf)
                                     : lc.log_n(s.r);
        s.N = Ncol[i];
        s.m = with_proximity ? proximity(f, s.r, q).value : 0.0;
        s.T = s.m + s.N;
        out.push_back(s);
    }
    return out;
}

}  // namespace escdim

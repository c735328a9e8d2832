#include "escdim/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "escdim/cli.hpp"
#include "escdim/counting.hpp"
#include "escdim/covering.hpp"
#include "escdim/elliptic.hpp"
#include "escdim/mcmullen.hpp"
#include "escdim/models.hpp"
#include "escdim/orbits.hpp"
#include "escdim/schedule.hpp"
#include "escdim/sphere.hpp"

namespace escdim {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Battery {
    SuiteResult result;
    void check(bool ok, const std::string& msg) {
        ++result.checks;
        if (!ok) result.failures.push_back(msg);
    }
};

// --- sphere ---------------------------------------------------------------

void suite_sphere(Battery& b) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        ExtendedComplex z{cd(u(rng), u(rng))};
        ExtendedComplex w{cd(u(rng), u(rng))};
        double d = chordal_distance(z, w), dr = chordal_distance(w, z);
        b.check(std::abs(d - dr) <= 1e-15,
                "chordal asymmetry " + num(d - dr));
        b.check(d <= 2.0 + 1e-15, "chordal distance " + num(d) + " exceeds 2");
        b.check(chordal_distance(z, z) == 0.0, "chordal d(z,z) not zero");
    }
    ExtendedComplex inf_pt = ExtendedComplex::infinity();
    for (double x : {0.0, 0.7, 13.0}) {
        double d = chordal_distance(ExtendedComplex{cd(x, 0)}, inf_pt);
        double want = 2.0 / std::sqrt(1.0 + x * x);
        b.check(std::abs(d - want) <= 1e-12 * want,
                "chordal distance to infinity " + num(d) + " want " + num(want));
    }

    PlanarRegion disk(-1, 1, -1, 1, [](cd z) { return std::abs(z) < 1.0; }, 2048);
    double half_sphere = spherical_area(disk);
    b.check(std::abs(half_sphere - 2 * M_PI) < 0.02,
            "spherical area of unit disk " + num(half_sphere) + " want 2pi");
    b.check(spherical_density(disk, disk) == 1.0, "density of a set in itself not 1");

    PlanarRegion band(-3, 3, -3, 3,
                      [](cd z) { double r = std::abs(z); return 1.0 <= r && r <= M_E; },
                      2048);
    LogArea la = logarea(band);
    b.check(!la.divergent, "logarea of bounded annulus flagged divergent");
    b.check(std::abs(la.value - 2 * M_PI) < 0.05,
            "logarea of annulus [1,e] " + num(la.value) + " want 2pi");
}

// --- elliptic ---------------------------------------------------------------

void suite_elliptic(Battery& b) {
    const Lattice lats[2] = {Lattice(cd(1, 0), cd(0, 1)),
                             Lattice(cd(1, 0), cd(0.3, 1.1))};
    for (const Lattice& lat : lats) {
        EllipticFunction el(lat);
        cd esum = el.e1() + el.e2() + el.e3();
        b.check(std::abs(esum) < 1e-10, "e1+e2+e3 = " + num(std::abs(esum)));
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> u(0.05, 0.95);
        int tested = 0;
        for (int i = 0; i < 200 && tested < 100; ++i) {
            cd z = u(rng) * lat.w1() + u(rng) * lat.w2();
            ExtendedComplex p = wp(z, el), dp = wp_prime(z, el);
            if (p.is_inf() || dp.is_inf()) continue;
            ++tested;
            cd lhs = dp.value() * dp.value();
            cd rhs = 4.0 * (p.value() - el.e1()) * (p.value() - el.e2()) *
                     (p.value() - el.e3());
            double scale = std::max(1.0, std::abs(rhs));
            b.check(std::abs(lhs - rhs) / scale < 1e-9,
                    "ODE residual " + num(std::abs(lhs - rhs) / scale) + " at z = (" +
                        num(z.real()) + ", " + num(z.imag()) + ")");
            ExtendedComplex shifted = wp(z + lat.w1(), el);
            b.check(!shifted.is_inf() &&
                        std::abs(shifted.value() - p.value()) /
                                std::max(1.0, std::abs(p.value())) <
                            1e-10,
                    "periodicity broke at z = (" + num(z.real()) + ", " +
                        num(z.imag()) + ")");
            ExtendedComplex mirrored = wp(-z, el);
            b.check(!mirrored.is_inf() &&
                        std::abs(mirrored.value() - p.value()) /
                                std::max(1.0, std::abs(p.value())) <
                            1e-10,
                    "evenness broke at z = (" + num(z.real()) + ", " +
                        num(z.imag()) + ")");
        }
        b.check(tested == 100, "only " + std::to_string(tested) + " usable ODE points");
    }
}

// --- models -----------------------------------------------------------------

void suite_models(Battery& b) {
    Lattice unit(cd(1, 0), cd(0, 1));
    PlainWp plain(unit);
    auto inv = plain.poles_in_disk(30.0);
    long long counted = plain.pole_count_in_disk(30.0);
    b.check(counted == 2 * (long long)inv.size(),
            "plain-wp census " + std::to_string(counted) + " vs inventory " +
                std::to_string(2 * inv.size()));
    double expected = 2.0 * M_PI * 30.0 * 30.0;  // cell area 1
    b.check(std::abs(double(counted) / expected - 1.0) < 0.1,
            "plain-wp pole density ratio " + num(double(counted) / expected));

    WpExp we(unit, default_offset(unit));
    auto epoles = we.poles_in_disk(4.0);  // inner radius e^4 keeps the λ census small
    b.check(!epoles.empty(), "wp-exp inventory empty in B(4)");
    for (const auto& p : epoles) {
        double want = std::exp(-p.a.real());
        b.check(std::abs(p.b_abs - want) <= 1e-9 * want,
                "wp-exp |b| = " + num(p.b_abs) + " want e^{-Re a} = " + num(want));
    }

    WpPower wpow(unit, 1.0, default_offset(unit));
    auto ppoles = wpow.poles_in_disk(20.0);
    b.check(!ppoles.empty(), "wp-power inventory empty in B(20)");
    for (size_t i = 0; i < ppoles.size() && i < 3; ++i) {
        double want = 2.0 * std::sqrt(std::abs(ppoles[i].a));
        b.check(std::abs(ppoles[i].b_abs - want) <= 1e-12 * want,
                "wp-power |b| formula off: " + num(ppoles[i].b_abs) + " vs " +
                    num(want));
        double lead = leading_coefficient(wpow, ppoles[i]);
        b.check(std::abs(lead - ppoles[i].b_abs) <= 1e-6 * ppoles[i].b_abs,
                "wp-power local expansion |b| = " + num(lead) + " inventory " +
                    num(ppoles[i].b_abs));
    }

    PowerLift lift(std::make_shared<PlainWp>(unit), 2);
    long long nl = lift.pole_count_in_disk(6.0);
    long long ni = plain.pole_count_in_disk(36.0);
    b.check(nl == 2 * ni, "power-lift fiber count " + std::to_string(nl) +
                              " vs 2x inner " + std::to_string(2 * ni));
}

// --- counting ---------------------------------------------------------------

void suite_counting(Battery& b) {
    Lattice unit(cd(1, 0), cd(0, 1));
    PlainWp plain(unit);
    auto samples = make_counting_samples(plain, 5.0, 100.0, 16, 512, true);
    b.check(samples.size() >= 5, "too few counting samples");
    for (size_t i = 1; i < samples.size(); ++i) {
        b.check(samples[i].n >= samples[i - 1].n, "n(r) not monotone");
        b.check(samples[i].N >= samples[i - 1].N, "N(r) not monotone");
        b.check(samples[i].T >= samples[i - 1].T - 1e-9, "T(r) not monotone");
    }
    for (const auto& s : samples)
        b.check(std::abs(s.T - (s.m + s.N)) <= 1e-9 * std::max(1.0, s.T),
                "T != m + N at r = " + num(s.r));
    OrderEstimate est = estimate_order(samples, 5.0, 100.0);
    b.check(std::abs(est.slope - 2.0) < 0.05,
            "plain-wp order slope " + num(est.slope) + " want 2");
    OrderEstimate low = lower_order(samples);
    b.check(low.slope <= est.slope + 1e-9,
            "lower order " + num(low.slope) + " above order " + num(est.slope));
}

// --- covering ---------------------------------------------------------------

void suite_covering(Battery& b, double c1) {
    for (double la : {0.3, 0.6}) {
        auto v = koebe_value_bounds(1.0, 1.0, la);
        double lo = la / ((1 + la) * (1 + la)), hi = la / ((1 - la) * (1 - la));
        b.check(std::abs(v.first - lo) <= 1e-12 * lo &&
                    std::abs(v.second - hi) <= 1e-12 * hi,
                "koebe value bounds off at la = " + num(la));
        auto d = koebe_derivative_bounds(1.0, la);
        double dlo = (1 - la) / std::pow(1 + la, 3);
        double dhi = (1 + la) / std::pow(1 - la, 3);
        b.check(std::abs(d.first - dlo) <= 1e-12 * dlo &&
                    std::abs(d.second - dhi) <= 1e-12 * dhi,
                "koebe derivative bounds off at la = " + num(la));
    }
    b.check(koebe_quarter(cd(0, 0), 1.0, 2.0).radius == 0.5,
            "koebe quarter radius not deriv*r/4");

    PoleDatum pd;
    pd.a = cd(7.0, 0.0);
    pd.b_abs = 0.37;
    CoverComponent comp = component_bounds(pd, 123.0);
    b.check(std::abs(comp.outer / comp.inner - 8.0) <= 1e-13,
            "component outer/inner = " + num(comp.outer / comp.inner));

    // the exact local model f = (b/(z-a))^2 has inverse derivative
    // |g'| = b / (2 |w|^{3/2}); the configured c1 must dominate it
    for (double zmod : {50.0, 200.0, 1000.0, 25000.0})
        for (double bb : {0.2, 1.0, 5.0}) {
            double deriv = bb / (2.0 * std::pow(zmod, 1.5));
            double bound = branch_derivative_bound(bb, zmod, c1);
            b.check(deriv <= bound * (1.0 + 1e-12),
                    "local-model inverse derivative " + num(deriv) +
                        " exceeds bound " + num(bound) + " (c1 = " + num(c1) +
                        ", b = " + num(bb) + ", |z| = " + num(zmod) + ")");
        }

    const double R = 100.0;
    BranchChain a, bc, ab;
    a.poles = {PoleDatum{cd(200, 0), 2, 3.0, cd(), false},
               PoleDatum{cd(0, 400), 2, 1.0, cd(), false}};
    bc.poles = {PoleDatum{cd(-500, 0), 2, 2.0, cd(), false},
                PoleDatum{cd(0, 1000), 2, 0.7, cd(), false}};
    ab.poles = a.poles;
    ab.poles.insert(ab.poles.end(), bc.poles.begin(), bc.poles.end());
    auto da = chain_diameter(a, R), db = chain_diameter(bc, R),
         dab = chain_diameter(ab, R);
    double glue = a.c1 * std::sqrt(R) / 32.0;
    b.check(std::abs(dab.second - da.second * db.second * glue) <=
                1e-12 * dab.second,
            "spherical chain norm broke: " + num(dab.second) + " vs " +
                num(da.second * db.second * glue));
    b.check(std::abs(dab.first - da.first * db.second * glue) <= 1e-12 * dab.first,
            "euclidean chain norm broke");

    Lattice unit(cd(1, 0), cd(0, 1));
    PlainWp plain(unit);
    double floor = escape_radius_floor(plain);
    const EllipticFunction& el = plain.elliptic();
    double want = 4.0 * std::max({std::abs(el.e1()), std::abs(el.e2()),
                                  std::abs(el.e3())});
    b.check(std::abs(floor - want) <= 1e-12 * want,
            "escape radius floor " + num(floor) + " want " + num(want));
}

// --- mcmullen ---------------------------------------------------------------

void suite_mcmullen(Battery& b) {
    const double rho = 1.0, R = 1e4, C2 = 2.0, C7 = 5.0;
    NestedCoverSpec spec = paper_cover_spec(rho, R, C2, C7, 500);
    BoundSequence bs = mcmullen_bound(spec);
    double q = (std::log(C7) - std::log(R)) /
               (std::log(C2) - 0.5 * (1 + rho) * std::log(R));
    for (size_t i = 0; i < bs.raw.size(); ++i) {
        double l = double(i + 1);
        double want = 2.0 - q * (l + 1) / l;
        b.check(std::abs(bs.raw[i] - want) <= 1e-12 * std::max(1.0, std::abs(want)),
                "paper cover closed form off at level " + std::to_string(i + 1));
    }

    NestedCoverSpec cantor;
    const int L = 100000;
    for (int l = 1; l <= L; ++l) {
        cantor.log_delta.push_back(std::log(4.0 / 9.0));
        cantor.log_diam.push_back(0.5 * std::log(2.0) - l * std::log(3.0));
    }
    double lim = mcmullen_bound(cantor).limit;
    double want = std::log(4.0) / std::log(3.0);
    b.check(std::abs(lim - want) < 2e-5,
            "Cantor limit " + num(lim) + " want log4/log3 = " + num(want));

    for (double r : {0.3, 1.0, 2.7}) {
        double back = order_from_dimension(dimension_formula(r));
        b.check(std::abs(back - r) <= 1e-12 * r,
                "dimension formula round trip broke at rho = " + num(r));
    }

    std::vector<cd> dust;
    for (int idx = 0; idx < 4096; ++idx) {
        int v = idx, x = 0, y = 0;
        for (int d = 0; d < 6; ++d) {
            x = 3 * x + ((v & 1) ? 2 : 0);
            y = 3 * y + ((v & 2) ? 1 : 0);
            v >>= 2;
        }
        dust.push_back(cd(x, y));
    }
    BoxCount bc = box_counting_dimension(dust, {243, 81, 27, 9, 3, 1});
    b.check(bc.counts.front() == 4 && bc.counts.back() == 4096,
            "dust box counts off: " + std::to_string(bc.counts.front()) + ".." +
                std::to_string(bc.counts.back()));
    b.check(std::abs(bc.slope - want) < 1e-9,
            "dust box slope " + num(bc.slope) + " want " + num(want));
}

// --- orbits -----------------------------------------------------------------

void suite_orbits(Battery& b) {
    Lattice quarter(cd(0.25, 0), cd(0, 0.25));
    PlainWp plain(quarter, 16);
    EscapeSchedule bars = exponential_schedule();

    OrbitRecord at_pole = iterate(plain, cd(0, 0), bars, 8);
    b.check(at_pole.cls == OrbitClass::prepole && at_pole.depth == 1,
            "orbit at a pole not prepole(1)");

    OrbitRecord r1 = iterate(plain, cd(0.07, 0.11), bars, 12);
    OrbitRecord r2 = iterate(plain, cd(0.07, 0.11), bars, 12);
    bool same = r1.cls == r2.cls && r1.trajectory.size() == r2.trajectory.size();
    for (size_t i = 0; same && i < r1.trajectory.size(); ++i)
        same = r1.trajectory[i] == r2.trajectory[i];
    b.check(same, "iterate is not deterministic");

    EscapeSchedule never = constant_schedule(std::numeric_limits<double>::infinity());
    OrbitRecord stay = iterate(plain, cd(0.07, 0.11), never, 8);
    b.check(stay.cls == OrbitClass::bounded && stay.depth == 8,
            "infinite bars did not classify as bounded");

    EscapeSchedule high = [](int k) { return 3.0 * std::exp(double(k)); };
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            cd z(0.01 + 0.05 * i, 0.01 + 0.05 * j);
            OrbitRecord lo = iterate(plain, z, bars, 8);
            OrbitRecord hi = iterate(plain, z, high, 8);
            if (lo.cls == OrbitClass::bounded)
                b.check(hi.cls != OrbitClass::escaping,
                        "raising the schedule converted bounded to escaping at (" +
                            num(z.real()) + ", " + num(z.imag()) + ")");
            bool eq = lo.trajectory.size() == hi.trajectory.size();
            for (size_t t = 0; eq && t < lo.trajectory.size(); ++t)
                eq = lo.trajectory[t] == hi.trajectory[t];
            b.check(eq, "schedule steered the trajectory");
        }

    PlanarRegion win(0.0, 3.0, -1.5, 1.5);
    EscapeField f1 = render_escape_field(plain, win, 16, bars, 4);
    EscapeField f2 = render_escape_field(plain, win, 16, bars, 4);
    bool match = f1.pixels.size() == f2.pixels.size();
    for (size_t i = 0; match && i < f1.pixels.size(); ++i)
        match = f1.pixels[i].cls == f2.pixels[i].cls &&
                f1.pixels[i].depth == f2.pixels[i].depth;
    b.check(match, "escape field render is not repeatable");
}

// --- cli --------------------------------------------------------------------

void suite_cli(Battery& b) {
    RunConfig def;
    b.check(parse_config_text(serialize_config(def)) == def,
            "default config does not round trip");
    RunConfig m;
    m.model = "wp-power";
    m.rho = 0.5;
    m.levels = 77;
    m.with_proximity = false;
    m.out = "some dir/base";
    b.check(parse_config_text(serialize_config(m)) == m,
            "mutated config does not round trip");
    for (const char* bad : {"zz = 1", "rho = 1\nrho = 2", "with_proximity = maybe",
                            "resolution = 8", "C2 = -1"}) {
        bool threw = false;
        try {
            parse_config_text(bad);
        } catch (const ConfigError&) {
            threw = true;
        }
        b.check(threw, std::string("config accepted '") + bad + "'");
    }
}

}  // namespace

std::vector<SuiteResult> run_selftests(const SelftestOptions& opt) {
    using Runner = std::function<void(Battery&)>;
    const std::pair<const char*, Runner> catalog[] = {
        {"sphere", [](Battery& b) { suite_sphere(b); }},
        {"elliptic", [](Battery& b) { suite_elliptic(b); }},
        {"models", [](Battery& b) { suite_models(b); }},
        {"counting", [](Battery& b) { suite_counting(b); }},
        {"covering", [&opt](Battery& b) { suite_covering(b, opt.c1); }},
        {"mcmullen", [](Battery& b) { suite_mcmullen(b); }},
        {"orbits", [](Battery& b) { suite_orbits(b); }},
        {"cli", [](Battery& b) { suite_cli(b); }},
    };
    std::vector<SuiteResult> out;
    for (const auto& [name, fn] : catalog) {
        if (!opt.suite.empty() && opt.suite != name) continue;
        Battery b;
        b.result.name = name;
        auto t0 = std::chrono::steady_clock::now();
        fn(b);
        b.result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        out.push_back(std::move(b.result));
    }
    if (out.empty()) throw std::invalid_argument("unknown suite: " + opt.suite);
    return out;
}

int cmd_selftest(const SelftestOptions& opt, std::ostream& log) {
    std::vector<SuiteResult> results;
    try {
        results = run_selftests(opt);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    int failures = 0;
    for (const auto& r : results) {
        char t[32];
        std::snprintf(t, sizeof t, "%.3f", r.seconds);
        log << "suite " << r.name << ": " << r.checks << " checks, "
            << r.failures.size() << " failures (" << t << " s)\n";
        for (const auto& f : r.failures) log << "  FAIL " << f << '\n';
        failures += int(r.failures.size());
    }
    log << (failures ? "selftest: FAIL (" + std::to_string(failures) + " failures)\n"
                     : "selftest: ok\n");
    return failures ? 1 : 0;
}

}  // namespace escdim

#include <doctest.h>

#include <cmath>
#include <random>

#include "escdim/elliptic.hpp"
#include "escdim/lattice.hpp"
#include "oracles.hpp"

using namespace escdim;
using testsup::test_lattices;

TEST_CASE("fundamental domain reduction") {
    Lattice sq(cd(1.0, 0.0), cd(0.0, 1.0));

    auto [z0, lam] = reduce_to_fundamental(cd(2.5, 3.0), sq);
    CHECK(std::abs(z0 - cd(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(lam - cd(2.0, 3.0)) < 1e-14);

    // a half-period reduces to itself under the minimal-modulus rule
    auto [h0, hl] = reduce_to_fundamental(cd(0.5, 0.5), sq);
    CHECK(std::abs(h0) <= std::abs(cd(0.5, 0.5)) + 1e-14);
    CHECK(std::abs((h0 + hl) - cd(0.5, 0.5)) < 1e-13);

    std::mt19937 rng(7101);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (const Lattice& lat : test_lattices()) {
        for (int i = 0; i < 200; ++i) {
            cd z(u(rng), u(rng));
            auto [w, l] = reduce_to_fundamental(z, lat);
            CHECK(std::abs(z - (w + l)) < 1e-10 * (1.0 + std::abs(z)));
            CHECK(std::abs(w) <= 0.5 * lat.cell_diameter() + 1e-12);
        }
    }
}

TEST_CASE("lattice constructor invariants") {
    CHECK_THROWS_WITH_AS(Lattice(cd(1.0, 0.0), cd(-2.0, 0.0)),
                         "collinear lattice generators", std::invalid_argument);

    // orientation is normalized: Im(w2/w1) > 0 after construction
    Lattice flipped(cd(1.0, 0.0), cd(0.0, -1.0));
    CHECK(flipped.tau().imag() > 0.0);
    CHECK(flipped.area() == doctest::Approx(1.0));

    Lattice skew(cd(1.0, 0.0), cd(7.3, 1.0));
    CHECK(std::abs(skew.r2() / skew.r1()) < 2.0);  // reduced basis is short
    CHECK(skew.area() == doctest::Approx(1.0));
}

TEST_CASE("Eisenstein series against frozen values") {
    Lattice sq(cd(1.0, 0.0), cd(0.0, 1.0));
    CHECK(std::abs(sq.G4() - testsup::kG4Square) < 1e-12);
    CHECK(std::abs(sq.G6()) < 1e-12);  // vanishes by symmetry

    Lattice hex(cd(1.0, 0.0), std::polar(1.0, M_PI / 3.0));
    CHECK(std::abs(hex.G4()) < 1e-12);  // vanishes by symmetry

    // scaling law G4 -> s^-4 G4
    Lattice sq2(cd(2.0, 0.0), cd(0.0, 2.0));
    CHECK(std::abs(sq2.G4() - testsup::kG4Square / 16.0) < 1e-12);
}

TEST_CASE("wp: pole expansion, parity, periodicity") {
    Lattice sq(cd(1.0, 0.0), cd(0.0, 1.0));
    EllipticFunction f(sq);

    for (int k = 2; k <= 5; ++k) {
        double r = std::pow(10.0, -k);
        cd z = std::polar(r, 0.37);
        ExtendedComplex w = wp(z, f);
        REQUIRE_FALSE(w.is_inf());
        CHECK(std::abs(z * z * w.value() - 1.0) < 1e-6);
        if (k <= 4) {  // at r=1e-5 the derivative exceeds the blowup cutoff
            ExtendedComplex wp3 = wp_prime(z, f);
            REQUIRE_FALSE(wp3.is_inf());
            CHECK(std::abs(z * z * z * wp3.value() + 2.0) < 1e-5);
        }
    }

    CHECK(wp(cd(0.0, 0.0), f).is_inf());
    CHECK(wp(cd(1.0, 0.0), f).is_inf());
    CHECK(wp(cd(3.0, -2.0), f).is_inf());

    std::mt19937 rng(424242);
    for (const Lattice& lat : test_lattices()) {
        EllipticFunction g(lat);
        std::uniform_int_distribution<int> mn(-3, 3);
        for (int i = 0; i < 200; ++i) {
            cd z = testsup::random_cell_point(rng, lat, 0.05);
            ExtendedComplex w = wp(z, g);
            REQUIRE_FALSE(w.is_inf());
            double scale = std::max(1.0, std::abs(w.value()));

            // evenness
            ExtendedComplex wm = wp(-z, g);
            REQUIRE_FALSE(wm.is_inf());
            CHECK(std::abs(w.value() - wm.value()) / scale < 1e-10);

            // oddness of the derivative
            ExtendedComplex d = wp_prime(z, g);
            ExtendedComplex dm = wp_prime(-z, g);
            REQUIRE_FALSE(d.is_inf());
            REQUIRE_FALSE(dm.is_inf());
            CHECK(std::abs(d.value() + dm.value()) /
                      std::max(1.0, std::abs(d.value())) <
                  1e-10);

            // double periodicity over the original generators
            cd shift = double(mn(rng)) * lat.w1() + double(mn(rng)) * lat.w2();
            ExtendedComplex ws = wp(z + shift, g);
            REQUIRE_FALSE(ws.is_inf());
            CHECK(std::abs(w.value() - ws.value()) / scale < 1e-10);
        }
    }
}

TEST_CASE("wp satisfies its differential equation") {
    std::mt19937 rng(90210);
    for (const Lattice& lat : test_lattices()) {
        EllipticFunction f(lat);
        for (int i = 0; i < 1000; ++i) {
            cd z = testsup::random_cell_point(rng, lat, 0.02);
            ExtendedComplex p = wp(z, f);
            ExtendedComplex dp = wp_prime(z, f);
            REQUIRE_FALSE(p.is_inf());
            REQUIRE_FALSE(dp.is_inf());
            cd w = p.value();
            cd lhs = dp.value() * dp.value();
            cd rhs = 4.0 * w * w * w - lat.g2() * w - lat.g3();
            double den = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            CHECK(std::abs(lhs - rhs) / den < 1e-9);
        }
    }
}

TEST_CASE("truncation order is converged at the default") {
    std::mt19937 rng(5150);
    for (const Lattice& lat : test_lattices()) {
        EllipticFunction lo(lat, 40);
        EllipticFunction hi(lat, 80);
        for (int i = 0; i < 100; ++i) {
            cd z = testsup::random_cell_point(rng, lat, 0.05);
            cd a = wp(z, lo).value();
            cd b = wp(z, hi).value();
            CHECK(std::abs(a - b) / std::max(1.0, std::abs(b)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(EllipticFunction(test_lattices()[0], 4), std::invalid_argument);
}

TEST_CASE("critical values and the degenerate cubic") {
    Lattice sq(cd(1.0, 0.0), cd(0.0, 1.0));
    EllipticFunction f(sq);

    CHECK(std::abs(f.e1() - testsup::kE1Square) < 1e-9);
    CHECK(std::abs(f.e2()) < 1e-10);
    CHECK(std::abs(f.e1() + f.e3()) < 1e-9);
    CHECK(std::abs(f.e1() - std::sqrt(sq.g2()) / 2.0) < 1e-10);

    // wp' vanishes at the half periods
    CHECK(std::abs(wp_prime(cd(0.5, 0.0), f).value()) < 1e-9);
    CHECK(std::abs(wp(cd(0.5, 0.5), f).value() - f.e2()) < 1e-10);

    for (const Lattice& lat : test_lattices()) {
        EllipticFunction g(lat);
        cd sum = g.e1() + g.e2() + g.e3();
        CHECK(std::abs(sum) < 1e-10);
        for (double r : g.cubic_residuals()) CHECK(r < 1e-8);
    }

    // generic lattice: all three critical values distinct
    EllipticFunction gen(test_lattices()[1]);
    CHECK(std::abs(gen.e1() - gen.e2()) > 1e-3);
    CHECK(std::abs(gen.e2() - gen.e3()) > 1e-3);
    CHECK(std::abs(gen.e1() - gen.e3()) > 1e-3);
}

TEST_CASE("lattice point enumeration in disks") {
    Lattice sq(cd(1.0, 0.0), cd(0.0, 1.0));
    CHECK(lattice_points_in_disk(sq, cd(0.0, 0.0), 1.0).size() == 5);
    CHECK(lattice_points_in_disk(sq, cd(0.0, 0.0), 0.5).size() == 1);
    CHECK(lattice_points_in_disk(sq, cd(0.5, 0.5), 0.5).size() == 0);

    // brute force oracle on a skewed lattice
    Lattice skew(cd(0.7, -0.2), cd(0.3, 0.9));
    cd center(1.3, -0.8);
    double r = 4.1;
    std::vector<cd> brute;
    for (int m = -60; m <= 60; ++m)
        for (int n = -60; n <= 60; ++n) {
            cd p = double(m) * skew.w1() + double(n) * skew.w2();
            if (std::abs(p - center) <= r) brute.push_back(p);
        }
    auto got = lattice_points_in_disk(skew, center, r);
    REQUIRE(got.size() == brute.size());
    for (const cd& p : got) {
        bool found = false;
        for (const cd& q : brute)
            if (std::abs(p - q) < 1e-9) { found = true; break; }
        CHECK(found);
    }

    // Gauss circle law: count ~ pi r^2 / covolume
    for (const Lattice& lat : test_lattices()) {
        double R = 1000.0;
        long long n = lattice_point_count_in_disk(lat, cd(0.3, 0.2), R);
        double expect = M_PI * R * R / lat.area();
        CHECK(std::abs(double(n) / expect - 1.0) < 0.01);
    }
}

#pragma once

#include <array>
#include <vector>

#include "escdim/extended_complex.hpp"
#include "escdim/lattice.hpp"

namespace escdim {

// moduli beyond this are normalized to ∞ by every evaluator in the library,
// so a value this large is already "the pole" as far as iteration goes
constexpr double kOverflowThreshold = 1e15;

// Weierstrass ℘ evaluator for one lattice. Immutable after construction: the
// half-shell point table, the truncation-tail corrections and the critical
// values are all cached eagerly, so evaluation is pure and reentrant.
//
// Evaluation strategy: reduce the argument to the centered fundamental cell,
// sum the symmetrized pairs 1/(z-w)^2 + 1/(z+w)^2 - 2/w^2 over square shells
// max(|m|,|n|) <= M of the reduced basis, then add the tail corrections
// Σ_{j=1..5} (2j+1) z^{2j} (G_{2j+2} - P_{2j+2}(M)), where P_{2k}(M) is the
// truncated Eisenstein sum. The corrections cancel the slowly decaying part
// of the tail analytically, leaving a truncation error of order z^{12} times
// the w^{-14} tail — already below 1e-12 at the minimal M = 8.
class EllipticFunction {
public:
    explicit EllipticFunction(Lattice lat, int truncation = 40,
                              double eps_pole_rel = 1e-8);

    const Lattice& lattice() const { return lat_; }
    int truncation() const { return M_; }
    // absolute pole-proximity threshold (eps_pole_rel * cell diameter)
    double eps_pole() const { return eps_pole_; }

    cd e1() const { return e_[0]; }  // ℘(ω₁/2)
    cd e2() const { return e_[1]; }  // ℘((ω₁+ω₂)/2)
    cd e3() const { return e_[2]; }  // ℘(ω₂/2)
    const std::array<double, 3>& cubic_residuals() const { return cubic_res_; }

    // internal tables, exposed for the evaluators below
    const std::vector<cd>& shell_points() const { return w_; }
    const std::vector<cd>& shell_inv_sq() const { return tw2_; }
    const std::array<cd, 5>& tails() const { return T_; }

private:
    Lattice lat_;
    int M_;
    double eps_pole_;
    std::vector<cd> w_;    // one representative per ±w pair, shells 1..M
    std::vector<cd> tw2_;  // 2/w^2 for each representative
    std::array<cd, 5> T_;  // G_{2k} - P_{2k}(M) for 2k = 4, 6, 8, 10, 12
    cd e_[3];
    std::array<double, 3> cubic_res_{};
};

// ℘(z); returns infinity within eps_pole of a lattice point or when the
// evaluated modulus exceeds 1e15. Even and doubly periodic.
ExtendedComplex wp(cd z, const EllipticFunction& f);

// ℘'(z); termwise-differentiated sum, odd, triple pole at lattice points.
ExtendedComplex wp_prime(cd z, const EllipticFunction& f);

struct CriticalValues {
    cd e1, e2, e3;  // the fourth critical value is ∞ (the double pole)
    std::array<double, 3> cubic_residual;  // |4e³ - g2·e - g3| per value
};

CriticalValues critical_values(const EllipticFunction& f);

}  // namespace escdim

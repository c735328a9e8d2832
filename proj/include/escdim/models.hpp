#pragma once

// Catalog of model functions built from the Weierstrass p-function composed
// with explicit inner maps (exp, arccosh, fractional powers, integer-power
// lifts) plus a two-lattice gluing skeleton. Every model exposes evaluation
// on the extended plane and an exact pole inventory with local leading
// coefficients.

#include <memory>
#include <string>
#include <vector>

#include "escdim/elliptic.hpp"
#include "escdim/extended_complex.hpp"
#include "escdim/interpolation.hpp"
#include "escdim/lattice.hpp"

namespace escdim {

// One pole: f(z) ~ (b/(z-a))^multiplicity near a, with b_abs = |b| (the
// classical residue magnitude when the pole is simple). lambda records the
// lattice point the pole pulls back. approximate marks glued-strip poles
// whose location comes from a 1-D solve instead of a closed form.
struct PoleDatum {
    cd a;
    int multiplicity = 2;
    double b_abs = 1.0;
    cd lambda;
    bool approximate = false;
};

enum class Branch { plus, minus };

class ModelFunction {
public:
    virtual ~ModelFunction() = default;
    // seam (optional): set to true when z lies exactly on a branch-cut ray
    // where the model is discontinuous; never cleared.
    virtual ExtendedComplex eval(cd z, bool* seam = nullptr) const = 0;
    // All poles with |a| <= r, sorted by (|a|, arg a), spot-verified against
    // the local expansion. Throws length_error when the inventory would be
    // impractically large (use the counting interfaces instead).
    virtual std::vector<PoleDatum> poles_in_disk(double r) const = 0;
    // Σ multiplicities of poles with |a| <= r. The default sums the inventory;
    // the lattice-backed models count by enumeration alone and survive much
    // larger radii before throwing length_error.
    virtual long long pole_count_in_disk(double r) const;
    virtual std::string kind() const = 0;
};

// |b| recomputed and cross-checked by the limit |f(z)(z-a)^m| along four
// approach directions; throws "degenerate pole" for a non-finite or zero
// coefficient and "pole verification failed" on mismatch. Approximate poles
// and poles whose probe offset would vanish in double precision are returned
// unchecked.
double leading_coefficient(const ModelFunction& m, const PoleDatum& p);

// z -> p(z). Order-2 building block; poles at the lattice points, |b| = 1.
class PlainWp : public ModelFunction {
public:
    explicit PlainWp(Lattice lat, int truncation = 40);
    ExtendedComplex eval(cd z, bool* seam = nullptr) const override;
    std::vector<PoleDatum> poles_in_disk(double r) const override;
    long long pole_count_in_disk(double r) const override;
    std::string kind() const override { return "plain-wp"; }
    const EllipticFunction& elliptic() const { return f_; }

private:
    EllipticFunction f_;
};

// z -> p(e^z + c). Poles at log(lambda - c) + 2*pi*i*k over all branches;
// |b| = 1/|lambda - c| = e^{-Re a}. When e^z overflows the double range the
// inner point is off every chart we can represent and eval returns infinity.
class WpExp : public ModelFunction {
public:
    WpExp(Lattice lat, cd c, int truncation = 40);
    ExtendedComplex eval(cd z, bool* seam = nullptr) const override;
    std::vector<PoleDatum> poles_in_disk(double r) const override;
    long long pole_count_in_disk(double r) const override;
    std::string kind() const override { return "wp-exp"; }
    cd c() const { return c_; }
    const EllipticFunction& elliptic() const { return f_; }

private:
    EllipticFunction f_;
    cd c_;
};

// z -> p(phi(z)) with phi(z) = log(z + sqrt(z-1) sqrt(z+1)), the conformal
// map of the cut plane onto the half-strip {x > 0, |y| < pi}. Requires the
// lattice generated by 1 and 2*pi*i. Poles at cosh(m): double with
// |b| = sinh(m) for m >= 1, simple at z = 1 with residue 1/2. Values on the
// cut (-inf, 1] agree from both sides, so no seam flag is raised.
class WpCosh : public ModelFunction {
public:
    explicit WpCosh(Lattice lat, int truncation = 40);
    ExtendedComplex eval(cd z, bool* seam = nullptr) const override;
    std::vector<PoleDatum> poles_in_disk(double r) const override;
    std::string kind() const override { return "wp-cosh"; }
    const EllipticFunction& elliptic() const { return f_; }

private:
    EllipticFunction f_;
};

// z -> p(h(z) + c) with h(z) = z^{rho/2}. The plus branch is the principal
// power; the minus branch is conj(h(conj z)), which differs from it only on
// the negative real axis (the seam), where eval raises the seam flag. Poles
// at a = (lambda-c)^{2/rho} for lambda-c inside the open sector
// |arg| < rho*pi/2, with |b| = (2/rho)|a|^{1-rho/2}. rho = 2 is admitted as
// the identity inner map. c = 0 is admitted verbatim (the origin is then a
// pole only for rho = 2; for rho < 2 the origin is a branch singularity and
// is left out of the inventory).
class WpPower : public ModelFunction {
public:
    WpPower(Lattice lat, double rho, cd c, Branch branch = Branch::plus,
            int truncation = 40);
    ExtendedComplex eval(cd z, bool* seam = nullptr) const override;
    std::vector<PoleDatum> poles_in_disk(double r) const override;
    long long pole_count_in_disk(double r) const override;
    std::string kind() const override { return "wp-power"; }
    double rho() const { return rho_; }
    cd c() const { return c_; }
    Branch branch() const { return branch_; }
    const EllipticFunction& elliptic() const { return f_; }

private:
    EllipticFunction f_;
    double rho_;
    cd c_;
    Branch branch_;
};

// z -> inner(z^N). Poles are the N-th root fibers of the inner poles with
// |b_g| = |b_f| / (N |a_g|^{N-1}); an inner pole at the origin lifts to one
// pole of multiplicity m*N with b_abs = b_f^{1/N}.
class PowerLift : public ModelFunction {
public:
    PowerLift(std::shared_ptr<const ModelFunction> inner, int n);
    ExtendedComplex eval(cd z, bool* seam = nullptr) const override;
    std::vector<PoleDatum> poles_in_disk(double r) const override;
    std::string kind() const override;
    int n() const { return n_; }
    const ModelFunction& inner() const { return *inner_; }

private:
    std::shared_ptr<const ModelFunction> inner_;
    int n_;
};

// Two order-2 models glued along the real axis. On each side the correction
// map U(x+iy) = (1-t) chi2(x) + t x + i y, t = min(|y|/(a'-b), 1), applies
// that side's outer boundary diffeomorphism at the seam and fades to the
// identity beyond height a'-b; the upper value is p1(U1(z) + c1), the lower
// p2(U2(z) + c2). Both lattices must have horizontal period 1. Poles beyond
// the correction strips sit exactly at lambda - c_i with |b| = 1; inside
// them the location comes from a monotone 1-D solve and is flagged
// approximate (with b_abs the horizontal-derivative surrogate 1/|dU/dx|).
class GluedOrderTwo : public ModelFunction {
public:
    GluedOrderTwo(Lattice upper, Lattice lower, InterpolationStack h1,
                  InterpolationStack h2, cd c1, cd c2, int truncation = 40);
    ExtendedComplex eval(cd z, bool* seam = nullptr) const override;
    std::vector<PoleDatum> poles_in_disk(double r) const override;
    std::string kind() const override { return "glued-order-two"; }
    const EllipticFunction& upper() const { return upper_; }
    const EllipticFunction& lower() const { return lower_; }
    const InterpolationStack& stack1() const { return h1_; }
    const InterpolationStack& stack2() const { return h2_; }
    cd c1() const { return c1_; }
    cd c2() const { return c2_; }

private:
    EllipticFunction upper_, lower_;
    InterpolationStack h1_, h2_;
    cd c1_, c2_;
};

// Max chordal mismatch across the seam: p1(chi2_up(x) + c1) versus
// p2(chi2_lo(x) + c2) over the given real samples. Zero (to tolerance)
// exactly when the correction data matches; a positive residual is a
// diagnostic, not an error.
double gluing_residual(const GluedOrderTwo& m, const std::vector<double>& samples);

// Offset placed to dodge poles and half-periods for any lattice shape.
inline cd default_offset(const Lattice& lat) {
    return (lat.w1() + lat.w2()) / 4.0;
}

}  // namespace escdim

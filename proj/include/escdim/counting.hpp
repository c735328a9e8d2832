#pragma once

#include <functional>
#include <vector>

#include "escdim/extended_complex.hpp"
#include "escdim/models.hpp"

namespace escdim {

// One radius of a Nevanlinna table. n counts poles with multiplicity in
// |z| <= r (an exact integer while the census is enumerable; +inf once the
// count itself overflows the double range), log_n stays finite whenever
// n > 0, N is the integrated counting function, m the proximity term and
// T = m + N.
struct CountingSample {
    double r = 0.0;
    double n = 0.0;
    double log_n = 0.0;
    double N = 0.0;
    double m = 0.0;
    double T = 0.0;
};

struct OrderEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;  // rms residual of the log-log fit
    double r_lo = 0.0;  // radius window actually used
    double r_hi = 0.0;
    int count = 0;  // radii entering the fit
};

// Σ multiplicities of the poles with |a_j| <= r.
long long count_poles(const ModelFunction& f, double r);

// Multiplicity sitting exactly at the origin — n(0) in the Nevanlinna sense.
double origin_multiplicity(const ModelFunction& f);

// log n(r), usable past the radii where the census itself becomes
// astronomically large. Exact (log of count_poles) while enumeration is
// affordable; for wp-exp beyond that it switches to the pole-density
// asymptotic: poles pull back lattice points through e^z, so their density
// at a is |e^a|^2/area and
//   n(r) ~ C e^{2r} J(r),  J(r) = int_0^{2r} e^{-2u} sqrt(u(2r-u)) du.
// The asymptotic branch is anchored to the exact count at the switch radius,
// so the two branches agree there by construction. Construct once per model;
// the anchor census costs a few million enumeration steps.
class LogCounter {
public:
    explicit LogCounter(const ModelFunction& f);
    double log_n(double r) const;  // -infinity when n(r) = 0
    double n(double r) const;  // exact count, or exp(log_n) (may be +inf)

private:
    const ModelFunction* f_;
    double r_switch_ = 0.0;  // 0: always exact
    double anchor_ = 0.0;  // log n(r_switch) minus the asymptotic there
};

// One-shot convenience around LogCounter.
double count_poles_log(const ModelFunction& f, double r);

// n(t) as a step grid with every jump radius listed twice — (s, n-) then
// (s, n+) — which is what makes the trapezoid quadrature below exact. n
// includes the origin multiplicity n0; the final entry carries the level at
// the cutoff radius.
struct StepGrid {
    std::vector<double> t;
    std::vector<double> n;
    double n0 = 0.0;
};

StepGrid exact_jump_grid(const std::vector<PoleDatum>& poles, double r);

// N(r) = int_0^r (n(t) - n0)/t dt + n0 log r by the trapezoid rule in log t
// over the supplied grid. Grid points beyond r are clipped (linear
// interpolation in log t to the cut) and a grid ending short of r is carried
// flat to r. Exact for piecewise-constant n when the jump radii are supplied
// doubled (exact_jump_grid); returns 0 when r lies below the whole grid and
// n0 = 0.
double integrated_counting(const std::vector<double>& t,
                           const std::vector<double>& n, double n0, double r);

// The quadrature-free closed form Σ mult·log(r/|a_j|) over 0 < |a_j| <= r
// plus n0·log r with n0 read off the poles at the origin.
double integrated_counting_exact(const std::vector<PoleDatum>& poles,
                                 double r);

struct ProximityResult {
    double value = 0.0;
    double r_used = 0.0;
    int nudges = 0;
};

// m(r) = (1/2pi) int log+ |f(r e^{i theta})| d theta by the q-point
// trapezoid rule (equal weights — the integrand is periodic). A circle that
// meets a pole (infinite sample) is nudged outward by the factor 1 + 1e-6,
// at most eight times, and the radius actually used is reported.
ProximityResult proximity(const ModelFunction& f, double r, int q = 4096);
ProximityResult proximity_of(const std::function<ExtendedComplex(cd)>& f,
                             double r, int q = 4096);

// Least-squares slope of log n against log r over the samples with r inside
// [r_lo, r_hi] and n > 0. Fewer than 5 usable radii -> invalid_argument
// "window too small".
OrderEstimate estimate_order(const std::vector<CountingSample>& samples,
                             double r_lo, double r_hi);

// liminf-style variant: the smallest slope over all suffix windows with at
// least 5 usable radii.
OrderEstimate lower_order(const std::vector<CountingSample>& samples);

// Everything one Nevanlinna characteristic T(r) = m(r) + N(r) needs: the map
// for the proximity term, the moduli of its poles (repeated with
// multiplicity, origin excluded) for the counting term, and the origin
// multiplicity. The callable must outlive the struct's use.
struct CharacteristicInput {
    std::function<ExtendedComplex(cd)> value;
    std::vector<double> pole_moduli;
    double n0 = 0.0;
};

double characteristic(const CharacteristicInput& in, double r, int q = 4096);

// Characteristic input of the model itself (poles from the inventory).
CharacteristicInput model_characteristic(const ModelFunction& f,
                                         double r_max);

// Characteristic input of 1/(f - a) for plain-wp: its poles are the a-points
// of f, found by Newton refinement from a seed grid over one fundamental
// cell and replicated over the lattice. A critical value a gives the one
// double a-point per cell; total multiplicity per cell must come out 2 (the
// degree), anything else throws.
CharacteristicInput plain_wp_apoint_characteristic(const PlainWp& f, cd a,
                                                   double r_max);

// max over the radii of |T(r,f) - T(r, 1/(f-a))|. The first fundamental
// theorem makes this O(1); only boundedness is ever asserted, never decay.
// The a-point census behind T(r, 1/(f-a)) is exact for plain-wp; any other
// kind is accepted only when a coarse scan finds the a-level set empty
// (constant test stubs), and refused otherwise.
double fft_residual(const ModelFunction& f, cd a,
                    const std::vector<double>& radii, int q = 4096);

// Full table on a log grid with per_decade radii per decade, endpoints
// included. The N column is exact (jump-radius integration) whenever the
// census up to r_hi stays affordable, and anchored trapezoid accumulation
// over the sample grid otherwise. with_proximity = false records m = 0 —
// for maps like wp-exp whose modulus overflows the double range on large
// circles, where the proximity integrand is not computable anyway.
std::vector<CountingSample> make_counting_samples(const ModelFunction& f,
                                                  double r_lo, double r_hi,
                                                  int per_decade = 64,
                                                  int q = 4096,
                                                  bool with_proximity = true);

}  // namespace escdim

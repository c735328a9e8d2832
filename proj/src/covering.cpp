#include "escdim/covering.hpp"

#include <cmath>
#include <stdexcept>

#include "escdim/elliptic.hpp"

namespace escdim {

std::pair<double, double> koebe_value_bounds(double deriv, double r,
                                             double la) {
    if (!(la > 0.0 && la < 1.0))
        throw std::invalid_argument("lambda must lie in (0,1)");
    if (!(deriv > 0.0) || !(r > 0.0))
        throw std::invalid_argument("deriv and r must be positive");
    double lo = la / ((1.0 + la) * (1.0 + la));
    double hi = la / ((1.0 - la) * (1.0 - la));
    return {lo * deriv * r, hi * deriv * r};
}

std::pair<double, double> koebe_derivative_bounds(double deriv, double la) {
    if (!(la > 0.0 && la < 1.0))
        throw std::invalid_argument("lambda must lie in (0,1)");
    if (!(deriv > 0.0))
        throw std::invalid_argument("deriv must be positive");
    double lo = (1.0 - la) / std::pow(1.0 + la, 3.0);
    double hi = (1.0 + la) / std::pow(1.0 - la, 3.0);
    return {lo * deriv, hi * deriv};
}

Disk koebe_quarter(cd image_center, double deriv, double r) {
    if (!(deriv > 0.0) || !(r > 0.0))
        throw std::invalid_argument("deriv and r must be positive");
    return {image_center, deriv * r / 4.0};
}

CoverComponent component_bounds(const PoleDatum& p, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    if (!(p.b_abs > 0.0)) throw std::invalid_argument("degenerate pole");
    double s = std::sqrt(R);
    return {p.a, p.b_abs, R, p.b_abs / (4.0 * s), 2.0 * p.b_abs / s};
}

double branch_derivative_bound(double b_abs, double z_mod, double c1) {
    if (!(z_mod > 0.0)) throw std::invalid_argument("|z| must be positive");
    if (!(b_abs > 0.0) || !(c1 > 0.0))
        throw std::invalid_argument("coefficients must be positive");
    return c1 * b_abs / std::pow(z_mod, 1.5);
}

std::pair<double, double> chain_diameter(const BranchChain& chain, double R) {
    if (chain.poles.empty()) throw std::invalid_argument("empty chain");
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    if (!(chain.c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
    double s = std::sqrt(R);
    double c1pow = std::pow(chain.c1, double(chain.poles.size() - 1));
    double eu = c1pow * (4.0 / s) * chain.poles.front().b_abs;
    double sp = c1pow * (32.0 / s);
    for (size_t k = 0; k < chain.poles.size(); ++k) {
        const PoleDatum& p = chain.poles[k];
        double am = std::abs(p.a);
        if (am < R) throw std::domain_error("chain leaves B(R)");
        double factor = p.b_abs / std::pow(am, 1.5);
        if (k > 0) eu *= factor;
        sp *= factor;
    }
    return {eu, sp};
}

double escape_radius_floor(const ModelFunction& m) {
    std::vector<double> sv;
    auto add_critical = [&](const EllipticFunction& f) {
        sv.push_back(std::abs(f.e1()));
        sv.push_back(std::abs(f.e2()));
        sv.push_back(std::abs(f.e3()));
    };
    auto add_value = [&](ExtendedComplex v) {
        if (!v.is_inf()) sv.push_back(std::abs(v.value()));
    };
    if (const auto* p = dynamic_cast<const PlainWp*>(&m)) {
        add_critical(p->elliptic());
    } else if (const auto* p = dynamic_cast<const WpExp*>(&m)) {
        add_critical(p->elliptic());
        // asymptotic value along Re z -> -infinity: e^z + c -> c
        add_value(wp(p->c(), p->elliptic()));
    } else if (const auto* p = dynamic_cast<const WpPower*>(&m)) {
        add_critical(p->elliptic());
        // the branch point at the origin maps to c (absent for rho = 2,
        // where the inner map is the identity)
        if (p->rho() < 2.0) add_value(wp(p->c(), p->elliptic()));
    } else if (const auto* p = dynamic_cast<const WpCosh*>(&m)) {
        add_critical(p->elliptic());
        // cosh has critical points at +-1; arccosh(-1) = i pi, while
        // arccosh(1) = 0 lands on the pole and contributes no finite value
        add_value(wp(cd(0.0, M_PI), p->elliptic()));
    } else {
        throw std::invalid_argument("no escape-radius floor for this kind");
    }
    double worst = 0.0;
    for (double s : sv) worst = std::max(worst, s);
    return 4.0 * worst;
}

}  // namespace escdim

#include "subgrowth/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subgrowth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Antiderivative of (1+s)^-(theta+1): P(b) - P(a) gives the mass on [a,b).
double power_primitive(double theta, double s) {
    if (theta == 0.0) return std::log1p(s);
    return -std::pow(1.0 + s, -theta) / theta;
}

double tabulated_value(const DensityComponent& d, double s) {
    const auto& g = d.grid;
    const auto& v = d.values;
    if (s < g.front() || s > g.back()) return 0.0;
    if (s == g.front()) return v.front();
    if (s == g.back()) return v.back();
    auto it = std::upper_bound(g.begin(), g.end(), s);
    std::size_t i = static_cast<std::size_t>(it - g.begin()) - 1;
    double w = (s - g[i]) / (g[i + 1] - g[i]);
    return v[i] + w * (v[i + 1] - v[i]);
}

// Exact integral of the piecewise-linear interpolant over [a, b].
double tabulated_integral(const DensityComponent& d, double a, double b) {
    const auto& g = d.grid;
    a = std::max(a, g.front());
    b = std::min(b, g.back());
    if (a >= b) return 0.0;
    double total = 0.0;
    auto it = std::upper_bound(g.begin(), g.end(), a);
    std::size_t i = static_cast<std::size_t>(it - g.begin());
    if (i > 0) --i;
    double lo = a;
    for (; i + 1 < g.size() && lo < b; ++i) {
        double hi = std::min(b, g[i + 1]);
        if (hi <= g[i]) continue;
        double flo = tabulated_value(d, lo);
        double fhi = (hi == g[i + 1]) ? d.values[i + 1] : tabulated_value(d, hi);
        total += 0.5 * (flo + fhi) * (hi - lo);
        lo = hi;
    }
    return total;
}

}  // namespace

bool DensityComponent::finite() const {
    if (kind == Kind::Power) return theta > 0.0;
    return true;
}

double DensityComponent::interval_mass(double a, double b) const {
    if (!(a >= 0.0) || !(b >= a))
        throw std::invalid_argument("interval_mass: need 0 <= a <= b");
    if (scale == 0.0 || a == b) return 0.0;
    switch (kind) {
        case Kind::Exponential:
            // int_a^b e^{-theta s} ds = (e^{-theta a} - e^{-theta b}) / theta
            return scale * std::exp(-theta * a) * (-std::expm1(-theta * (b - a))) / theta;
        case Kind::Power:
            return scale * (power_primitive(theta, b) - power_primitive(theta, a));
        case Kind::Tabulated:
            return scale * tabulated_integral(*this, a, b);
    }
    return 0.0;
}

double DensityComponent::value(double s) const {
    if (s < 0.0) throw std::invalid_argument("density value: s must be nonnegative");
    switch (kind) {
        case Kind::Exponential:
            return scale * std::exp(-theta * s);
        case Kind::Power:
            return scale * std::pow(1.0 + s, -(theta + 1.0));
        case Kind::Tabulated:
            return scale * tabulated_value(*this, s);
    }
    return 0.0;
}

double DensityComponent::tail(double t) const {
    switch (kind) {
        case Kind::Exponential:
            return scale * std::exp(-theta * t) / theta;
        case Kind::Power:
            if (theta <= 0.0) return kInf;
            return scale * std::pow(1.0 + t, -theta) / theta;
        case Kind::Tabulated:
            return scale * tabulated_integral(*this, t, grid.back());
    }
    return 0.0;
}

DensityComponent exponential_density(double theta, double scale) {
    if (theta <= 0.0) throw std::invalid_argument("exponential density: theta must be positive");
    if (scale < 0.0) throw std::invalid_argument("density scale must be nonnegative");
    DensityComponent d;
    d.kind = DensityComponent::Kind::Exponential;
    d.theta = theta;
    d.scale = scale;
    return d;
}

DensityComponent power_density(double theta, double scale) {
    if (scale < 0.0) throw std::invalid_argument("density scale must be nonnegative");
    DensityComponent d;
    d.kind = DensityComponent::Kind::Power;
    d.theta = theta;
    d.scale = scale;
    return d;
}

DensityComponent tabulated_density(std::vector<double> grid, std::vector<double> values,
                                   double scale) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw std::invalid_argument("tabulated density: grid/values size mismatch");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("tabulated density: grid must be strictly increasing");
    if (grid.front() < 0.0)
        throw std::invalid_argument("tabulated density: grid must be nonnegative");
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("tabulated density: values must be nonnegative");
    if (scale < 0.0) throw std::invalid_argument("density scale must be nonnegative");
    DensityComponent d;
    d.kind = DensityComponent::Kind::Tabulated;
    d.grid = std::move(grid);
    d.values = std::move(values);
    d.scale = scale;
    return d;
}

Measure::Measure(std::vector<Atom> atoms, std::vector<DensityComponent> densities,
                 std::optional<double> support_bound)
    : atoms_(std::move(atoms)),
      densities_(std::move(densities)),
      support_bound_(support_bound) {
    for (const auto& a : atoms_) {
        if (a.location < 0.0) throw std::invalid_argument("atom location must be nonnegative");
        if (a.mass < 0.0) throw std::invalid_argument("atom mass must be nonnegative");
        if (support_bound_ && a.location > *support_bound_)
            throw std::invalid_argument("atom location exceeds support bound");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    for (const auto& d : densities_)
        if (!d.finite()) finite_ = false;
}

Mass Measure::total_mass() const {
    if (!finite_) return {kInf, false};
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass;
    for (const auto& d : densities_) m += d.tail(0.0);
    return {m, true};
}

double Measure::tail_mass(double t) const {
    if (t < 0.0) throw std::invalid_argument("tail_mass: t must be nonnegative");
    if (!finite_) throw std::domain_error("tail_mass: infinite-mass measure");
    double m = 0.0;
    for (const auto& a : atoms_)
        if (a.location >= t) m += a.mass;
    for (const auto& d : densities_) m += d.tail(t);
    return m;
}

double Measure::strict_tail(double t) const {
    double m = 0.0;
    for (const auto& a : atoms_)
        if (a.location > t) m += a.mass;
    for (const auto& d : densities_) m += d.tail(t);
    return m;
}

double Measure::subinterval_mass(double a, double b) const {
    if (!(a >= 0.0) || a > b) throw std::invalid_argument("subinterval_mass: need 0 <= a <= b");
    double m = 0.0;
    for (const auto& atom : atoms_)
        if (atom.location >= a && atom.location < b) m += atom.mass;
    for (const auto& d : densities_) m += d.interval_mass(a, b);
    return m;
}

double Measure::truncation_horizon(double eps) const {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("truncation_horizon: eps must lie in (0,1)");
    if (!finite_) throw std::domain_error("truncation_horizon: infinite-mass measure");
    const double total = total_mass().value;
    if (total == 0.0) return 0.0;
    const double target = eps * total;
    if (strict_tail(0.0) <= target) {
        // Only an atom at zero (if anything) can still exceed the target.
        return 0.0;
    }
    double hi = 1.0;
    while (strict_tail(hi) > target) {
        hi *= 2.0;
        if (hi > 1e18) throw std::runtime_error("truncation_horizon: no finite horizon found");
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (strict_tail(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace subgrowth

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace subgrowth {

/// Point mass at a nonnegative time offset.
struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Absolutely continuous part of a measure. Exponential and power kinds have
/// closed-form antiderivatives; tabulated densities are piecewise linear and
/// integrated by the exact trapezoid of the interpolant.
struct DensityComponent {
    enum class Kind { Exponential, Power, Tabulated };

    Kind kind = Kind::Exponential;
    double theta = 1.0;   // rate (exponential) or exponent parameter (power)
    double scale = 1.0;
    std::vector<double> grid;    // tabulated only, strictly increasing
    std::vector<double> values;  // tabulated only, nonnegative

    // Mass on [a, b), 0 <= a <= b. Exact for all kinds.
    double interval_mass(double a, double b) const;
    // Pointwise density value at s >= 0.
    double value(double s) const;
    // Mass on [t, infinity); +inf when the component has infinite mass.
    double tail(double t) const;
    bool finite() const;
};

DensityComponent exponential_density(double theta, double scale = 1.0);
DensityComponent power_density(double theta, double scale = 1.0);
DensityComponent tabulated_density(std::vector<double> grid,
                                   std::vector<double> values,
                                   double scale = 1.0);

// Total mass of a measure, tagged finite or not.
struct Mass {
    double value = 0.0;  // +inf when !finite
    bool finite = true;
};

/// Finite (or explicitly infinite-mass-flagged) nonnegative Borel measure on
/// the half line, decomposed into atoms plus density components. Immutable
/// after construction; all operations are pure.
class Measure {
public:
    Measure() = default;
    Measure(std::vector<Atom> atoms, std::vector<DensityComponent> densities,
            std::optional<double> support_bound = std::nullopt);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityComponent>& densities() const { return densities_; }
    std::optional<double> support_bound() const { return support_bound_; }

    bool empty() const { return atoms_.empty() && densities_.empty(); }
    bool finite() const { return finite_; }

    Mass total_mass() const;

    // mu([t, infinity)); rejects infinite-mass measures.
    double tail_mass(double t) const;

    // mu([a, b)); atoms counted when a <= location < b.
    double subinterval_mass(double a, double b) const;

    // Smallest S with mu((S, infinity)) <= eps * total mass, eps in (0,1).
    double truncation_horizon(double eps) const;

private:
    // mu((t, infinity)): atoms strictly beyond t; densities are atomless so
    // this agrees with tail_mass except at atom locations.
    double strict_tail(double t) const;

    std::vector<Atom> atoms_;
    std::vector<DensityComponent> densities_;
    std::optional<double> support_bound_;
    bool finite_ = true;
};

}  // namespace subgrowth

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subgrowth/growth_transform.hpp"
#include "subgrowth/measure.hpp"
#include "subgrowth/mesh.hpp"
#include "subgrowth/nonlinearity.hpp"

namespace subgrowth {

/// Initial segment psi on [-tau, 0], strictly positive.
struct History {
    double tau = 0.0;
    std::function<double(double)> psi;

    static History constant(double value, double tau = 0.0);
    double operator()(double t) const;
};

/// Trajectory on the mesh plus the metadata the diagnostics need.
struct Solution {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> derivatives;  // the right-hand side, not a difference
    double total_mass = 0.0;          // effective M (lambda > 0 terms only)
    bool mass_finite = true;
    double truncation_horizon = 0.0;  // 0 = convolution never truncated
    double tail_error_bound = 0.0;

    double value_at(double t) const;       // linear interpolation on [0, t_end]
    double derivative_at(double t) const;  // same
};

struct SolverOptions {
    MeshPlan mesh;
    double eps_tail = 1e-6;     // convolution tail cutoff as fraction of mass
    bool allow_infinite_mass = false;
};

/// x'(t) = sum_k [ int mu1_k(ds) f_k(x(t-s)) + int_[0,t] mu2_k(ds) f_k(x(t-s)) ]
///         + forcing(t),   x = psi on [-tau, 0].
/// Explicit Euler predictor with one trapezoid correction; measures entered by
/// product integration (exact subinterval masses, trapezoid of f along the
/// trajectory); exponential mu2 densities advance by an O(1) recursion.
Solution solve_fde_multi(const std::vector<MultiNonlinearTerm>& terms, const History& history,
                         const SolverOptions& opts,
                         std::function<double(double)> forcing = nullptr);

Solution solve_fde(const Measure& mu1, const Measure& mu2, const Nonlinearity& nl,
                   const History& history, const SolverOptions& opts);

/// Exact comparison trajectory y(t) = F^{-1}(M t + F(psi0)) sampled at the
/// given times, with derivatives M f(y).
Solution solve_ode(const Nonlinearity& nl, double mass, double psi0,
                   const std::vector<double>& checkpoints);

/// Equivalent pure Volterra form of a bounded-delay equation: the same measure
/// acting on [0, t] plus the forcing carrying the history,
/// h(t) = int_(t, tau] mu1(ds) f(psi(t - s)) for t < tau, zero after.
struct VolterraForm {
    Measure kernel;
    std::function<double(double)> forcing;
};
VolterraForm convert_dde_to_volterra(const Measure& mu1, const Nonlinearity& nl,
                                     const History& history);

/// Product-trapezoid step weights for an exponential kernel scale*e^{-theta s}:
/// I(t+h) = decay * I(t) + w_old * f(x(t)) + w_new * f(x(t+h)).
struct ExpKernelStep {
    double decay = 0.0;
    double w_old = 0.0;
    double w_new = 0.0;
};
ExpKernelStep exp_kernel_step(double theta, double scale, double h);

struct ConvergenceReport {
    std::vector<double> times;
    std::vector<double> deviations;  // |x_h - x_{h/2}| / x_{h/2}
    double max_deviation = 0.0;
    double estimated_order = 0.0;  // from a quarter-step run when provided
};

/// Pointwise deviation between two runs of the same scenario at different
/// steps; with a third (quarter-step) run, estimates the convergence order.
ConvergenceReport richardson_verify(const Solution& coarse, const Solution& fine,
                                    const std::vector<double>& probe_times,
                                    const Solution* finest = nullptr);

}  // namespace subgrowth

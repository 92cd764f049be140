#pragma once

#include <string>
#include <vector>

#include "subgrowth/growth_transform.hpp"
#include "subgrowth/solver.hpp"

namespace subgrowth {

enum class Verdict { ConvergesToOne, Diverges, Inconclusive };

std::string to_string(Verdict v);

struct Checkpoint {
    double t = 0.0;
    double x = 0.0;
    double dx = 0.0;
    double F_of_x = 0.0;
    double r1 = 0.0;  // F(x(t)) / (M t), or F(x(t))/t when the mass is infinite
    double r2 = 0.0;  // x(t) / F_inv(M t); NaN when the mass is infinite
    double r3 = 0.0;  // log x(t) / log t
    double lyap_direct = 0.0;  // x'(t)/x(t)
    double lyap_log = 0.0;     // log x(t) / t
};

struct GrowthReport {
    std::vector<Checkpoint> points;
    double M = 0.0;
    bool mass_finite = true;
    double tol = 0.0;
    Verdict verdict_r1 = Verdict::Inconclusive;
    Verdict verdict_r2 = Verdict::Inconclusive;
    Verdict verdict_r3 = Verdict::Inconclusive;
};

/// Diagnostic ratios at 8-per-decade geometric checkpoints from t_min to the
/// solution horizon. Verdict converges-to-one: the last 4 checkpoints sit
/// inside the tolerance band with nonincreasing deviation. Verdict diverges:
/// deviations above 1 and increasing across the window (independent of tol,
/// so shrinking tol never flips diverges into convergence).
GrowthReport growth_report(const Solution& sol, const GrowthTransform& gt, double tol,
                           double t_min = 1.0);

struct MassInvarianceResult {
    std::vector<double> finals;  // x(T) per solution
    double max_pairwise_spread = 0.0;  // max |x_i/x_j - 1|
};

/// Final-value comparison across solutions of equal effective mass; throws
/// when the masses disagree beyond 1e-9 relative.
MassInvarianceResult mass_invariance_check(const std::vector<const Solution*>& sols);

/// (log x(T))^(alpha+1) / ((alpha+1) T) at the final checkpoint; the
/// power-kernel scenario with f close to x/(log x)^alpha targets 1/theta.
double rv1_liapunov_check(const Solution& sol, double alpha);

/// Minimum of R2 over checkpoints in the last decade before the horizon.
double liminf_lower_check(const Solution& sol, const GrowthTransform& gt);

/// Geometric checkpoint times, 8 per decade, within [t_min, t_max].
std::vector<double> geometric_checkpoints(double t_min, double t_max);

}  // namespace subgrowth

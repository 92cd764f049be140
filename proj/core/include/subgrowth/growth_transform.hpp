#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "subgrowth/nonlinearity.hpp"

namespace subgrowth {

struct LEstimate {
    double l_sup = 0.0;         // running max of f(x)F(x)/x at the last probe
    double liminf_floor = 0.0;  // min over the tail half of the probes
    bool unbounded = false;     // running max still climbing at the last probe
    std::vector<double> values;
};

/// F(x) = int_1^x du/f(u) and its inverse. Uses closed forms when the
/// nonlinearity carries them; otherwise adaptive Simpson chained along a fixed
/// geometric node grid, so repeated evaluation along an increasing trajectory
/// costs one incremental segment per call and results do not depend on call
/// order (concurrent use is race-free and bitwise identical to serial).
class GrowthTransform {
public:
    explicit GrowthTransform(Nonlinearity source);

    const Nonlinearity& source() const { return source_; }

    double F(double x) const;

    // Monotone bracket expansion + bisection to |F(x) - y| <= 1e-9 max(1,|y|).
    // Throws std::domain_error when y lies below the infimum of F.
    double F_inverse(double y) const;

private:
    double integrand(double u) const;
    double segment_tol(double base, double a, double b) const;
    double grid_node(std::size_t k) const;
    double grid_value(std::size_t k) const;  // caller holds the lock

    Nonlinearity source_;
    mutable std::mutex mu_;
    mutable std::vector<double> node_cache_;  // F at 2^{k/8}, chained from 1
};

/// Running max / liminf floor of f(x)F(x)/x along increasing probes.
LEstimate estimate_L(const GrowthTransform& gt, const std::vector<double>& probes);

/// True when f(x)/x^{1-eps} is numerically nonincreasing on the probe tail.
bool check_power_domination(const Nonlinearity& nl, double eps,
                            const std::vector<double>& probes);

/// GrowthTransform built on the asymptote phi instead of f.
GrowthTransform phi_transform(const Nonlinearity& nl);

}  // namespace subgrowth

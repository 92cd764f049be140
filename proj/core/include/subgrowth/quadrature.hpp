#pragma once

#include <functional>

namespace subgrowth {

/// Adaptive Simpson integral of f over [a, b] to absolute tolerance tol.
/// Throws std::runtime_error when the recursion fails to converge.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 60);

}  // namespace subgrowth

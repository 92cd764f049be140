#pragma once

#include <cstddef>
#include <vector>

namespace subgrowth {

/// Time grid request. With grading on, the step doubles at dyadic block
/// boundaries (capped at t_end/2^12) once t leaves the initial block; every
/// location in `align` must be an integer multiple of the initial step, and
/// the initial block extends past the largest aligned location so delayed
/// lookups inside it land exactly on nodes.
struct MeshPlan {
    double t_end = 0.0;
    double h0 = 1.0 / 64.0;
    bool graded = true;
    double h_max = 0.0;  // 0 = derive t_end/2^12
    std::vector<double> align;
};

/// Strictly increasing grid 0 = t_0 < ... < t_N with t_N >= t_end.
/// Throws std::invalid_argument when the aligned locations are mutually
/// incommensurable or the plan is degenerate.
std::vector<double> build_mesh(const MeshPlan& plan);

}  // namespace subgrowth

#include "subgrowth/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subgrowth {

namespace {

// Euclid on reals with snapping; 0 means no common unit was found.
double float_gcd(double a, double b, double eps) {
    while (b > eps) {
        double r = std::fmod(a, b);
        if (r < eps || b - r < eps) r = 0.0;
        a = b;
        b = r;
    }
    return a;
}

}  // namespace

std::vector<double> build_mesh(const MeshPlan& plan) {
    if (!(plan.t_end > 0.0)) throw std::invalid_argument("mesh: t_end must be positive");
    if (!(plan.h0 > 0.0)) throw std::invalid_argument("mesh: h0 must be positive");

    std::vector<double> align;
    for (double a : plan.align)
        if (a > 0.0) align.push_back(a);

    double h = plan.h0;
    if (!align.empty()) {
        const double biggest = *std::max_element(align.begin(), align.end());
        const double eps = 1e-9 * biggest;
        double g = align.front();
        for (double a : align) g = float_gcd(std::max(g, a), std::min(g, a), eps);
        if (g < 1e-6 * biggest)
            throw std::invalid_argument("mesh: aligned delay locations are incommensurable");
        h = g / std::ceil(g / plan.h0 - 1e-12);
    }

    double h_max = plan.h_max > 0.0 ? plan.h_max : plan.t_end / 4096.0;
    h_max = std::max(h_max, h);

    // First dyadic boundary covers all aligned delays so lookups x(t - a)
    // inside the initial block hit nodes exactly.
    double boundary = 1.0;
    for (double a : align)
        while (boundary < a * (1.0 - 1e-12)) boundary *= 2.0;

    std::vector<double> grid;
    grid.push_back(0.0);
    double block_start = 0.0;
    double h_cur = h;
    std::size_t i = 0;
    while (grid.back() < plan.t_end * (1.0 - 1e-12)) {
        const double t = grid.back();
        if (plan.graded && t >= boundary * (1.0 - 1e-9) && 2.0 * h_cur <= h_max) {
            h_cur *= 2.0;
            block_start = t;
            i = 0;
            while (boundary <= t * (1.0 + 1e-9)) boundary *= 2.0;
        }
        ++i;
        grid.push_back(block_start + static_cast<double>(i) * h_cur);
        if (grid.size() > std::size_t{20} * 1000 * 1000)
            throw std::invalid_argument("mesh: plan produces too many nodes");
    }
    return grid;
}

}  // namespace subgrowth

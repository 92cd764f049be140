#include "subgrowth/growth_transform.hpp"

#include <cmath>
#include <stdexcept>

#include "subgrowth/quadrature.hpp"

namespace subgrowth {

namespace {
// Geometric node spacing 2^(1/8); cache index for x >= 1.
constexpr double kLog2Nodes = 8.0;
}  // namespace

GrowthTransform::GrowthTransform(Nonlinearity source) : source_(std::move(source)) {
    if (!source_.f) throw std::invalid_argument("GrowthTransform: evaluator required");
    node_cache_.push_back(0.0);  // F(1) = 0
}

double GrowthTransform::integrand(double u) const {
    const double fu = eval_f(source_, u);
    const double inv = 1.0 / fu;
    if (!std::isfinite(inv) || inv > 1e300)
        throw std::runtime_error("GrowthTransform: integrand overflow near x=" +
                                 std::to_string(u));
    return inv;
}

double GrowthTransform::grid_node(std::size_t k) const {
    return std::exp2(static_cast<double>(k) / kLog2Nodes);
}

double GrowthTransform::segment_tol(double base, double a, double b) const {
    // Scale by a coarse Simpson estimate of the segment so the tolerance stays
    // reachable when the integrand spans hundreds of orders of magnitude.
    const double coarse =
        (b - a) / 6.0 * (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b));
    return 1e-13 * (1.0 + std::abs(base) + std::abs(coarse));
}

double GrowthTransform::grid_value(std::size_t k) const {
    while (node_cache_.size() <= k) {
        const std::size_t j = node_cache_.size();
        const double a = grid_node(j - 1);
        const double b = grid_node(j);
        const double tol = segment_tol(node_cache_.back(), a, b);
        node_cache_.push_back(node_cache_.back() +
                              adaptive_simpson([this](double u) { return integrand(u); }, a, b,
                                               tol));
    }
    return node_cache_[k];
}

double GrowthTransform::F(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("F: x must be positive");
    if (source_.closed_F) return source_.closed_F(x);
    auto f = [this](double u) { return integrand(u); };
    if (x < 1.0) return -adaptive_simpson(f, x, 1.0, 1e-12);
    const std::size_t k = static_cast<std::size_t>(std::floor(kLog2Nodes * std::log2(x)));
    std::lock_guard<std::mutex> lock(mu_);
    const double base = grid_value(k);
    const double a = grid_node(k);
    if (x == a) return base;
    return base + adaptive_simpson(f, a, x, segment_tol(base, a, x));
}

double GrowthTransform::F_inverse(double y) const {
    if (source_.closed_F_inv) return source_.closed_F_inv(y);
    const double tol = 1e-9 * std::max(1.0, std::abs(y));
    double lo = 1.0, hi = 1.0;
    if (y >= 0.0) {
        while (F(hi) < y) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw std::domain_error("F_inverse: y beyond range of F");
        }
    } else {
        // A quadrature failure while descending means the integrand blew up
        // before F reached y: y lies below the attainable range.
        try {
            while (F(lo) > y) {
                hi = lo;
                lo *= 0.5;
                if (lo < 1e-300)
                    throw std::domain_error("F_inverse: y below the infimum of F");
            }
        } catch (const std::runtime_error&) {
            throw std::domain_error("F_inverse: y below the infimum of F");
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        x = 0.5 * (lo + hi);
        const double fx = F(x);
        if (std::abs(fx - y) <= tol) return x;
        if (fx < y)
            lo = x;
        else
            hi = x;
        if ((hi - lo) <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

LEstimate estimate_L(const GrowthTransform& gt, const std::vector<double>& probes) {
    LEstimate out;
    double running = -1e308;
    double mid_max = -1e308;
    const std::size_t half = probes.size() / 2;
    double tail_min = 1e308;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double x = probes[i];
        const double v = eval_f(gt.source(), x) * gt.F(x) / x;
        out.values.push_back(v);
        running = std::max(running, v);
        if (i < half) mid_max = std::max(mid_max, v);
        if (i >= half) tail_min = std::min(tail_min, v);
    }
    out.l_sup = running;
    out.liminf_floor = tail_min;
    if (!out.values.empty()) {
        const bool still_climbing = out.values.back() >= running * (1.0 - 1e-9);
        out.unbounded = still_climbing && probes.size() >= 4 && running > 1.5 * mid_max;
    }
    return out;
}

bool check_power_domination(const Nonlinearity& nl, double eps,
                            const std::vector<double>& probes) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("check_power_domination: eps must lie in (0,1)");
    double prev = 1e308;
    for (double x : probes) {
        const double v = eval_f(nl, x) / std::pow(x, 1.0 - eps);
        if (v > prev * (1.0 + 1e-9)) return false;
        prev = v;
    }
    return true;
}

GrowthTransform phi_transform(const Nonlinearity& nl) {
    if (!nl.has_asymptote())
        throw std::invalid_argument("phi_transform: nonlinearity has no asymptote");
    Nonlinearity phi;
    phi.name = nl.name + "-asymptote";
    phi.f = nl.asymptote;
    phi.asymptote = nl.asymptote;
    phi.asymptote_is_self = true;
    phi.asym_class = nl.asym_class;
    phi.rv_index = nl.rv_index;
    if (nl.asymptote_is_self) {
        phi.closed_F = nl.closed_F;
        phi.closed_F_inv = nl.closed_F_inv;
    }
    return GrowthTransform(std::move(phi));
}

}  // namespace subgrowth

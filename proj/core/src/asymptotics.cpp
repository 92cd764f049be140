#include "subgrowth/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subgrowth {

namespace {

constexpr int kPerDecade = 8;
constexpr std::size_t kWindow = 4;

Verdict classify(const std::vector<double>& ratios, double tol) {
    if (ratios.size() < kWindow) return Verdict::Inconclusive;
    const std::size_t n = ratios.size();
    // Band-relative slack on the trend test keeps float-level noise (exact
    // inputs, oscillatory tails deep inside the band) from blocking the
    // convergent verdict; the divergent verdict below does not use tol.
    const double slack = std::max(1e-12, 0.01 * tol);
    bool inside = true, nonincreasing = true, increasing = true;
    for (std::size_t i = n - kWindow; i < n; ++i) {
        const double dev = std::abs(ratios[i] - 1.0);
        if (!std::isfinite(dev)) return Verdict::Inconclusive;
        if (dev > tol) inside = false;
        if (i > n - kWindow) {
            const double prev = std::abs(ratios[i - 1] - 1.0);
            if (dev > prev + slack) nonincreasing = false;
            if (dev <= prev) increasing = false;
        }
    }
    if (inside && nonincreasing) return Verdict::ConvergesToOne;
    if (increasing && std::abs(ratios.back() - 1.0) > 1.0) return Verdict::Diverges;
    return Verdict::Inconclusive;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ConvergesToOne: return "converges-to-1";
        case Verdict::Diverges: return "diverges";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<double> geometric_checkpoints(double t_min, double t_max) {
    if (!(t_min > 0.0) || !(t_max >= t_min))
        throw std::invalid_argument("checkpoints: need 0 < t_min <= t_max");
    std::vector<double> out;
    const int k0 = static_cast<int>(std::ceil(kPerDecade * std::log10(t_min) - 1e-9));
    for (int k = k0;; ++k) {
        const double t = std::pow(10.0, static_cast<double>(k) / kPerDecade);
        if (t > t_max * (1.0 + 1e-9)) break;
        out.push_back(std::min(t, t_max));
    }
    return out;
}

GrowthReport growth_report(const Solution& sol, const GrowthTransform& gt, double tol,
                           double t_min) {
    if (!(tol > 0.0)) throw std::invalid_argument("growth_report: tol must be positive");
    GrowthReport rep;
    rep.M = sol.total_mass;
    rep.mass_finite = sol.mass_finite;
    rep.tol = tol;
    const double t_max = sol.times.back();
    std::vector<double> r1s, r2s, r3s;
    for (double t : geometric_checkpoints(t_min, t_max)) {
        Checkpoint cp;
        cp.t = t;
        cp.x = sol.value_at(t);
        cp.dx = sol.derivative_at(t);
        cp.F_of_x = gt.F(cp.x);
        if (sol.mass_finite) {
            cp.r1 = cp.F_of_x / (sol.total_mass * t);
            cp.r2 = cp.x / gt.F_inverse(sol.total_mass * t);
        } else {
            cp.r1 = cp.F_of_x / t;
            cp.r2 = std::numeric_limits<double>::quiet_NaN();
        }
        cp.r3 = std::log(cp.x) / std::log(t);
        cp.lyap_direct = cp.dx / cp.x;
        cp.lyap_log = std::log(cp.x) / t;
        r1s.push_back(cp.r1);
        r2s.push_back(cp.r2);
        r3s.push_back(cp.r3);
        rep.points.push_back(cp);
    }
    rep.verdict_r1 = classify(r1s, tol);
    rep.verdict_r2 = sol.mass_finite ? classify(r2s, tol) : Verdict::Inconclusive;
    rep.verdict_r3 = classify(r3s, tol);
    if (!sol.mass_finite) {
        // Divergence of F(x(t))/t is the claim when the mass is infinite.
        bool increasing = r1s.size() >= kWindow;
        for (std::size_t i = r1s.size() >= kWindow ? r1s.size() - kWindow + 1 : 1;
             i < r1s.size(); ++i)
            if (r1s[i] <= r1s[i - 1]) increasing = false;
        rep.verdict_r1 = increasing ? Verdict::Diverges : Verdict::Inconclusive;
    }
    return rep;
}

MassInvarianceResult mass_invariance_check(const std::vector<const Solution*>& sols) {
    if (sols.size() < 2)
        throw std::invalid_argument("mass_invariance_check: need at least two solutions");
    const double M = sols.front()->total_mass;
    MassInvarianceResult out;
    for (const Solution* s : sols) {
        if (!s->mass_finite || std::abs(s->total_mass - M) > 1e-9 * (1.0 + std::abs(M)))
            throw std::invalid_argument("mass_invariance_check: masses differ");
        out.finals.push_back(s->values.back());
    }
    for (std::size_t i = 0; i < out.finals.size(); ++i)
        for (std::size_t j = i + 1; j < out.finals.size(); ++j)
            out.max_pairwise_spread = std::max(
                out.max_pairwise_spread, std::abs(out.finals[i] / out.finals[j] - 1.0));
    return out;
}

double rv1_liapunov_check(const Solution& sol, double alpha) {
    const double T = sol.times.back();
    const double lx = std::log(sol.values.back());
    return std::pow(lx, alpha + 1.0) / ((alpha + 1.0) * T);
}

double liminf_lower_check(const Solution& sol, const GrowthTransform& gt) {
    const double T = sol.times.back();
    double mn = std::numeric_limits<double>::infinity();
    for (double t : geometric_checkpoints(std::max(1.0, T / 10.0), T)) {
        const double r2 = sol.value_at(t) / gt.F_inverse(sol.total_mass * t);
        mn = std::min(mn, r2);
    }
    return mn;
}

}  // namespace subgrowth

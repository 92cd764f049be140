#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "subgrowth/asymptotics.hpp"

using namespace subgrowth;

namespace {

Solution exact_trajectory(const Nonlinearity& nl, double mass, double t_max) {
    auto times = geometric_checkpoints(1.0, t_max);
    times.insert(times.begin(), 0.0);
    return solve_ode(nl, mass, 1.0, times);
}

}  // namespace

TEST_CASE("exact trajectories earn converging verdicts on every ratio") {
    const std::vector<std::pair<std::string, std::map<std::string, double>>> members = {
        {"power", {{"beta", 0.5}}},
        {"exp-decay", {{"alpha", 1.0}}},
        {"power-log", {{"beta", 0.5}, {"alpha", 1.0}}},
    };
    for (const auto& [name, params] : members) {
        auto nl = make_nonlinearity(name, params);
        GrowthTransform gt(nl);
        auto sol = exact_trajectory(nl, 0.75, 1e6);
        auto rep = growth_report(sol, gt, 0.05);
        CAPTURE(name);
        CHECK(rep.verdict_r1 == Verdict::ConvergesToOne);
        CHECK(rep.verdict_r2 == Verdict::ConvergesToOne);
        CHECK(std::abs(rep.points.back().r1 - 1.0) < 1e-9);
        CHECK(std::abs(rep.points.back().r2 - 1.0) < 1e-6);
        // Sublinear growth has a vanishing exponential rate, measured both as
        // x'/x and as log x / t, each decreasing toward the horizon.
        const auto& pts = rep.points;
        CHECK(pts.back().lyap_direct < 1e-3);
        CHECK(pts.back().lyap_log < 1e-3);
        CHECK(pts.back().lyap_direct < pts[pts.size() / 2].lyap_direct);
        CHECK(pts.back().lyap_log < pts[pts.size() / 2].lyap_log);
    }
}

TEST_CASE("checkpoints run eight per decade") {
    auto cps = geometric_checkpoints(1.0, 100.0);
    CHECK(cps.size() == 17);
    CHECK(cps.front() == doctest::Approx(1.0));
    CHECK(cps.back() == doctest::Approx(100.0));
    CHECK(cps[8] == doctest::Approx(10.0));
    CHECK_THROWS_AS(geometric_checkpoints(10.0, 1.0), std::invalid_argument);
}

TEST_CASE("r3 tracks the polynomial growth exponent") {
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    auto sol = exact_trajectory(nl, 0.75, 1e6);
    auto rep = growth_report(sol, GrowthTransform(nl), 0.05);
    // x = (1 + M t / 2)^2, so R3 approaches 2 with a logarithmic correction;
    // compare against the exact finite-horizon value.
    const double t_last = rep.points.back().t;
    const double expected = 2.0 * std::log1p(0.375 * t_last) / std::log(t_last);
    CHECK(rep.points.back().r3 == doctest::Approx(expected).epsilon(1e-6));
    CHECK(rep.points.back().r3 > 1.8);
}

TEST_CASE("a trajectory far off the clock is flagged as diverging") {
    // Feed a report for f = sqrt(x) a trajectory growing like e^t: R1 blows up.
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    GrowthTransform gt(nl);
    Solution sol;
    sol.total_mass = 1.0;
    for (double t : geometric_checkpoints(1.0, 1e3)) {
        sol.times.push_back(t);
        sol.values.push_back(std::exp(0.05 * t) + t * t);
        sol.derivatives.push_back(0.0);
    }
    auto rep = growth_report(sol, gt, 0.05);
    CHECK(rep.verdict_r1 == Verdict::Diverges);
    // A diverging verdict never flips to convergence as the band tightens.
    for (double tol : {0.01, 1e-4, 1e-8})
        CHECK(growth_report(sol, gt, tol).verdict_r1 == Verdict::Diverges);
}

TEST_CASE("infinite-mass reports use the unnormalized clock and diverge") {
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    GrowthTransform gt(nl);
    Solution sol;
    sol.total_mass = std::numeric_limits<double>::infinity();
    sol.mass_finite = false;
    for (double t : geometric_checkpoints(1.0, 1e3)) {
        sol.times.push_back(t);
        const double x = std::pow(1.0 + 0.5 * std::pow(t, 1.5), 2.0);  // F(x) ~ t^1.5
        sol.values.push_back(x);
        sol.derivatives.push_back(0.0);
    }
    auto rep = growth_report(sol, gt, 0.05);
    CHECK(!rep.mass_finite);
    CHECK(rep.verdict_r1 == Verdict::Diverges);
    CHECK(std::isnan(rep.points.back().r2));
    CHECK(rep.points.back().r1 > rep.points.front().r1);
}

TEST_CASE("mass invariance across equal-mass runs") {
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    auto a = exact_trajectory(nl, 0.5, 1e4);
    auto b = exact_trajectory(nl, 0.5, 1e4);
    auto res = mass_invariance_check({&a, &b});
    CHECK(res.max_pairwise_spread == doctest::Approx(0.0));
    CHECK(res.finals.size() == 2);

    auto c = exact_trajectory(nl, 0.75, 1e4);
    CHECK_THROWS_AS(mass_invariance_check({&a, &c}), std::invalid_argument);
}

TEST_CASE("slowly-decaying-kernel rate statistic recovers the rate constant") {
    // x(t) = exp(((alpha+1) t / theta)^{1/(alpha+1)}) gives exactly 1/theta.
    const double alpha = 2.0, theta = 3.0;
    Solution sol;
    sol.total_mass = 1.0;
    for (double t : geometric_checkpoints(1.0, 1e5)) {
        sol.times.push_back(t);
        sol.values.push_back(std::exp(std::pow((alpha + 1.0) * t / theta, 1.0 / (alpha + 1.0))));
        sol.derivatives.push_back(0.0);
    }
    CHECK(rv1_liapunov_check(sol, alpha) == doctest::Approx(1.0 / theta).epsilon(1e-9));
}

TEST_CASE("last-decade floor of the tracking ratio") {
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    auto sol = exact_trajectory(nl, 1.0, 1e4);
    const double floor = liminf_lower_check(sol, GrowthTransform(nl));
    CHECK(floor > 0.99);
    CHECK(floor <= 1.0 + 1e-6);
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "subgrowth/nonlinearity.hpp"

using namespace subgrowth;

namespace {

std::vector<double> geometric_probes(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i <= n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
    return out;
}

const std::vector<std::pair<std::string, std::map<std::string, double>>> kRegistry = {
    {"power", {{"beta", 0.5}}},
    {"power-log", {{"beta", 0.5}, {"alpha", 1.0}}},
    {"x-over-log", {{"alpha", 2.0}}},
    {"exp-decay", {{"alpha", 1.0}}},
    {"power-decay", {{"beta", 1.0}}},
    {"rv-osc", {}},
    {"exp-sqrt-log", {}},
    {"constant", {{"c", 2.0}}},
    {"spiky", {}},
};

}  // namespace

TEST_CASE("every registry member is positive and finite across eight decades") {
    for (const auto& [name, params] : kRegistry) {
        auto nl = make_nonlinearity(name, params);
        CAPTURE(name);
        for (double x : geometric_probes(1e-6, 1e8, 60)) {
            const double y = eval_f(nl, x);
            CHECK(std::isfinite(y));
            CHECK(y > 0.0);
        }
        CHECK(std::isfinite(nl.f(0.0)));
    }
}

TEST_CASE("closed growth transforms are mutually inverse where provided") {
    for (const auto& [name, params] : kRegistry) {
        auto nl = make_nonlinearity(name, params);
        if (!nl.closed_F || !nl.closed_F_inv) continue;
        CAPTURE(name);
        for (double y : {0.0, 0.5, 3.0, 100.0, 1e6}) {
            const double x = nl.closed_F_inv(y);
            CHECK(nl.closed_F(x) == doctest::Approx(y).epsilon(1e-12));
        }
    }
}

TEST_CASE("asymptote ratio f/phi tends to one when an asymptote is declared") {
    for (const auto& [name, params] : kRegistry) {
        auto nl = make_nonlinearity(name, params);
        if (!nl.has_asymptote()) continue;
        CAPTURE(name);
        const auto ratios = check_fasym(nl, geometric_probes(1e4, 1e8, 8));
        for (double r : ratios) CHECK(r == doctest::Approx(1.0).epsilon(0.2));
        CHECK(std::abs(ratios.back() - 1.0) <= std::abs(ratios.front() - 1.0) + 1e-9);
    }
}

TEST_CASE("regular-variation index estimates match the declared indices") {
    auto probes = geometric_probes(1e6, 1e10, 8);
    auto check_idx = [&](const char* name, std::map<std::string, double> params,
                         double expected, double tol) {
        auto est = rv_index_estimate(make_nonlinearity(name, params), probes);
        CAPTURE(name);
        CHECK(est.is_rv);
        CHECK(std::abs(est.index - expected) <= tol);
    };
    // Slowly varying corrections decay like 1/log x, so the finite-probe
    // estimates carry visible bias; the tolerances reflect that.
    check_idx("power", {{"beta", 0.3}}, 0.3, 1e-9);
    check_idx("power-log", {{"beta", 0.5}, {"alpha", 1.0}}, 0.5, 0.08);
    check_idx("x-over-log", {{"alpha", 2.0}}, 1.0, 0.15);
    check_idx("power-decay", {{"beta", 2.0}}, -2.0, 0.01);
    check_idx("exp-sqrt-log", {}, 0.0, 0.15);
    check_idx("rv-osc", {}, 0.0, 0.25);
    // exp-decay is not regularly varying: the log-ratio runs away linearly.
    auto est = rv_index_estimate(make_nonlinearity("exp-decay", {{"alpha", 1.0}}),
                                 geometric_probes(10.0, 1e3, 6));
    CHECK(!est.is_rv);
}

TEST_CASE("evaluator guards") {
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    CHECK_THROWS_AS(eval_f(nl, -1.0), std::invalid_argument);
    Nonlinearity broken;
    broken.name = "broken";
    broken.f = [](double) { return -1.0; };
    CHECK_THROWS_AS(eval_f(broken, 1.0), std::runtime_error);
}

TEST_CASE("registry rejects bad parameters and unknown names") {
    CHECK_THROWS_AS(make_nonlinearity("power", {{"beta", 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(make_nonlinearity("power", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_nonlinearity("x-over-log", {{"alpha", -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_nonlinearity("no-such-map", {}), std::invalid_argument);
}

TEST_CASE("constant nonlinearity closed forms") {
    auto nl = make_nonlinearity("constant", {{"c", 2.0}});
    CHECK(nl.closed_F(5.0) == doctest::Approx(2.0));
    CHECK(nl.closed_F_inv(2.0) == doctest::Approx(5.0));
}

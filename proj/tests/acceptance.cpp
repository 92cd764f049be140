// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure. Shares a single verify-all run of the built-in catalog across the
// catalog-backed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "subgrowth/asymptotics.hpp"
#include "subgrowth/scenario.hpp"
#include "subgrowth/solver.hpp"
#include "subgrowth/spiky.hpp"

using namespace subgrowth;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<std::string()> run;  // empty string = pass, else detail
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

const RunResult& find_result(const VerifySummary& s, const std::string& id) {
    for (const auto& r : s.results)
        if (r.id == id) return r;
    throw std::runtime_error("catalog scenario missing: " + id);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- criterion 1: degenerate run against the closed-form trajectory ----

double degenerate_max_error(double h) {
    Measure mu1({{0.0, 1.5}}, {});
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    SolverOptions opts;
    opts.mesh.t_end = 10.0;
    opts.mesh.h0 = h;
    opts.mesh.graded = false;
    auto sol = solve_fde(mu1, Measure{}, nl, History::constant(1.0), opts);
    double worst = 0.0;
    for (double t = 0.5; t <= 10.0 + 1e-12; t += 0.5) {
        const double exact = std::pow(1.0 + 0.75 * t, 2.0);
        worst = std::max(worst, std::abs(sol.value_at(t) / exact - 1.0));
    }
    return worst;
}

std::string criterion_ode_exactness() {
    const double t0 = now_seconds();
    const double e1 = degenerate_max_error(1e-3);
    const double e2 = degenerate_max_error(5e-4);
    const double elapsed = now_seconds() - t0;
    std::ostringstream out;
    if (!(e1 <= 1e-5)) out << "error " << fmt(e1) << " above 1e-5; ";
    const double ratio = e1 / std::max(e2, 1e-300);
    if (!(ratio >= 2.5 && ratio <= 6.0))
        out << "halving gain " << fmt(ratio) << " outside [2.5, 6]; ";
    if (!(elapsed < 5.0)) out << "runtime " << fmt(elapsed) << "s above 5s; ";
    return out.str();
}

// ---- criteria driven by the shared catalog run ----

std::string criterion_r1_tracks_clock(const VerifySummary& s) {
    const auto& r = find_result(s, "delay-atom-sqrt");
    std::ostringstream out;
    const auto& pts = r.report.points;
    if (!(std::abs(pts.back().r1 - 1.0) <= 0.02))
        out << "|R1(T)-1| = " << fmt(std::abs(pts.back().r1 - 1.0)) << " above 0.02; ";
    for (std::size_t i = pts.size() - 3; i < pts.size(); ++i) {
        const double dev = std::abs(pts[i].r1 - 1.0);
        const double prev = std::abs(pts[i - 1].r1 - 1.0);
        if (dev > prev + 1e-12) {
            out << "R1 deviation increased at t = " << fmt(pts[i].t) << "; ";
            break;
        }
    }
    if (!(r.wall_seconds < 60.0))
        out << "runtime " << fmt(r.wall_seconds) << "s above 60s; ";
    return out.str();
}

std::string criterion_r2_tracks_inverse(const VerifySummary& s) {
    const auto& r = find_result(s, "delay-atom-sqrt");
    const double dev = std::abs(r.report.points.back().r2 - 1.0);
    if (!(dev <= 0.03)) return "|R2(T)-1| = " + fmt(dev) + " above 0.03";
    return "";
}

std::string criterion_mass_invariance(const VerifySummary& s) {
    std::vector<const Solution*> sols;
    for (const char* id : {"mass-exp-theta2", "mass-power-theta2", "mass-atom-delay"})
        sols.push_back(&find_result(s, id).solution);
    const auto res = mass_invariance_check(sols);
    if (!(res.max_pairwise_spread <= 0.02))
        return "final-value spread " + fmt(res.max_pairwise_spread) + " above 0.02";
    return "";
}

std::string criterion_power_decay_rate(const VerifySummary& s) {
    const auto& r = find_result(s, "decreasing-power-kernel");
    const double T = r.solution.times.back();
    const double ratio = r.solution.values.back() / std::sqrt(2.0 * T);
    if (!(std::abs(ratio - 1.0) <= 0.03))
        return "x(T)/sqrt(2T) = " + fmt(ratio) + " outside 1 +- 0.03";
    return "";
}

std::string criterion_exp_decay_rate(const VerifySummary& s) {
    const auto& r = find_result(s, "decreasing-exp-kernel");
    const double dev = std::abs(r.report.points.back().r2 - 1.0);
    if (!(dev <= 0.03)) return "|R2(T)-1| = " + fmt(dev) + " above 0.03";
    return "";
}

std::string criterion_near_linear_rate(const VerifySummary& s) {
    const auto& r = find_result(s, "rv1-power-kernel");
    const double v = rv1_liapunov_check(r.solution, 2.0);
    if (!(std::abs(v - 1.0) <= 0.1))
        return "(log x(T))^3/(3T) = " + fmt(v) + " outside 1 +- 0.1";
    return "";
}

std::string criterion_infinite_mass(const VerifySummary& s) {
    const auto& r = find_result(s, "minfinity-powerhalf");
    GrowthTransform gt(make_nonlinearity("power", {{"beta", 0.5}}));
    std::ostringstream out;
    double prev = -1.0;
    double last = 0.0;
    for (double t : {10.0, 100.0, 1000.0}) {
        last = gt.F(r.solution.value_at(t)) / t;
        if (!(last > prev)) out << "R1 not increasing at t = " << fmt(t) << "; ";
        prev = last;
    }
    if (!(last >= 5.0)) out << "R1(1e3) = " << fmt(last) << " below 5; ";
    return out.str();
}

std::string criterion_zero_rate(const VerifySummary& s, const Catalog& cat) {
    std::ostringstream out;
    for (const auto& sc : cat.scenarios) {
        if (!sc.standard) continue;
        const auto& pts = find_result(s, sc.id).report.points;
        if (pts.size() < 4) {
            out << sc.id << ": too few checkpoints; ";
            continue;
        }
        if (!(pts.back().lyap_direct <= 1e-2))
            out << sc.id << ": x'(T)/x(T) = " << fmt(pts.back().lyap_direct) << "; ";
        if (!(pts.back().lyap_log <= 1e-2))
            out << sc.id << ": log x(T)/T = " << fmt(pts.back().lyap_log) << "; ";
        for (std::size_t i = pts.size() - 3; i < pts.size(); ++i) {
            if (!(pts[i].lyap_direct < pts[i - 1].lyap_direct)) {
                out << sc.id << ": x'/x not decreasing at t = " << fmt(pts[i].t) << "; ";
                break;
            }
        }
        for (std::size_t i = pts.size() - 3; i < pts.size(); ++i) {
            if (!(pts[i].lyap_log < pts[i - 1].lyap_log)) {
                out << sc.id << ": log x/t not decreasing at t = " << fmt(pts[i].t) << "; ";
                break;
            }
        }
    }
    return out.str();
}

std::string criterion_slowly_varying_exponent(const VerifySummary& s) {
    const auto& r = find_result(s, "rv0-log-upper");
    const double r3 = r.report.points.back().r3;
    if (!(r3 >= 0.9 && r3 <= 1.1)) return "R3(T) = " + fmt(r3) + " outside [0.9, 1.1]";
    return "";
}

std::string criterion_oscillatory_floor(const VerifySummary& s) {
    const auto& r = find_result(s, "rv0-osc");
    GrowthTransform gt(make_nonlinearity("rv-osc"));
    const double floor = liminf_lower_check(r.solution, gt);
    if (!(floor >= 0.9)) return "tail min of R2 = " + fmt(floor) + " below 0.9";
    return "";
}

// ---- criterion 12: transform roundtrip across the registry ----

std::string criterion_transform_roundtrip() {
    // x-over-log is tested to 1e8: its inverse at 1e9 would exceed double
    // range (about exp(1442)); at 1e8 it sits near 1e290.
    const std::vector<std::tuple<std::string, std::map<std::string, double>, double>> members =
        {
            {"power", {{"beta", 0.5}}, 1e9},
            {"power-log", {{"beta", 0.5}, {"alpha", 1.0}}, 1e9},
            {"x-over-log", {{"alpha", 2.0}}, 1e8},
            {"exp-decay", {{"alpha", 1.0}}, 1e9},
            {"power-decay", {{"beta", 1.0}}, 1e9},
            {"rv-osc", {}, 1e9},
            {"exp-sqrt-log", {}, 1e9},
            {"constant", {{"c", 2.0}}, 1e9},
            {"spiky", {}, 1e9},
        };
    std::ostringstream out;
    for (const auto& [name, params, y_max] : members) {
        GrowthTransform gt(make_nonlinearity(name, params));
        for (double y = 1.0; y <= y_max * (1.0 + 1e-12); y *= std::pow(10.0, 0.25)) {
            const double x = gt.F_inverse(y);
            const double back = gt.F(x);
            if (!(std::abs(back - y) <= 1e-9 * std::max(1.0, y))) {
                out << name << ": roundtrip residual " << fmt(std::abs(back - y))
                    << " at y = " << fmt(y) << "; ";
                break;
            }
        }
    }
    return out.str();
}

// ---- criterion 13: spiky construction against a direct-summation oracle ----

std::string criterion_spiky_construction() {
    SpikySpec spec;
    spec.eta = [](double x) { return 1.0 / std::sqrt(1.0 + x); };
    spec.eta_antiderivative = [](double x) { return 2.0 * (std::sqrt(1.0 + x) - 1.0); };
    spec.spike_heights = [](std::size_t) { return 1.0; };
    spec.spike_widths = [](std::size_t n) { return std::pow(4.0, -static_cast<double>(n)); };
    spec.f_at_zero = 1.0;
    auto nl = build_spiky(spec);

    std::ostringstream out;
    for (int n = 1; n <= 100; ++n) {
        const double x = static_cast<double>(n);
        const double eps = 1e-7 * x;
        const double jump = std::abs(nl.f(x + eps) - nl.f(x - eps));
        if (!(jump <= 1e-5 * nl.f(x) + 1e-9)) {
            out << "discontinuity " << fmt(jump) << " at breakpoint " << n << "; ";
            break;
        }
    }

    // Independent oracle: f(x) = f(0) + phi(x) + sum of the extra spike areas,
    // each spike integrated directly from its derivative profile.
    auto spike_extra = [&](std::size_t n) {
        const double nd = static_cast<double>(n);
        const double w = spec.spike_widths(n);
        const double h = spec.spike_heights(n);
        const double eta_n = spec.eta(nd);
        const double eta_nw = spec.eta(nd + w);
        // Rise (eta_n -> h) then fall (h -> eta_nw), each linear in the
        // derivative, minus the base ramp area over [n, n+w].
        const double ramp_area = 0.25 * w * (eta_n + h) + 0.25 * w * (h + eta_nw);
        return ramp_area - (spec.eta_antiderivative(nd + w) - spec.eta_antiderivative(nd));
    };
    double extra = 0.0;
    for (std::size_t n = 1; n <= 40; ++n) extra += spike_extra(n);

    double worst = 0.0;
    for (double x = 1000.5; x <= 10000.0; x += 50.0) {
        const double oracle = 1.0 + spec.eta_antiderivative(x) + extra;
        const double got = nl.f(x);
        if (std::abs(got / oracle - 1.0) > 1e-8) {
            out << "oracle mismatch " << fmt(std::abs(got / oracle - 1.0)) << " at x = "
                << fmt(x) << "; ";
            break;
        }
        worst = std::max(worst, std::abs(got / nl.asymptote(x) - 1.0));
    }
    if (!(worst <= 0.05))
        out << "max |f/phi - 1| = " << fmt(worst) << " above 0.05 on [1e3, 1e4]; ";
    return out.str();
}

// ---- criterion 14: exponential recursion vs direct convolution ----

std::string criterion_exp_recursion() {
    // f values from a real trajectory driven by the same kernel.
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    Measure mu2({}, {exponential_density(1.0)});
    SolverOptions opts;
    opts.mesh.h0 = 1.0 / 64.0;
    opts.mesh.t_end = 10000.0 * opts.mesh.h0;
    opts.mesh.graded = false;
    auto sol = solve_fde(Measure{}, mu2, nl, History::constant(1.0), opts);
    const std::size_t steps = sol.times.size() - 1;
    if (steps < 10000) return "trajectory too short for the comparison";

    std::vector<double> fv(sol.values.size());
    for (std::size_t i = 0; i < sol.values.size(); ++i) fv[i] = eval_f(nl, sol.values[i]);

    const auto w = exp_kernel_step(1.0, 1.0, opts.mesh.h0);
    double I = 0.0;
    double worst = 0.0;
    for (std::size_t n = 0; n < 10000; ++n) {
        I = w.decay * I + w.w_old * fv[n] + w.w_new * fv[n + 1];
        if ((n + 1) % 250 == 0) {
            double direct = 0.0;
            for (std::size_t j = 0; j <= n; ++j)
                direct += std::pow(w.decay, static_cast<double>(n - j)) *
                          (w.w_old * fv[j] + w.w_new * fv[j + 1]);
            worst = std::max(worst, std::abs(I - direct) / direct);
        }
    }
    if (!(worst <= 1e-10))
        return "recursion vs direct sum deviation " + fmt(worst) + " above 1e-10";
    return "";
}

std::string criterion_multi_term(const VerifySummary& s) {
    const auto& r = find_result(s, "multi-two-power");
    const double dev = std::abs(r.report.points.back().r1 - 1.0);
    std::ostringstream out;
    if (!(r.report.M == 1.0))
        out << "effective mass " << fmt(r.report.M) << " should count only weighted terms; ";
    if (!(dev <= 0.05)) out << "|R1(T)-1| = " << fmt(dev) << " above 0.05; ";
    return out.str();
}

}  // namespace

int main() {
    const Catalog catalog = parse_catalog(default_catalog_json());
    const VerifySummary summary = verify_all(catalog, 4);

    const std::vector<Criterion> criteria = {
        {1, "degenerate run matches the closed-form trajectory at order 2",
         [] { return criterion_ode_exactness(); }},
        {2, "growth clock F(x(t))/Mt settles at 1 for the unit delay atom",
         [&] { return criterion_r1_tracks_clock(summary); }},
        {3, "trajectory tracks the inverse clock for the unit delay atom",
         [&] { return criterion_r2_tracks_inverse(summary); }},
        {4, "equal-mass kernels land on the same final value",
         [&] { return criterion_mass_invariance(summary); }},
        {5, "reciprocal-power nonlinearity follows the square-root law",
         [&] { return criterion_power_decay_rate(summary); }},
        {6, "exponentially decreasing nonlinearity tracks the inverse clock",
         [&] { return criterion_exp_decay_rate(summary); }},
        {7, "near-linear nonlinearity obeys the cubed-log rate law",
         [&] { return criterion_near_linear_rate(summary); }},
        {8, "infinite-mass kernel outruns every linear clock",
         [&] { return criterion_infinite_mass(summary); }},
        {9, "every standard scenario has a vanishing exponential rate",
         [&] { return criterion_zero_rate(summary, catalog); }},
        {10, "slowly varying nonlinearity keeps a unit log-log exponent",
         [&] { return criterion_slowly_varying_exponent(summary); }},
        {11, "oscillatory slowly varying nonlinearity respects the lower bound",
         [&] { return criterion_oscillatory_floor(summary); }},
        {12, "growth transform roundtrip holds across the registry",
         [] { return criterion_transform_roundtrip(); }},
        {13, "spiky construction is continuous and hugs its smooth ramp",
         [] { return criterion_spiky_construction(); }},
        {14, "exponential-kernel recursion equals the direct convolution",
         [] { return criterion_exp_recursion(); }},
        {15, "only weighted terms feed the clock in the two-term run",
         [&] { return criterion_multi_term(summary); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::printf("PASS  %2d  %s\n", c.number, c.title.c_str());
        } else {
            std::printf("FAIL  %2d  %s  [%s]\n", c.number, c.title.c_str(), detail.c_str());
            ++failures;
        }
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}

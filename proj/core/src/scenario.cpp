#include "subgrowth/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace subgrowth {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw std::invalid_argument("catalog: " + where + ": " + what);
}

double want_number(const json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    return j.get<double>();
}

Measure parse_measure(const json& j, const std::string& where) {
    if (j.is_null()) return Measure{};
    if (!j.is_object()) bad(where, "expected an object");
    std::vector<Atom> atoms;
    std::vector<DensityComponent> dens;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            Atom atom;
            atom.location = want_number(a.at("location"), where + ".atoms.location");
            atom.mass = want_number(a.at("mass"), where + ".atoms.mass");
            atoms.push_back(atom);
        }
    }
    if (j.contains("exponential"))
        for (const auto& d : j.at("exponential"))
            dens.push_back(exponential_density(want_number(d.at("theta"), where + ".theta"),
                                               d.value("scale", 1.0)));
    if (j.contains("power"))
        for (const auto& d : j.at("power"))
            dens.push_back(power_density(want_number(d.at("theta"), where + ".theta"),
                                         d.value("scale", 1.0)));
    if (j.contains("tabulated"))
        for (const auto& d : j.at("tabulated"))
            dens.push_back(tabulated_density(d.at("grid").get<std::vector<double>>(),
                                             d.at("values").get<std::vector<double>>(),
                                             d.value("scale", 1.0)));
    std::optional<double> bound;
    if (j.contains("support_bound")) bound = j.at("support_bound").get<double>();
    try {
        return Measure(std::move(atoms), std::move(dens), bound);
    } catch (const std::exception& e) {
        bad(where, e.what());
    }
}

ScenarioTerm parse_term(const json& j, const std::string& where) {
    ScenarioTerm term;
    term.mu1 = parse_measure(j.value("mu1", json()), where + ".mu1");
    term.mu2 = parse_measure(j.value("mu2", json()), where + ".mu2");
    if (!j.contains("nonlinearity")) bad(where, "missing nonlinearity");
    const auto& nl = j.at("nonlinearity");
    term.nl_name = nl.at("name").get<std::string>();
    if (nl.contains("params"))
        for (const auto& [k, v] : nl.at("params").items())
            term.nl_params[k] = want_number(v, where + ".nonlinearity.params." + k);
    term.lambda = j.value("lambda", 1.0);
    if (term.mu1.empty() && term.mu2.empty()) bad(where, "term has no measure");
    return term;
}

const std::set<std::string>& verdict_names() {
    static const std::set<std::string> names{"converges-to-1", "diverges", "inconclusive"};
    return names;
}

ScenarioExpect parse_expect(const json& j, const std::string& where) {
    ScenarioExpect e;
    auto verdict = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key)) return std::nullopt;
        std::string v = j.at(key).get<std::string>();
        if (!verdict_names().count(v)) bad(where, std::string(key) + ": unknown verdict " + v);
        return v;
    };
    e.r1_verdict = verdict("r1");
    e.r2_verdict = verdict("r2");
    if (j.contains("r1_final_tol")) e.r1_final_tol = j.at("r1_final_tol").get<double>();
    if (j.contains("r2_final_tol")) e.r2_final_tol = j.at("r2_final_tol").get<double>();
    if (j.contains("r3_range")) {
        auto v = j.at("r3_range").get<std::vector<double>>();
        if (v.size() != 2 || !(v[0] < v[1])) bad(where, "r3_range must be [lo, hi]");
        e.r3_range = {{v[0], v[1]}};
    }
    if (j.contains("lyapunov_max")) e.lyapunov_max = j.at("lyapunov_max").get<double>();
    if (j.contains("rv1")) {
        const auto& r = j.at("rv1");
        e.rv1 = ScenarioExpect::Rv1{r.at("alpha").get<double>(), r.at("target").get<double>(),
                                    r.at("rel_tol").get<double>()};
    }
    if (j.contains("liminf_r2_min")) e.liminf_r2_min = j.at("liminf_r2_min").get<double>();
    if (j.contains("final_value_power")) {
        const auto& r = j.at("final_value_power");
        e.final_value_power = ScenarioExpect::FinalPower{
            r.at("coef").get<double>(), r.at("power").get<double>(),
            r.at("rel_tol").get<double>()};
    }
    if (j.contains("r1_final_min")) e.r1_final_min = j.at("r1_final_min").get<double>();
    if (j.contains("r1_increasing_times"))
        e.r1_increasing_times = j.at("r1_increasing_times").get<std::vector<double>>();
    return e;
}

Scenario parse_scenario(const json& j, std::size_t index) {
    const std::string where = "scenarios[" + std::to_string(index) + "]";
    if (!j.is_object()) bad(where, "expected an object");
    Scenario sc;
    if (!j.contains("id")) bad(where, "missing id");
    sc.id = j.at("id").get<std::string>();
    sc.note = j.value("note", "");
    if (j.contains("claims")) sc.claims = j.at("claims").get<std::vector<std::string>>();
    sc.standard = j.value("standard", true);
    if (j.contains("terms")) {
        std::size_t k = 0;
        for (const auto& t : j.at("terms"))
            sc.terms.push_back(parse_term(t, where + ".terms[" + std::to_string(k++) + "]"));
    } else {
        sc.terms.push_back(parse_term(j, where));
    }
    if (sc.terms.empty()) bad(where, "no terms");
    if (j.contains("history")) sc.psi_value = j.at("history").value("value", 1.0);
    if (!(sc.psi_value > 0.0)) bad(where, "history value must be positive");
    if (!j.contains("mesh")) bad(where, "missing mesh");
    const auto& m = j.at("mesh");
    sc.mesh.t_end = want_number(m.at("t_end"), where + ".mesh.t_end");
    sc.mesh.h0 = m.value("h0", 1.0 / 64.0);
    sc.mesh.graded = m.value("graded", true);
    sc.mesh.h_max = m.value("h_max", 0.0);
    sc.eps_tail = j.value("eps_tail", 1e-6);
    sc.allow_infinite_mass = j.value("allow_infinite_mass", false);
    sc.tol = j.value("tol", 0.05);
    if (!(sc.tol > 0.0)) bad(where, "tol must be positive");
    sc.mass_group = j.value("mass_group", "");
    sc.mass_spread_tol = j.value("mass_spread_tol", 0.02);
    if (j.contains("expect")) sc.expect = parse_expect(j.at("expect"), where + ".expect");
    return sc;
}

}  // namespace

Catalog parse_catalog(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("catalog: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("catalog: top level must be an object");
    Catalog cat;
    cat.schema_version = j.value("schema_version", 0);
    if (cat.schema_version != 1)
        throw std::invalid_argument("catalog: unsupported schema_version");
    if (j.contains("scenarios")) {
        std::size_t i = 0;
        for (const auto& s : j.at("scenarios")) cat.scenarios.push_back(parse_scenario(s, i++));
    }
    return cat;
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("catalog: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

const std::vector<std::string>& required_claims() {
    static const std::vector<std::string> claims{
        "ode-exactness",      "growth-clock",        "direct-rate",
        "decreasing-rate",    "power-decay-example", "exp-decay-example",
        "mass-invariance",    "infinite-mass",       "zero-lyapunov",
        "multi-nonlinearity", "rv0-bounded-delay",   "rv0-bounded-below",
        "rv0-lower-bound",    "rv0-log-upper",       "rv1-sublinear",
        "oscillatory-slowly-varying"};
    return claims;
}

std::vector<std::string> lint_catalog(const Catalog& catalog) {
    std::vector<std::string> problems;
    std::set<std::string> ids;
    std::set<std::string> seen_claims;
    const std::set<std::string> known(required_claims().begin(), required_claims().end());
    for (const auto& sc : catalog.scenarios) {
        if (!ids.insert(sc.id).second) problems.push_back("duplicate id: " + sc.id);
        for (const auto& c : sc.claims) {
            if (!known.count(c)) problems.push_back(sc.id + ": unknown claim tag: " + c);
            seen_claims.insert(c);
        }
    }
    if (!catalog.scenarios.empty())
        for (const auto& c : required_claims())
            if (!seen_claims.count(c)) problems.push_back("claim not covered: " + c);
    return problems;
}

RunResult run_scenario(const Scenario& sc, double tol_scale) {
    if (!(tol_scale > 0.0)) throw std::invalid_argument("run: tol_scale must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    r.id = sc.id;

    std::vector<Nonlinearity> nls;
    nls.reserve(sc.terms.size());
    for (const auto& t : sc.terms) nls.push_back(make_nonlinearity(t.nl_name, t.nl_params));

    std::vector<MultiNonlinearTerm> terms;
    double tau = 0.0;
    for (std::size_t k = 0; k < sc.terms.size(); ++k) {
        MultiNonlinearTerm mt;
        mt.mu1 = sc.terms[k].mu1.empty() ? nullptr : &sc.terms[k].mu1;
        mt.mu2 = sc.terms[k].mu2.empty() ? nullptr : &sc.terms[k].mu2;
        mt.nonlinearity = nls[k];
        mt.lambda_weight = sc.terms[k].lambda;
        terms.push_back(mt);
        if (mt.mu1) {
            for (const auto& a : mt.mu1->atoms()) tau = std::max(tau, a.location);
            for (const auto& d : mt.mu1->densities())
                if (!d.grid.empty()) tau = std::max(tau, d.grid.back());
            if (mt.mu1->support_bound()) tau = std::max(tau, *mt.mu1->support_bound());
        }
    }

    SolverOptions opts;
    opts.mesh = sc.mesh;
    opts.eps_tail = sc.eps_tail;
    opts.allow_infinite_mass = sc.allow_infinite_mass;

    r.solution = solve_fde_multi(terms, History::constant(sc.psi_value, tau), opts);

    const Nonlinearity* lead = nullptr;
    for (std::size_t k = 0; k < sc.terms.size(); ++k)
        if (sc.terms[k].lambda > 0.0 && !lead) lead = &nls[k];
    GrowthTransform gt(*lead);
    r.report = growth_report(r.solution, gt, sc.tol * tol_scale);

    auto fail = [&](const std::string& msg) { r.failures.push_back(msg); };
    const auto& e = sc.expect;
    const auto& pts = r.report.points;
    if (pts.empty()) fail("no checkpoints (horizon too short)");

    if (e.r1_verdict && to_string(r.report.verdict_r1) != *e.r1_verdict)
        fail("r1 verdict " + to_string(r.report.verdict_r1) + ", expected " + *e.r1_verdict);
    if (e.r2_verdict && to_string(r.report.verdict_r2) != *e.r2_verdict)
        fail("r2 verdict " + to_string(r.report.verdict_r2) + ", expected " + *e.r2_verdict);
    if (!pts.empty()) {
        const Checkpoint& last = pts.back();
        if (e.r1_final_tol && !(std::abs(last.r1 - 1.0) <= *e.r1_final_tol * tol_scale))
            fail("R1(T) = " + num(last.r1) + " outside 1 +- " + num(*e.r1_final_tol * tol_scale));
        if (e.r2_final_tol && !(std::abs(last.r2 - 1.0) <= *e.r2_final_tol * tol_scale))
            fail("R2(T) = " + num(last.r2) + " outside 1 +- " + num(*e.r2_final_tol * tol_scale));
        if (e.r3_range) {
            const double lo = 1.0 - (1.0 - (*e.r3_range)[0]) * tol_scale;
            const double hi = 1.0 + ((*e.r3_range)[1] - 1.0) * tol_scale;
            if (!(last.r3 >= lo && last.r3 <= hi))
                fail("R3(T) = " + num(last.r3) + " outside [" + num(lo) + ", " + num(hi) + "]");
        }
        if (e.lyapunov_max) {
            const double bound = *e.lyapunov_max * tol_scale;
            if (!(last.lyap_direct <= bound))
                fail("x'(T)/x(T) = " + num(last.lyap_direct) + " above " + num(bound));
            if (!(last.lyap_log <= bound))
                fail("log x(T)/T = " + num(last.lyap_log) + " above " + num(bound));
            if (pts.size() >= 4) {
                for (std::size_t i = pts.size() - 3; i < pts.size(); ++i) {
                    if (!(pts[i].lyap_direct < pts[i - 1].lyap_direct))
                        fail("x'/x not decreasing at t = " + num(pts[i].t));
                    if (!(pts[i].lyap_log < pts[i - 1].lyap_log))
                        fail("log x/t not decreasing at t = " + num(pts[i].t));
                }
            }
        }
        if (e.r1_final_min && !(last.r1 >= *e.r1_final_min))
            fail("R1(T) = " + num(last.r1) + " below " + num(*e.r1_final_min));
    }
    if (e.rv1) {
        const double v = rv1_liapunov_check(r.solution, e.rv1->alpha);
        if (!(std::abs(v / e.rv1->target - 1.0) <= e.rv1->rel_tol * tol_scale))
            fail("rv1 limit estimate " + num(v) + " not within " +
                 num(e.rv1->rel_tol * tol_scale) + " of " + num(e.rv1->target));
    }
    if (e.liminf_r2_min) {
        const double v = liminf_lower_check(r.solution, gt);
        const double floor = 1.0 - (1.0 - *e.liminf_r2_min) * tol_scale;
        if (!(v >= floor))
            fail("tail min of R2 = " + num(v) + " below " + num(floor));
    }
    if (e.final_value_power) {
        const double T = r.solution.times.back();
        const double target =
            std::pow(e.final_value_power->coef * T, e.final_value_power->power);
        const double v = r.solution.values.back() / target;
        if (!(std::abs(v - 1.0) <= e.final_value_power->rel_tol * tol_scale))
            fail("x(T)/target = " + num(v) + " outside 1 +- " +
                 num(e.final_value_power->rel_tol * tol_scale));
    }
    if (!e.r1_increasing_times.empty()) {
        double prev = -1.0;
        for (double t : e.r1_increasing_times) {
            const double x = r.solution.value_at(t);
            const double scale = r.solution.mass_finite ? r.solution.total_mass : 1.0;
            const double r1 = gt.F(x) / (scale * t);
            if (!(r1 > prev)) fail("R1 not increasing at t = " + num(t));
            prev = r1;
        }
    }

    r.pass = r.failures.empty();
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string result_report_text(const RunResult& r) {
    std::ostringstream out;
    out << "scenario: " << r.id << "\n";
    out << "mass: " << (r.report.mass_finite ? num(r.report.M) : std::string("infinite"))
        << "\n";
    out << "tolerance: " << num(r.report.tol) << "\n";
    out << "verdict_r1: " << to_string(r.report.verdict_r1) << "\n";
    out << "verdict_r2: " << to_string(r.report.verdict_r2) << "\n";
    out << "verdict_r3: " << to_string(r.report.verdict_r3) << "\n";
    if (r.solution.truncation_horizon > 0.0) {
        out << "truncation_horizon: " << num(r.solution.truncation_horizon) << "\n";
        out << "tail_error_bound: " << num(r.solution.tail_error_bound) << "\n";
    }
    out << "checkpoints:\n";
    for (const auto& p : r.report.points)
        out << "  t=" << num(p.t) << " x=" << num(p.x) << " r1=" << num(p.r1)
            << " r2=" << num(p.r2) << " r3=" << num(p.r3)
            << " lyap=" << num(p.lyap_direct) << "\n";
    if (r.failures.empty()) {
        out << "result: pass\n";
    } else {
        out << "result: fail\n";
        for (const auto& f : r.failures) out << "  - " << f << "\n";
    }
    return out.str();
}

std::string checkpoints_csv(const RunResult& r) {
    std::ostringstream out;
    out << "t,x,dx,F_of_x,ratio_R1,ratio_R2,ratio_R3\n";
    for (const auto& p : r.report.points)
        out << num(p.t) << ',' << num(p.x) << ',' << num(p.dx) << ',' << num(p.F_of_x) << ','
            << num(p.r1) << ',' << num(p.r2) << ',' << num(p.r3) << "\n";
    return out.str();
}

std::string trajectory_csv(const RunResult& r) {
    std::ostringstream out;
    out << "t,x,dx\n";
    for (std::size_t i = 0; i < r.solution.times.size(); ++i)
        out << num(r.solution.times[i]) << ',' << num(r.solution.values[i]) << ','
            << num(r.solution.derivatives[i]) << "\n";
    return out.str();
}

VerifySummary verify_all(const Catalog& catalog, int jobs, double tol_scale,
                         const std::string& out_dir) {
    VerifySummary summary;
    summary.results.resize(catalog.scenarios.size());
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(
                                                            catalog.scenarios.size() + 1)));
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= catalog.scenarios.size()) return;
            try {
                summary.results[i] = run_scenario(catalog.scenarios[i], tol_scale);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                summary.results[i].id = catalog.scenarios[i].id;
                summary.results[i].pass = false;
                summary.results[i].failures.push_back(std::string("error: ") + e.what());
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Cross-scenario check: equal-mass scenarios must land on the same final
    // value regardless of how the measure spreads its mass.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < catalog.scenarios.size(); ++i)
        if (!catalog.scenarios[i].mass_group.empty())
            groups[catalog.scenarios[i].mass_group].push_back(i);
    for (const auto& [name, idx] : groups) {
        if (idx.size() < 2) continue;
        bool usable = true;
        for (std::size_t i : idx)
            if (summary.results[i].solution.times.empty()) usable = false;
        if (!usable) {
            summary.group_failures.push_back("mass group " + name + ": member run failed");
            continue;
        }
        std::vector<const Solution*> sols;
        for (std::size_t i : idx) sols.push_back(&summary.results[i].solution);
        double spread_tol = 0.0;
        for (std::size_t i : idx)
            spread_tol = std::max(spread_tol, catalog.scenarios[i].mass_spread_tol);
        try {
            const MassInvarianceResult mi = mass_invariance_check(sols);
            if (!(mi.max_pairwise_spread <= spread_tol * tol_scale))
                summary.group_failures.push_back(
                    "mass group " + name + ": final-value spread " +
                    num(mi.max_pairwise_spread) + " above " + num(spread_tol * tol_scale));
        } catch (const std::exception& e) {
            summary.group_failures.push_back("mass group " + name + ": " + e.what());
        }
    }

    for (const auto& r : summary.results)
        if (!r.pass) summary.pass = false;
    if (!summary.group_failures.empty()) summary.pass = false;

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        for (const auto& r : summary.results) {
            std::ofstream(fs::path(out_dir) / (r.id + ".report.txt"))
                << result_report_text(r);
            std::ofstream(fs::path(out_dir) / (r.id + ".csv")) << checkpoints_csv(r);
        }
        std::ofstream sum(fs::path(out_dir) / "summary.txt");
        for (const auto& r : summary.results)
            sum << (r.pass ? "pass " : "FAIL ") << r.id << "\n";
        for (const auto& g : summary.group_failures) sum << "FAIL " << g << "\n";
        sum << (summary.pass ? "all scenarios passed\n" : "failures present\n");
    }
    return summary;
}

}  // namespace subgrowth

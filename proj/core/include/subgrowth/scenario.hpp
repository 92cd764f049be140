#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subgrowth/asymptotics.hpp"
#include "subgrowth/measure.hpp"
#include "subgrowth/mesh.hpp"
#include "subgrowth/nonlinearity.hpp"
#include "subgrowth/solver.hpp"

namespace subgrowth {

/// Declarative pass/fail checks evaluated against the growth report.
struct ScenarioExpect {
    std::optional<std::string> r1_verdict;
    std::optional<std::string> r2_verdict;
    std::optional<double> r1_final_tol;  // |R1(T) - 1| bound
    std::optional<double> r2_final_tol;
    std::optional<std::array<double, 2>> r3_range;  // R3(T) window
    std::optional<double> lyapunov_max;  // bound on x'/x and log x/t at T,
                                         // both decreasing over the window
    struct Rv1 {
        double alpha = 0.0;
        double target = 0.0;
        double rel_tol = 0.0;
    };
    std::optional<Rv1> rv1;
    std::optional<double> liminf_r2_min;
    struct FinalPower {  // |x(T) / (coef*T)^power - 1| <= rel_tol
        double coef = 0.0;
        double power = 0.0;
        double rel_tol = 0.0;
    };
    std::optional<FinalPower> final_value_power;
    std::optional<double> r1_final_min;          // divergence floor
    std::vector<double> r1_increasing_times;     // R1 strictly increasing here
};

struct ScenarioTerm {
    Measure mu1;  // bounded-delay part
    Measure mu2;  // half-line part
    std::string nl_name;
    std::map<std::string, double> nl_params;
    double lambda = 1.0;
};

struct Scenario {
    std::string id;
    std::string note;
    std::vector<std::string> claims;
    bool standard = true;  // participates in the catalog-wide growth checks
    std::vector<ScenarioTerm> terms;
    double psi_value = 1.0;  // constant history
    MeshPlan mesh;
    double eps_tail = 1e-6;
    bool allow_infinite_mass = false;
    double tol = 0.05;
    std::string mass_group;       // scenarios sharing a group compare finals
    double mass_spread_tol = 0.02;
    ScenarioExpect expect;
};

struct Catalog {
    int schema_version = 1;
    std::vector<Scenario> scenarios;
};

struct RunResult {
    std::string id;
    bool pass = false;
    std::vector<std::string> failures;
    GrowthReport report;
    Solution solution;
    double wall_seconds = 0.0;
};

/// Parses a catalog document; throws std::invalid_argument with a field path
/// on malformed input.
Catalog parse_catalog(const std::string& json_text);
Catalog load_catalog_file(const std::string& path);

/// The built-in catalog (also shipped as config/catalog.json).
const char* default_catalog_json();

/// Structural checks: unique ids, known claim tags, full coverage of the
/// required claim list. Returns human-readable problems; empty means clean.
std::vector<std::string> lint_catalog(const Catalog& catalog);
const std::vector<std::string>& required_claims();

RunResult run_scenario(const Scenario& sc, double tol_scale = 1.0);

struct VerifySummary {
    std::vector<RunResult> results;
    std::vector<std::string> group_failures;  // cross-scenario mass checks
    bool pass = true;
};

/// Runs every scenario (bounded worker pool), evaluates cross-scenario mass
/// groups, and, when out_dir is nonempty, writes one report and one CSV per
/// scenario plus a summary file. Byte-identical across runs.
VerifySummary verify_all(const Catalog& catalog, int jobs = 1, double tol_scale = 1.0,
                         const std::string& out_dir = "");

std::string result_report_text(const RunResult& r);
std::string checkpoints_csv(const RunResult& r);   // one row per checkpoint
std::string trajectory_csv(const RunResult& r);    // one row per mesh node

}  // namespace subgrowth

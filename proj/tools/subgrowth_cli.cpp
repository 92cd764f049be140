#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "subgrowth/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitScenarioFailure = 1;
constexpr int kExitConfigError = 2;

subgrowth::Catalog load(const std::string& path) {
    if (path.empty()) return subgrowth::parse_catalog(subgrowth::default_catalog_json());
    return subgrowth::load_catalog_file(path);
}

const subgrowth::Scenario* find(const subgrowth::Catalog& cat, const std::string& id) {
    for (const auto& sc : cat.scenarios)
        if (sc.id == id) return &sc;
    return nullptr;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream(fs::path(dir) / name) << body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-horizon growth harness for convolution-driven sublinear equations"};
    app.require_subcommand(1);

    std::string catalog_path;
    std::string out_dir;
    int jobs = 1;
    double tol_scale = 1.0;
    app.add_option("--catalog", catalog_path, "catalog file (defaults to the built-in one)");
    app.add_option("--out", out_dir, "directory for reports and CSVs");
    app.add_option("--jobs", jobs, "worker threads for verify-all")->check(CLI::PositiveNumber);
    app.add_option("--tol-scale", tol_scale, "uniform tolerance relaxation factor")
        ->check(CLI::PositiveNumber);

    std::string id;
    auto* cmd_run = app.add_subcommand("run", "run one scenario and print its report");
    cmd_run->add_option("id", id, "scenario id")->required();
    auto* cmd_verify = app.add_subcommand("verify-all", "run every scenario in the catalog");
    auto* cmd_list = app.add_subcommand("list", "list scenario ids");
    auto* cmd_csv = app.add_subcommand("export-csv", "print the checkpoint table as CSV");
    cmd_csv->add_option("id", id, "scenario id")->required();
    auto* cmd_plot = app.add_subcommand("plot-data", "print the full trajectory as CSV");
    cmd_plot->add_option("id", id, "scenario id")->required();

    // Global flags are accepted after the verb as well.
    for (CLI::App* sub : {cmd_run, cmd_verify, cmd_list, cmd_csv, cmd_plot})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    subgrowth::Catalog cat;
    try {
        cat = load(catalog_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (cmd_list->parsed()) {
            for (const auto& sc : cat.scenarios)
                std::cout << sc.id << (sc.standard ? "" : "  [non-standard]") << "\n    "
                          << sc.note << "\n";
            return kExitPass;
        }

        if (cmd_verify->parsed()) {
            const auto problems = subgrowth::lint_catalog(cat);
            if (!problems.empty()) {
                for (const auto& p : problems) std::cerr << "lint: " << p << "\n";
                return kExitConfigError;
            }
            const auto summary = subgrowth::verify_all(cat, jobs, tol_scale, out_dir);
            for (const auto& r : summary.results) {
                std::cout << (r.pass ? "pass " : "FAIL ") << r.id << "\n";
                for (const auto& f : r.failures) std::cout << "       " << f << "\n";
            }
            for (const auto& g : summary.group_failures) std::cout << "FAIL " << g << "\n";
            std::cout << (summary.pass ? "all scenarios passed" : "failures present") << "\n";
            return summary.pass ? kExitPass : kExitScenarioFailure;
        }

        const subgrowth::Scenario* sc = find(cat, id);
        if (!sc) {
            std::cerr << "unknown scenario id: " << id << "\n";
            return kExitConfigError;
        }
        const auto result = subgrowth::run_scenario(*sc, tol_scale);
        if (cmd_run->parsed()) {
            std::cout << subgrowth::result_report_text(result);
            if (!out_dir.empty()) {
                write_file(out_dir, result.id + ".report.txt",
                           subgrowth::result_report_text(result));
                write_file(out_dir, result.id + ".csv", subgrowth::checkpoints_csv(result));
            }
            return result.pass ? kExitPass : kExitScenarioFailure;
        }
        if (cmd_csv->parsed()) {
            if (out_dir.empty())
                std::cout << subgrowth::checkpoints_csv(result);
            else
                write_file(out_dir, result.id + ".csv", subgrowth::checkpoints_csv(result));
            return kExitPass;
        }
        if (cmd_plot->parsed()) {
            if (out_dir.empty())
                std::cout << subgrowth::trajectory_csv(result);
            else
                write_file(out_dir, result.id + ".trajectory.csv",
                           subgrowth::trajectory_csv(result));
            return kExitPass;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitScenarioFailure;
    }
    return kExitConfigError;
}

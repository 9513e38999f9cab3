// vaxmed: run vaccine-behaviour mediation scenarios and print reports.
//
//   vaxmed run <file|builtin> [--seed N] [--n N] [--out DIR] [--format table|csv]
//   vaxmed list
//   vaxmed check <file|builtin>
//   vaxmed show <builtin>
//
// Exit codes: 0 success, 1 validation error, 2 runtime or capacity error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vaxmed/errors.hpp"
#include "vaxmed/graph.hpp"
#include "vaxmed/report.hpp"
#include "vaxmed/scenario.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string load_source(const std::string& ref) {
    if (auto text = vaxmed::builtin_source(ref)) return *text;
    std::ifstream in(ref);
    if (!in) throw vaxmed::InputError("no built-in scenario or readable file named '" + ref + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int check(const std::string& ref) {
    const auto sc = vaxmed::parse_scenario(load_source(ref));
    std::cout << "scenario " << sc.name << ": valid (" << sc.nodes.size() << " nodes, " << sc.analyses.size()
              << " analyses)\n";
    const auto& r = sc.roles;
    if (!r.exposure.empty() && !r.mediator.empty() && !r.outcome.empty()) {
        const auto model = sc.model();
        const auto rep = vaxmed::check_nde_assumptions(model.dag(), r.exposure, r.mediator, r.outcome, vaxmed::NodeSet(r.adjust.begin(), r.adjust.end()));
        for (int k = 1; k <= 4; ++k) {
            const auto& e = rep[k];
            std::cout << "assumption " << k << ": " << vaxmed::to_string(e.verdict);
            if (!e.witness.empty())
                std::cout << " (" << (k == 4 ? "" : vaxmed::format_path(model.dag(), e.witness));
            if (k == 4 && !e.witness.empty()) {
                for (std::size_t i = 0; i < e.witness.size(); ++i) std::cout << (i ? "," : "") << e.witness[i];
            }
            if (!e.witness.empty()) std::cout << ")";
            std::cout << "\n";
        }
    }
    return 0;
}

int run(const std::string& ref, std::optional<std::uint64_t> seed, std::optional<std::size_t> n,
        const std::string& out_dir, const std::string& format) {
    const auto sc = vaxmed::parse_scenario(load_source(ref));
    vaxmed::RunOptions opt;
    opt.seed = seed;
    opt.sample_size = n;
    opt.keep_data = !out_dir.empty();
    const auto report = vaxmed::run(sc, opt);
    if (format == "csv") {
        vaxmed::write_csv(std::cout, report);
    } else {
        vaxmed::write_table(std::cout, report);
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto base = std::filesystem::path(out_dir) / sc.name;
        std::ofstream rep(base.string() + ".report.csv");
        vaxmed::write_csv(rep, report);
        std::ofstream data(base.string() + ".data.csv");
        vaxmed::write_csv(data, *report.data);
        if (!rep || !data) throw std::runtime_error("could not write output files under " + out_dir);
    }
    return report.has_errors() ? kExitRuntime : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vaccine effects mediated by behaviour: scenarios, estimands and estimators"};
    app.require_subcommand(1);

    std::string ref;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string out_dir;
    std::string format = "table";

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file or built-in scenario");
    run_cmd->add_option("scenario", ref, "Scenario file or built-in name")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Random seed (overrides the scenario)");
    auto* n_opt = run_cmd->add_option("--n", n, "Sample size (overrides the scenario)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", out_dir, "Directory for report and dataset CSV files");
    run_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv"}));

    auto* list_cmd = app.add_subcommand("list", "List built-in scenarios");
    auto* check_cmd = app.add_subcommand("check", "Validate a scenario and report the identification assumptions");
    check_cmd->add_option("scenario", ref, "Scenario file or built-in name")->required();
    auto* show_cmd = app.add_subcommand("show", "Print the source of a built-in scenario");
    show_cmd->add_option("name", ref, "Built-in name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*list_cmd) {
            for (const auto& name : vaxmed::list_builtin()) std::cout << name << "\n";
            return 0;
        }
        if (*show_cmd) {
            const auto text = vaxmed::builtin_source(ref);
            if (!text) throw vaxmed::InputError("no built-in scenario named '" + ref + "'");
            std::cout << *text << "\n";
            return 0;
        }
        if (*check_cmd) return check(ref);
        return run(ref, *seed_opt ? std::optional(seed) : std::nullopt, *n_opt ? std::optional(n) : std::nullopt,
                   out_dir, format);
    } catch (const vaxmed::InputError& e) {
        std::cerr << "vaxmed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "vaxmed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

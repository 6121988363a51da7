#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperlab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic-lab: combinatorial and symbolic structures of hyperbolic dynamics"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, report_path;
    long long seed = 0;
    bool seed_set = false;

    auto* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_path, "scenario file (key = value text)")->required();
    run->add_option("--out", out_dir, "output directory (overrides the scenario's `output`)");
    run->add_option("--seed", seed, "sampling seed (overrides the scenario's `seed`)")
        ->each([&](const std::string&) { seed_set = true; });

    auto* plot = app.add_subcommand("plot", "emit plot-ready CSV tables from a report.json");
    plot->add_option("report", report_path, "path to report.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            hyperlab::Scenario sc = hyperlab::parse_scenario_file(scenario_path);
            int code = hyperlab::run_scenario(sc, out_dir,
                                              seed_set ? std::optional<long long>(seed) : std::nullopt);
            if (code == 2) std::cerr << "hyperbolic-lab: a verdict failed (see report.json)\n";
            return code;
        }
        auto files = hyperlab::emit_plotdata(report_path);
        for (const auto& f : files) std::cout << f << "\n";
        return 0;
    } catch (const hyperlab::ScenarioParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

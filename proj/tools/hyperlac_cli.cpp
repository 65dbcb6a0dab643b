#include <iostream>

#include <CLI11.hpp>

#include "hyperlac/harness.hpp"

using namespace hyperlac;

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for lacunary spherical maximal functions on hyperbolic space"};
    std::string command, config_path, out_dir, seed = "default";
    app.add_option("command", command,
                   "plancherel | symbol-estimates | i3 | kunze-stein | cz-tails | maximal-sweep | region | all")
        ->required();
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed-grids", seed, "default or fine")->check(CLI::IsMember({"default", "fine"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ExperimentConfig cfg;
    Command cmd;
    try {
        cmd = command_from_string(command);
        cfg = config_path.empty() ? validate_config("") : load_config(config_path);
        apply_seed_grids(cfg, seed);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        const auto report = run(cmd, cfg);
        for (const auto& ex : report.experiments) {
            std::size_t failed = 0;
            for (const auto& r : ex.rows) failed += !r.pass;
            std::cout << to_string(ex.command) << ": " << (ex.pass ? "PASS" : "FAIL") << " (" << ex.rows.size()
                      << " rows, " << failed << " failed, " << ex.seconds << " s)\n";
            for (const auto& r : ex.rows)
                if (!r.pass) std::cout << "  failed: " << r.csv_row() << '\n';
        }
        std::cout << (report.pass ? "PASS" : "FAIL") << " in " << report.seconds << " s, output in " << cfg.output_dir
                  << '\n';
        return report.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

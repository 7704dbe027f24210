#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cspin/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Central-spin decoupling simulator"};
    app.require_subcommand(0, 1);

    bool list = false;
    app.add_flag("--list-scenarios", list, "List scenario names and exit");

    std::string scenario, config_path, preset, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;

    CLI::App* sim = app.add_subcommand("simulate", "Run one scenario");
    sim->add_option("scenario", scenario, "Scenario name")->required();
    sim->add_option("--config", config_path, "JSON config file")->required();
    sim->add_option("--seed", seed, "Override master seed")
        ->each([&](const std::string&) { seed_set = true; });
    sim->add_option("--threads", threads, "Override worker thread count");
    sim->add_option("--out", out_dir, "Override output directory");
    sim->add_option("--preset", preset, "Override lattice preset (normal|narrow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list) {
        for (const std::string& name : cspin::list_scenarios()) std::printf("%s\n", name.c_str());
        return 0;
    }
    if (!sim->parsed()) {
        std::fprintf(stderr, "error: expected `simulate <scenario> --config <file>` or --list-scenarios\n");
        return 2;
    }

    cspin::ExperimentConfig config;
    try {
        config = cspin::ExperimentConfig::from_json_file(config_path);
        config.scenario = scenario;
        if (seed_set) config.master_seed = seed;
        if (threads > 0) config.threads = threads;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!preset.empty()) {
            config.lattice_preset = preset;
            config.lattice.reset();
            config.resolved_lattice();  // validates the preset name
        }
        bool known = false;
        for (const std::string& name : cspin::list_scenarios()) known |= (name == scenario);
        if (!known) throw std::invalid_argument("unknown scenario: " + scenario);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        return cspin::run_scenario(config);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 1;
    }
}

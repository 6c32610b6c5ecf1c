// dlmtc: scenario generation, single runs and the network-size sweep.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dlmtc/scenario_io.hpp"
#include "dlmtc/sim.hpp"
#include "dlmtc/sweep.hpp"

namespace fs = std::filesystem;
using namespace dlmtc;

namespace {

std::optional<int> parse_k(const std::string& text) {
    if (text == "auto") return std::nullopt;
    std::size_t used = 0;
    const int k = std::stoi(text, &used);
    if (used != text.size() || k < 1) throw CLI::ValidationError("--k", "expected 'auto' or a positive integer");
    return k;
}

struct PipelineFlags {
    std::string k = "auto";
    int channels = 4;
    double band_hz = 2.0e6;
    double horizon = 600.0;

    void add(CLI::App* app) {
        app->add_option("--k", k, "cluster count: auto or a positive integer")->capture_default_str();
        app->add_option("--channels", channels, "HyMAC channels per cluster range")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--band-hz", band_hz, "shared band width")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--horizon-s", horizon, "simulated seconds")->check(CLI::PositiveNumber)->capture_default_str();
    }

    PipelineConfig config() const {
        PipelineConfig cfg;
        cfg.k = parse_k(k);
        cfg.channels = channels;
        cfg.band_hz = band_hz;
        cfg.horizon = horizon;
        return cfg;
    }
};

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustered aggregation-tree sensor network simulator"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a random scenario as JSON");
    std::size_t gen_nodes = 100;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--nodes", gen_nodes, "sensor node count")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output file (stdout when omitted)");

    // run
    auto* run = app.add_subcommand("run", "simulate one scenario");
    std::string run_scenario;
    std::size_t run_nodes = 100;
    std::uint64_t run_seed = 1;
    std::string run_mode = "dlmtc";
    std::string run_out;
    PipelineFlags run_flags;
    run->add_option("--scenario", run_scenario, "scenario JSON (generated from --nodes/--seed when omitted)");
    run->add_option("--nodes", run_nodes, "sensor node count for a generated scenario")->capture_default_str();
    run->add_option("--seed", run_seed, "seed for a generated scenario")->capture_default_str();
    run->add_option("--mode", run_mode, "dlmt or dlmtc")
        ->check(CLI::IsMember({"dlmt", "dlmtc"}))
        ->capture_default_str();
    run->add_option("--out", run_out, "directory for metrics.json, energy.csv and deliveries.csv");
    run_flags.add(run);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run the network-size sweep and write aggregate CSVs");
    std::string sw_nodes = "50..300:50";
    std::string sw_modes = "dlmt,dlmtc";
    int sw_seeds = 10;
    unsigned sw_threads = 0;
    const char* env_out = std::getenv("DLMTC_OUT_DIR");
    std::string sw_out = env_out ? env_out : "sweep_out";
    bool sw_check = false;
    PipelineFlags sw_flags;
    sweep->add_option("--nodes", sw_nodes, "lo..hi:step or a comma list")->capture_default_str();
    sweep->add_option("--modes", sw_modes, "comma list of dlmt, dlmtc")->capture_default_str();
    sweep->add_option("--seeds", sw_seeds, "seeds per (N, mode)")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--threads", sw_threads, "worker threads, 0 for all cores")->capture_default_str();
    sweep->add_option("--out", sw_out, "output directory (default: $DLMTC_OUT_DIR or sweep_out)")
        ->capture_default_str();
    sweep->add_flag("--check", sw_check, "evaluate trend checks; exit 1 if any fails");
    sw_flags.add(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0, usage errors 2
    }

    try {
        if (*gen) {
            ScenarioParams params;
            params.num_nodes = gen_nodes;
            const Scenario sc = generate_scenario(params, gen_seed);
            if (gen_out.empty())
                std::cout << scenario_to_json(sc) << '\n';
            else
                save_scenario(sc, gen_out);
            return 0;
        }

        if (*run) {
            Scenario sc;
            if (!run_scenario.empty()) {
                sc = load_scenario(run_scenario);
            } else {
                ScenarioParams params;
                params.num_nodes = run_nodes;
                sc = generate_scenario(params, run_seed);
            }
            PipelineConfig cfg = run_flags.config();
            cfg.mode = mode_from_string(run_mode);
            cfg.record_energy_log = !run_out.empty();
            const SimResult r = run_simulation(sc, cfg);
            const std::string json = metrics_to_json(r.metrics);
            std::cout << json << '\n';
            if (!run_out.empty()) {
                fs::create_directories(run_out);
                open_out(fs::path(run_out) / "metrics.json") << json << '\n';
                auto energy = open_out(fs::path(run_out) / "energy.csv");
                write_energy_csv(energy, r.ledger);
                auto deliveries = open_out(fs::path(run_out) / "deliveries.csv");
                write_delivery_csv(deliveries, r.trace);
            }
            return 0;
        }

        SweepSpec spec;
        spec.node_counts = parse_node_counts(sw_nodes);
        spec.modes = parse_modes(sw_modes);
        spec.seeds = sw_seeds;
        spec.threads = sw_threads;
        spec.pipeline = sw_flags.config();
        validate_sweep_spec(spec);
        const SweepResult result = run_sweep(spec);
        write_sweep_outputs(result, sw_out);
        std::cout << "wrote " << result.rows.size() << " aggregate rows (" << result.cells.size() << " runs) to "
                  << sw_out << '\n';
        for (const auto& c : result.cells)
            if (!c.metrics)
                std::cerr << "run N=" << c.num_nodes << " " << to_string(c.mode) << " seed " << c.seed_index
                          << " failed: " << c.error << '\n';
        if (sw_check) {
            bool ok = true;
            for (const auto& c : check_sweep(result)) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
                ok = ok && c.passed;
            }
            return ok ? 0 : 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

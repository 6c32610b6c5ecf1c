#pragma once

// Batch runs over (network size, mode, seed) with per-cell error capture and
// mean/stddev aggregation to plot-ready CSVs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlmtc/model.hpp"
#include "dlmtc/sim.hpp"

namespace dlmtc {

struct SweepSpec {
    std::vector<std::size_t> node_counts{50, 100, 150, 200, 250, 300};
    std::vector<Mode> modes{Mode::dlmt, Mode::dlmtc};
    int seeds = 10;
    std::uint64_t base_seed = 1;
    ScenarioParams scenario;   // num_nodes is overridden per cell
    PipelineConfig pipeline;   // mode is overridden per cell
    unsigned threads = 0;      // 0: hardware concurrency
};

/// Throws std::invalid_argument unless node counts are non-empty and strictly
/// ascending, modes are non-empty and seeds >= 1.
void validate_sweep_spec(const SweepSpec& spec);

/// "50..300:50" -> 50,100,...,300; "100" -> 100; "50,100" -> 50,100.
std::vector<std::size_t> parse_node_counts(std::string_view text);
std::vector<Mode> parse_modes(std::string_view text);

/// Scenario seed for one cell. Both modes at the same (N, seed index) share it.
std::uint64_t cell_seed(const SweepSpec& spec, std::size_t num_nodes, int seed_index);

struct SweepCell {
    std::size_t num_nodes = 0;
    Mode mode = Mode::dlmt;
    int seed_index = 0;
    std::uint64_t seed = 0;
    std::optional<MetricsReport> metrics;  // empty when the run failed
    std::string error;
    double max_conservation_error = 0.0;
};

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single value
    std::size_t count = 0;
};

Stat summarize(const std::vector<double>& values);

struct AggregateRow {
    std::size_t num_nodes = 0;
    Mode mode = Mode::dlmt;
    std::size_t runs = 0;
    std::size_t failures = 0;
    Stat ade;
    Stat anlt;
    Stat bandwidth;
    Stat avg_delay;
    Stat delay_first_half;
    Stat delay_second_half;
    std::array<Stat, kDelayBins> delay_bins{};
};

struct SweepResult {
    std::vector<SweepCell> cells;   // ordered by (N, mode, seed index)
    std::vector<AggregateRow> rows; // ordered by (N, mode)
};

SweepResult run_sweep(const SweepSpec& spec);

/// Rows of `cells` folded per (N, mode), in spec order.
std::vector<AggregateRow> aggregate(const SweepSpec& spec, const std::vector<SweepCell>& cells);

/// Writes ade_vs_n.csv, anlt_vs_n.csv, bandwidth_vs_n.csv, delay_vs_time.csv
/// and runs.csv into `dir`, creating it if needed.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckLimits {
    double conservation = 1e-9;     // J
    double ade_margin = 1e-9;       // J
    double anlt_margin = 1e-6;      // s
    double bandwidth_margin = 0.0;
};

/// Trend and conservation checks over a finished sweep: lower ADE, longer
/// lifetime and higher bandwidth utilization for dlmtc at every N (each by
/// more than its margin), no per-run delay increase between halves for
/// dlmtc, energy conservation, and no failed cells.
std::vector<CheckResult> check_sweep(const SweepResult& result, const CheckLimits& limits = {});

}  // namespace dlmtc

#pragma once

// Discrete-event simulation of periodic reporting over scheduled aggregation
// trees, with exact piecewise-constant energy accounting.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlmtc/clustering.hpp"
#include "dlmtc/model.hpp"

namespace dlmtc {

/// dlmt: one tree over every sensor node and a static equal band split.
/// dlmtc: mixture clusters, one tree per cluster, on-demand band reallocation.
enum class Mode { dlmt, dlmtc };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view s);

struct PipelineConfig {
    Mode mode = Mode::dlmtc;
    std::optional<int> k;             // cluster count; default_cluster_count(N) when unset
    EmConfig em;
    int channels = 4;                 // HyMAC channels per cluster range
    double band_lo_hz = 0.0;
    double band_hz = 2.0e6;
    double horizon = 600.0;           // s
    double setup = 2.0;               // s of idle-only cluster formation before the first cycle
    std::size_t queue_capacity = 16;  // own reports per source; overflow drops the oldest
    double rate_window = 10.0;        // s, sliding window for per-cluster send counts
    bool record_energy_log = false;   // keep every 550 ms residual sample
    bool record_events = false;       // keep the event trace, transmissions and hop slots
};

enum class EventKind { slot_end, node_death, reconstruct, setup_end, report_ready, slot_begin, energy_log_tick };

std::string_view to_string(EventKind kind);

struct TraceEvent {
    double time = 0.0;
    EventKind kind = EventKind::slot_begin;
    std::uint32_t subject = 0;  // node id or cluster index
};

enum class EnergyBucket { idle, rx, tx };

struct EnergySample {
    double time = 0.0;
    NodeId node = 0;
    double residual = 0.0;
};

struct EnergyLedger {
    std::vector<double> initial;
    std::vector<double> residual;
    std::vector<std::array<double, 3>> dissipated;  // indexed by EnergyBucket
    std::vector<EnergySample> log;
    std::size_t ticks = 0;
    double max_conservation_error = 0.0;  // J, worst |initial - residual - dissipated| seen at a tick

    double total_dissipated(NodeId v) const;
};

struct Delivery {
    std::uint64_t packet_id = 0;
    NodeId source = 0;
    double generated_at = 0.0;
    double delivered_at = 0.0;
    int hops = 0;
    std::vector<int> hop_slots;  // slot index of each hop within its cycle, when recorded
};

struct Transmission {
    double time = 0.0;
    NodeId from = 0;
    NodeId to = 0;
    int cluster = 0;
    int slot = 0;
    std::size_t reports = 0;
};

struct Death {
    NodeId node = 0;
    double time = 0.0;
    bool source = false;
};

struct RunTrace {
    std::vector<Delivery> deliveries;
    std::vector<Death> deaths;
    double end_time = 0.0;
    double horizon = 0.0;
    double band_hz = 0.0;
    double occupied_hz_s = 0.0;  // sum over transmissions of channel width x airtime
    std::uint64_t transmissions = 0;
    std::uint64_t generated = 0;
    std::uint64_t dropped = 0;   // queue overflow
    std::uint64_t lost = 0;      // died in a buffer or in flight
    std::uint64_t reconstructions = 0;
    std::uint64_t unschedulable = 0;  // rebuilds that found no route to a sink
    int clusters = 0;
    std::vector<TraceEvent> events;
    std::vector<Transmission> transmission_log;
};

inline constexpr int kDelayBins = 10;

struct MetricsReport {
    double ade = 0.0;                  // J per sensor node
    double anlt = 0.0;                 // s, first source death (horizon if censored)
    bool anlt_censored = false;
    std::optional<double> last_source_death;
    std::optional<double> half_sources_dead;
    std::optional<double> avg_delay;   // s
    std::optional<double> delay_first_half;
    std::optional<double> delay_second_half;
    std::array<std::optional<double>, kDelayBins> delay_bins{};  // by generation time over [0, end_time)
    double bandwidth_utilization = 0.0;
    std::uint64_t delivered = 0;
    std::uint64_t generated = 0;
    std::uint64_t dropped = 0;
    std::uint64_t lost = 0;
    double end_time = 0.0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport compute_metrics(const EnergyLedger& ledger, const RunTrace& trace, const Scenario& scenario);

struct SimResult {
    MetricsReport metrics;
    EnergyLedger ledger;
    RunTrace trace;
};

/// Clusters, builds trees, schedules them and runs the event loop until the
/// horizon or until every sensor node is dead. Throws ScenarioError for an
/// invalid scenario and std::invalid_argument for a bad config.
SimResult run_simulation(const Scenario& scenario, const PipelineConfig& config);

std::string metrics_to_json(const MetricsReport& report, int indent = 2);

/// time,node,residual
void write_energy_csv(std::ostream& out, const EnergyLedger& ledger);
/// packet_id,source,generated_at,delivered_at,hops
void write_delivery_csv(std::ostream& out, const RunTrace& trace);

}  // namespace dlmtc

#pragma once

// Core domain types: nodes, the deployment scenario and the radio disk graph.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dlmtc {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Raised when a scenario cannot be generated or fails validation.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

enum class Role { source, relay, sink, subsink };
enum class NodeState { sleep, lpl, awake_listen, awake_transmit, dead };

std::string_view to_string(Role role);
std::string_view to_string(NodeState state);
Role role_from_string(std::string_view s);
NodeState node_state_from_string(std::string_view s);

struct Node {
    NodeId id = 0;
    Point position;
    double residual_energy = 0.0;  // joules
    Role role = Role::relay;
    double radio_range = 45.0;     // meters
    NodeState state = NodeState::lpl;
    double start_offset = 0.0;     // seconds; first report time for sources

    friend bool operator==(const Node&, const Node&) = default;
};

/// Inputs to generate_scenario(). Defaults follow the reference deployment
/// (55 nodes per 1652 m^2, five sinks, 10 % sources, 45 m radios).
struct ScenarioParams {
    std::size_t num_nodes = 100;
    std::size_t num_sinks = 5;
    double source_ratio = 0.10;
    double node_density = 55.0 / 1652.0;  // nodes / m^2
    double radio_range = 45.0;            // m
    std::size_t report_size = 138;        // bytes
    double report_rate = 1.0;             // packets / s
    double start_jitter = 5.0;            // s, upper bound of the uniform start offset
    double source_energy_lo = 10.0;       // J
    double source_energy_hi = 18.0;       // J
    double nonsource_energy_margin = 10.0;  // J above source_energy_hi
    double idle_power_mw = 40.0;
    double rx_power_mw = 400.0;
    double tx_power_mw = 680.0;
    double link_rate = 1.6e6;             // bit / s
    double energy_log_interval = 0.55;    // s
    std::size_t max_source_attempts = 10000;
};

/// Energy assigned to sinks. They are mains-powered for all practical purposes
/// and the simulator never draws from them.
inline constexpr double kSinkEnergy = 1.0e9;

/// A deployed network. Sensor nodes carry ids 0..num_nodes-1 and the sinks
/// follow them, so ids stay dense over the whole roster.
struct Scenario {
    double field_side = 0.0;
    std::size_t num_nodes = 0;
    std::size_t num_sinks = 0;
    double source_ratio = 0.0;
    double node_density = 0.0;
    double radio_range = 0.0;
    std::size_t report_size = 0;
    double report_rate = 0.0;
    double start_jitter = 0.0;
    double source_energy_lo = 0.0;
    double source_energy_hi = 0.0;
    double idle_power_mw = 0.0;
    double rx_power_mw = 0.0;
    double tx_power_mw = 0.0;
    double link_rate = 0.0;
    double energy_log_interval = 0.0;
    std::uint64_t rng_seed = 0;
    std::vector<Node> nodes;

    std::size_t size() const { return nodes.size(); }
    bool is_sink(NodeId id) const { return nodes.at(id).role == Role::sink; }
    bool is_source(NodeId id) const { return nodes.at(id).role == Role::source; }

    std::vector<NodeId> sensor_ids() const;
    std::vector<NodeId> sink_ids() const;
    std::vector<NodeId> source_ids() const;
    std::vector<Point> positions() const;
    std::vector<Point> sink_positions() const;

    /// Seconds needed to put one report on the air.
    double packet_airtime() const { return 8.0 * static_cast<double>(report_size) / link_rate; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Side of the square field that holds `num_nodes` at `density`.
double field_side_for(std::size_t num_nodes, double density);

/// Deterministic deployment: uniform node placement, uniform sinks, and a
/// rejection-sampled connected source set.
Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed);

/// Throws ScenarioError describing the first broken invariant.
void validate_scenario(const Scenario& scenario);

/// Undirected radio graph: u and v are adjacent iff |u - v| <= range.
class DiskGraph {
public:
    DiskGraph() = default;
    DiskGraph(std::span<const Point> positions, double radio_range);

    std::size_t size() const { return neighbors_.size(); }
    std::size_t edge_count() const { return edges_; }
    bool adjacent(NodeId u, NodeId v) const { return matrix_[index(u, v)] != 0; }
    std::span<const NodeId> neighbors(NodeId u) const { return neighbors_.at(u); }

    /// True when v is reachable from u in one or two hops (u != v).
    bool within_two_hops(NodeId u, NodeId v) const;

private:
    std::size_t index(NodeId u, NodeId v) const { return static_cast<std::size_t>(u) * size() + v; }

    std::vector<std::vector<NodeId>> neighbors_;
    std::vector<std::uint8_t> matrix_;
    std::size_t edges_ = 0;
};

DiskGraph disk_graph(const Scenario& scenario);

/// True when `subset` induces a connected subgraph (empty and singleton sets count as connected).
bool induces_connected_subgraph(const DiskGraph& graph, std::span<const NodeId> subset);

struct ClusterAssignment {
    int k = 0;
    std::vector<int> membership;     // indexed like the clustered point list
    std::vector<Point> centroids;    // mixture means

    std::vector<std::vector<std::size_t>> members() const;
};

}  // namespace dlmtc

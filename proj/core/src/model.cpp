#include "dlmtc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace dlmtc {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view to_string(Role role) {
    switch (role) {
        case Role::source: return "source";
        case Role::relay: return "relay";
        case Role::sink: return "sink";
        case Role::subsink: return "subsink";
    }
    return "relay";
}

std::string_view to_string(NodeState state) {
    switch (state) {
        case NodeState::sleep: return "sleep";
        case NodeState::lpl: return "lpl";
        case NodeState::awake_listen: return "awake_listen";
        case NodeState::awake_transmit: return "awake_transmit";
        case NodeState::dead: return "dead";
    }
    return "lpl";
}

Role role_from_string(std::string_view s) {
    if (s == "source") return Role::source;
    if (s == "relay") return Role::relay;
    if (s == "sink") return Role::sink;
    if (s == "subsink") return Role::subsink;
    throw ScenarioError("unknown node role: " + std::string(s));
}

NodeState node_state_from_string(std::string_view s) {
    if (s == "sleep") return NodeState::sleep;
    if (s == "lpl") return NodeState::lpl;
    if (s == "awake_listen") return NodeState::awake_listen;
    if (s == "awake_transmit") return NodeState::awake_transmit;
    if (s == "dead") return NodeState::dead;
    throw ScenarioError("unknown node state: " + std::string(s));
}

std::vector<NodeId> Scenario::sensor_ids() const {
    std::vector<NodeId> ids;
    for (const auto& n : nodes)
        if (n.role != Role::sink) ids.push_back(n.id);
    return ids;
}

std::vector<NodeId> Scenario::sink_ids() const {
    std::vector<NodeId> ids;
    for (const auto& n : nodes)
        if (n.role == Role::sink) ids.push_back(n.id);
    return ids;
}

std::vector<NodeId> Scenario::source_ids() const {
    std::vector<NodeId> ids;
    for (const auto& n : nodes)
        if (n.role == Role::source) ids.push_back(n.id);
    return ids;
}

std::vector<Point> Scenario::positions() const {
    std::vector<Point> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes) out.push_back(n.position);
    return out;
}

std::vector<Point> Scenario::sink_positions() const {
    std::vector<Point> out;
    for (const auto& n : nodes)
        if (n.role == Role::sink) out.push_back(n.position);
    return out;
}

double field_side_for(std::size_t num_nodes, double density) {
    return std::sqrt(static_cast<double>(num_nodes) / density);
}

namespace {

void check_params(const ScenarioParams& p) {
    if (p.num_nodes == 0) throw ScenarioError("scenario needs at least one sensor node");
    if (p.num_sinks == 0) throw ScenarioError("scenario needs at least one sink");
    if (!(p.node_density > 0.0)) throw ScenarioError("node density must be positive");
    if (!(p.source_ratio > 0.0 && p.source_ratio < 1.0))
        throw ScenarioError("source ratio must lie in (0, 1)");
    if (!(p.source_energy_lo >= 0.0 && p.source_energy_lo <= p.source_energy_hi))
        throw ScenarioError("source energy range must satisfy 0 <= lo <= hi");
    if (!(p.radio_range > 0.0)) throw ScenarioError("radio range must be positive");
    if (p.report_size == 0 || !(p.report_rate > 0.0) || !(p.link_rate > 0.0))
        throw ScenarioError("report size, report rate and link rate must be positive");
    if (!(p.start_jitter >= 0.0)) throw ScenarioError("start jitter must be non-negative");
    if (!(p.energy_log_interval > 0.0)) throw ScenarioError("energy log interval must be positive");
    if (p.idle_power_mw < 0.0 || p.rx_power_mw < 0.0 || p.tx_power_mw < 0.0)
        throw ScenarioError("power figures must be non-negative");
}

}  // namespace

Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed) {
    check_params(params);

    std::mt19937_64 rng(seed);
    const double side = field_side_for(params.num_nodes, params.node_density);
    std::uniform_real_distribution<double> coord(0.0, side);

    Scenario sc;
    sc.field_side = side;
    sc.num_nodes = params.num_nodes;
    sc.num_sinks = params.num_sinks;
    sc.source_ratio = params.source_ratio;
    sc.node_density = params.node_density;
    sc.radio_range = params.radio_range;
    sc.report_size = params.report_size;
    sc.report_rate = params.report_rate;
    sc.start_jitter = params.start_jitter;
    sc.source_energy_lo = params.source_energy_lo;
    sc.source_energy_hi = params.source_energy_hi;
    sc.idle_power_mw = params.idle_power_mw;
    sc.rx_power_mw = params.rx_power_mw;
    sc.tx_power_mw = params.tx_power_mw;
    sc.link_rate = params.link_rate;
    sc.energy_log_interval = params.energy_log_interval;
    sc.rng_seed = seed;

    const std::size_t total = params.num_nodes + params.num_sinks;
    sc.nodes.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        Node& n = sc.nodes[i];
        n.id = static_cast<NodeId>(i);
        n.position.x = coord(rng);
        n.position.y = coord(rng);
        n.radio_range = params.radio_range;
        n.state = NodeState::lpl;
        if (i < params.num_nodes) {
            n.role = Role::relay;
            n.residual_energy = params.source_energy_hi + params.nonsource_energy_margin;
        } else {
            n.role = Role::sink;
            n.residual_energy = kSinkEnergy;
        }
    }

    const auto want = static_cast<std::size_t>(
        std::ceil(params.source_ratio * static_cast<double>(params.num_nodes) - 1e-9));
    const std::size_t num_sources = std::clamp<std::size_t>(want, 1, params.num_nodes);

    const DiskGraph graph = disk_graph(sc);
    std::vector<NodeId> pool(params.num_nodes);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::vector<NodeId> chosen;
    bool found = false;
    for (std::size_t attempt = 0; attempt < params.max_source_attempts && !found; ++attempt) {
        // Partial Fisher-Yates over the sensor ids.
        std::vector<NodeId> ids = pool;
        for (std::size_t i = 0; i < num_sources; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
            std::swap(ids[i], ids[pick(rng)]);
        }
        chosen.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(num_sources));
        std::sort(chosen.begin(), chosen.end());
        found = induces_connected_subgraph(graph, chosen);
    }
    if (!found)
        throw ScenarioError("no connected source set found after " +
                            std::to_string(params.max_source_attempts) +
                            " attempts; density too low for the radio range");

    std::uniform_real_distribution<double> energy(params.source_energy_lo, params.source_energy_hi);
    std::uniform_real_distribution<double> jitter(0.0, params.start_jitter);
    for (NodeId id : chosen) {
        Node& n = sc.nodes[id];
        n.role = Role::source;
        n.residual_energy = params.source_energy_lo == params.source_energy_hi
                                ? params.source_energy_lo
                                : energy(rng);
        n.start_offset = params.start_jitter > 0.0 ? jitter(rng) : 0.0;
        if (n.residual_energy <= 0.0) n.state = NodeState::dead;
    }
    return sc;
}

void validate_scenario(const Scenario& sc) {
    if (sc.num_nodes == 0) throw ScenarioError("scenario has no sensor nodes");
    if (sc.nodes.size() != sc.num_nodes + sc.num_sinks)
        throw ScenarioError("node roster size does not match num_nodes + num_sinks");
    if (!(sc.link_rate > 0.0) || sc.report_size == 0 || !(sc.report_rate > 0.0))
        throw ScenarioError("report size, report rate and link rate must be positive");
    if (!(sc.radio_range > 0.0)) throw ScenarioError("radio range must be positive");
    if (sc.source_energy_lo > sc.source_energy_hi)
        throw ScenarioError("source energy range is inverted");
    if (!(sc.energy_log_interval > 0.0)) throw ScenarioError("energy log interval must be positive");
    std::size_t sinks = 0;
    for (std::size_t i = 0; i < sc.nodes.size(); ++i) {
        const Node& n = sc.nodes[i];
        if (n.id != i) throw ScenarioError("node ids must be dense and ordered");
        if (n.residual_energy < 0.0) throw ScenarioError("negative residual energy");
        if ((n.state == NodeState::dead) != (n.residual_energy == 0.0))
            throw ScenarioError("node " + std::to_string(i) + ": dead state must match zero energy");
        const bool sink = n.role == Role::sink;
        if (sink != (i >= sc.num_nodes))
            throw ScenarioError("sinks must occupy the ids after the sensor nodes");
        sinks += sink ? 1 : 0;
    }
    if (sinks != sc.num_sinks) throw ScenarioError("sink count mismatch");
}

DiskGraph::DiskGraph(std::span<const Point> positions, double radio_range)
    : neighbors_(positions.size()), matrix_(positions.size() * positions.size(), 0) {
    const std::size_t n = positions.size();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (distance(positions[u], positions[v]) <= radio_range) {
                matrix_[u * n + v] = 1;
                matrix_[v * n + u] = 1;
                ++edges_;
            }
        }
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (matrix_[u * n + v]) neighbors_[u].push_back(static_cast<NodeId>(v));
}

bool DiskGraph::within_two_hops(NodeId u, NodeId v) const {
    if (u == v) return false;
    if (adjacent(u, v)) return true;
    for (NodeId w : neighbors(u))
        if (adjacent(w, v)) return true;
    return false;
}

DiskGraph disk_graph(const Scenario& scenario) {
    const auto pos = scenario.positions();
    return DiskGraph(pos, scenario.radio_range);
}

bool induces_connected_subgraph(const DiskGraph& graph, std::span<const NodeId> subset) {
    if (subset.size() <= 1) return true;
    std::vector<char> in(graph.size(), 0), seen(graph.size(), 0);
    for (NodeId id : subset) in.at(id) = 1;
    std::queue<NodeId> q;
    q.push(subset.front());
    seen[subset.front()] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : graph.neighbors(u)) {
            if (in[v] && !seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
        }
    }
    return reached == subset.size();
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < membership.size(); ++i)
        out.at(static_cast<std::size_t>(membership[i])).push_back(i);
    return out;
}

}  // namespace dlmtc

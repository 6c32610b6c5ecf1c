#include "dlmtc/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dlmtc {

using nlohmann::json;

namespace {

json node_to_json(const Node& n) {
    return json{
        {"id", n.id},
        {"position", {{"x", n.position.x}, {"y", n.position.y}}},
        {"residual_energy", n.residual_energy},
        {"role", std::string(to_string(n.role))},
        {"radio_range", n.radio_range},
        {"state", std::string(to_string(n.state))},
        {"start_offset", n.start_offset},
    };
}

Node node_from_json(const json& j) {
    Node n;
    n.id = j.at("id").get<NodeId>();
    n.position.x = j.at("position").at("x").get<double>();
    n.position.y = j.at("position").at("y").get<double>();
    n.residual_energy = j.at("residual_energy").get<double>();
    n.role = role_from_string(j.at("role").get<std::string>());
    n.radio_range = j.at("radio_range").get<double>();
    n.state = node_state_from_string(j.at("state").get<std::string>());
    n.start_offset = j.value("start_offset", 0.0);
    return n;
}

}  // namespace

std::string scenario_to_json(const Scenario& sc, int indent) {
    json nodes = json::array();
    for (const auto& n : sc.nodes) nodes.push_back(node_to_json(n));
    json j{
        {"field_side", sc.field_side},
        {"num_nodes", sc.num_nodes},
        {"num_sinks", sc.num_sinks},
        {"source_ratio", sc.source_ratio},
        {"node_density", sc.node_density},
        {"radio_range", sc.radio_range},
        {"report_size", sc.report_size},
        {"report_rate", sc.report_rate},
        {"start_jitter", sc.start_jitter},
        {"source_energy_range", {sc.source_energy_lo, sc.source_energy_hi}},
        {"idle_power", sc.idle_power_mw},
        {"rx_power", sc.rx_power_mw},
        {"tx_power", sc.tx_power_mw},
        {"link_rate", sc.link_rate},
        {"energy_log_interval", sc.energy_log_interval},
        {"rng_seed", sc.rng_seed},
        {"nodes", std::move(nodes)},
    };
    return j.dump(indent);
}

Scenario scenario_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario JSON parse error: ") + e.what());
    }
    try {
        Scenario sc;
        sc.field_side = j.at("field_side").get<double>();
        sc.num_nodes = j.at("num_nodes").get<std::size_t>();
        sc.num_sinks = j.at("num_sinks").get<std::size_t>();
        sc.source_ratio = j.at("source_ratio").get<double>();
        sc.node_density = j.at("node_density").get<double>();
        sc.radio_range = j.at("radio_range").get<double>();
        sc.report_size = j.at("report_size").get<std::size_t>();
        sc.report_rate = j.at("report_rate").get<double>();
        sc.start_jitter = j.at("start_jitter").get<double>();
        const auto& range = j.at("source_energy_range");
        sc.source_energy_lo = range.at(0).get<double>();
        sc.source_energy_hi = range.at(1).get<double>();
        sc.idle_power_mw = j.at("idle_power").get<double>();
        sc.rx_power_mw = j.at("rx_power").get<double>();
        sc.tx_power_mw = j.at("tx_power").get<double>();
        sc.link_rate = j.at("link_rate").get<double>();
        sc.energy_log_interval = j.at("energy_log_interval").get<double>();
        sc.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        for (const auto& n : j.at("nodes")) sc.nodes.push_back(node_from_json(n));
        validate_scenario(sc);
        return sc;
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed scenario JSON: ") + e.what());
    }
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ScenarioError("cannot open " + path.string() + " for writing");
    out << scenario_to_json(scenario) << '\n';
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace dlmtc

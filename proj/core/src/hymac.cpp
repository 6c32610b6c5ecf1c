#include "dlmtc/hymac.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace dlmtc {

namespace {

std::vector<std::vector<NodeId>> children_of(const CandidateTree& tree) {
    std::vector<std::vector<NodeId>> kids(tree.parent.size());
    for (NodeId u : tree.order)
        if (tree.parent[u] != kNoNode) kids[tree.parent[u]].push_back(u);
    for (auto& k : kids) std::sort(k.begin(), k.end());
    return kids;
}

bool siblings(const CandidateTree& tree, NodeId a, NodeId b) {
    return tree.parent[a] != kNoNode && tree.parent[a] == tree.parent[b];
}

}  // namespace

Schedule schedule_tree(const CandidateTree& tree, const DiskGraph& graph, int available_channels) {
    if (available_channels < 1) throw std::invalid_argument("available_channels must be at least 1");
    const std::size_t n = tree.parent.size();
    if (tree.root == kNoNode || tree.root >= n) throw std::invalid_argument("tree has no root");
    for (NodeId u : tree.order)
        if (u >= graph.size()) throw std::invalid_argument("graph does not cover the tree");

    Schedule s;
    s.root = tree.root;
    s.cluster = tree.cluster;
    s.available_channels = available_channels;
    s.slot.assign(n, 0);
    s.channel.assign(n, -1);
    s.height.assign(n, -1);

    const auto kids = children_of(tree);
    std::vector<std::vector<NodeId>> by_height;
    std::vector<NodeId> queue{tree.root};
    s.height[tree.root] = 0;
    int default_slot = 0;

    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId v = queue[head];
        const auto h = static_cast<std::size_t>(s.height[v]);
        if (h == by_height.size()) {
            by_height.emplace_back();
            default_slot = s.t_max + 1;
        }
        s.slot[v] = default_slot;
        s.channel[v] = 0;

        for (bool moved = true; moved;) {
            moved = false;
            for (NodeId w : by_height[h]) {
                const bool sib = siblings(tree, v, w);
                if (s.slot[w] != s.slot[v]) continue;
                if (!sib && (s.channel[w] != s.channel[v] || !graph.within_two_hops(v, w))) continue;
                if (sib || s.channel[w] + 1 >= available_channels) {
                    s.slot[v] = s.slot[w] + 1;
                    s.channel[v] = 0;
                } else {
                    s.channel[v] = s.channel[w] + 1;
                }
                moved = true;
            }
        }

        by_height[h].push_back(v);
        s.nodes.push_back(v);
        s.t_max = std::max(s.t_max, s.slot[v]);
        for (NodeId c : kids[v]) {
            s.height[c] = s.height[v] + 1;
            queue.push_back(c);
        }
    }
    return s;
}

Schedule invert_slots(Schedule schedule) {
    for (NodeId v : schedule.nodes) schedule.slot[v] = schedule.t_max - schedule.slot[v] + 1;
    schedule.inverted = !schedule.inverted;
    return schedule;
}

std::vector<ScheduleViolation> validate_schedule(const Schedule& schedule, const CandidateTree& tree,
                                                 const DiskGraph& graph) {
    using Kind = ScheduleViolation::Kind;
    std::vector<ScheduleViolation> out;
    auto report = [&](Kind k, NodeId a, NodeId b, std::string msg) { out.push_back({k, a, b, std::move(msg)}); };

    std::vector<NodeId> nodes;
    for (NodeId u : tree.order) {
        if (!schedule.contains(u)) {
            report(Kind::unscheduled, u, kNoNode, "node " + std::to_string(u) + " has no slot");
            continue;
        }
        if (schedule.channel[u] < 0 || schedule.channel[u] >= schedule.available_channels)
            report(Kind::channel_range, u, kNoNode, "node " + std::to_string(u) + " channel out of range");
        nodes.push_back(u);
    }
    std::sort(nodes.begin(), nodes.end());

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const NodeId a = nodes[i], b = nodes[j];
            if (schedule.slot[a] != schedule.slot[b]) continue;
            const std::string pair = std::to_string(a) + " and " + std::to_string(b);
            if (siblings(tree, a, b)) {
                report(Kind::siblings, a, b, "siblings " + pair + " share slot " + std::to_string(schedule.slot[a]));
            } else if (schedule.height[a] == schedule.height[b] && schedule.channel[a] == schedule.channel[b] &&
                       a < graph.size() && b < graph.size() && graph.within_two_hops(a, b)) {
                report(Kind::interference, a, b, "nodes " + pair + " share slot and channel within two hops");
            }
        }
    }

    for (NodeId u : nodes) {
        const NodeId p = tree.parent[u];
        if (p == kNoNode || !schedule.contains(p)) continue;
        const bool ok = schedule.inverted ? schedule.slot[u] < schedule.slot[p] : schedule.slot[u] > schedule.slot[p];
        if (!ok)
            report(Kind::order, u, p,
                   "edge " + std::to_string(u) + "->" + std::to_string(p) + " slots out of order");
    }
    return out;
}

double channel_center_hz(const FreqRange& range, int channel, int available_channels) {
    return range.lo + (channel + 0.5) * (range.width() / available_channels);
}

void write_schedule_csv(std::ostream& out, const Schedule& schedule, bool header) {
    if (header) out << "node,height,slot,channel,cluster\n";
    for (NodeId v : schedule.nodes)
        out << v << ',' << schedule.height[v] << ',' << schedule.slot[v] << ',' << schedule.channel[v] << ','
            << schedule.cluster << '\n';
}

}  // namespace dlmtc

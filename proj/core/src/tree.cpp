#include "dlmtc/tree.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

namespace dlmtc {

std::vector<NodeId> CandidateTree::children(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId u : order)
        if (parent[u] == v) out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<NodeId> sorted_unique(std::span<const NodeId> members) {
    std::vector<NodeId> out(members.begin(), members.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double nearest_sink_distance(Point p, std::span<const Point> sinks) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& s : sinks) best = std::min(best, distance(p, s));
    return best;
}

// Is `a` a better parent than `b`? Higher energy first, lower id on ties.
bool better_parent(NodeId a, NodeId b, std::span<const double> energy) {
    if (b == kNoNode) return true;
    if (energy[a] != energy[b]) return energy[a] > energy[b];
    return a < b;
}

CandidateTree grow(const std::vector<NodeId>& members, const TreeInputs& in, NodeId root, int cluster) {
    const std::size_t n = in.graph.size();
    if (in.energy.size() < n || in.positions.size() < n)
        throw TreeError("energy/position tables do not cover the graph");

    CandidateTree t;
    t.cluster = cluster;
    t.root = root;
    t.parent.assign(n, kNoNode);
    t.depth.assign(n, -1);

    std::vector<char> member(n, 0);
    for (NodeId m : members) member.at(m) = 1;
    std::vector<NodeId> best(n, kNoNode);

    auto attach = [&](NodeId u, NodeId p) {
        t.parent[u] = p;
        t.depth[u] = p == kNoNode ? 0 : t.depth[p] + 1;
        t.order.push_back(u);
        for (NodeId w : in.graph.neighbors(u)) {
            if (!member[w] || t.depth[w] >= 0) continue;
            if (better_parent(u, best[w], in.energy)) best[w] = u;
        }
    };

    attach(root, kNoNode);
    for (;;) {
        NodeId pick = kNoNode;
        for (NodeId u : members) {
            if (t.depth[u] >= 0 || best[u] == kNoNode) continue;
            if (pick == kNoNode) {
                pick = u;
                continue;
            }
            const NodeId pu = best[u], pp = best[pick];
            if (pu != pp && better_parent(pu, pp, in.energy)) pick = u;
        }
        if (pick == kNoNode) break;
        attach(pick, best[pick]);
    }

    std::vector<NodeId> covered = t.order;
    std::sort(covered.begin(), covered.end());
    TreeSummary& s = t.summary;
    s.rows = covered.size();
    s.total_energy = 0.0;
    for (NodeId u : covered) s.total_energy += in.energy[u];
    for (NodeId u : covered) s.depth = std::max(s.depth, t.depth[u]);
    s.root_energy = in.energy[root];
    s.root_sink_distance = nearest_sink_distance(in.positions[root], in.sinks);
    s.root_index = root;
    return t;
}

}  // namespace

CandidateTree build_candidate_tree(std::span<const NodeId> members, const TreeInputs& in, NodeId root,
                                   int cluster) {
    const auto sorted = sorted_unique(members);
    if (!std::binary_search(sorted.begin(), sorted.end(), root))
        throw TreeError("root " + std::to_string(root) + " is not a member of the cluster");
    return grow(sorted, in, root, cluster);
}

CandidateTree tree_from_parents(NodeId root, std::vector<NodeId> parent, int cluster) {
    const std::size_t n = parent.size();
    if (root >= n) throw TreeError("root outside the parent table");
    if (parent[root] != kNoNode) throw TreeError("root has a parent");
    std::vector<std::vector<NodeId>> kids(n);
    for (NodeId v = 0; v < n; ++v) {
        if (parent[v] == kNoNode) continue;
        if (parent[v] >= n) throw TreeError("parent outside the table");
        kids[parent[v]].push_back(v);
    }

    CandidateTree t;
    t.cluster = cluster;
    t.root = root;
    t.depth.assign(n, -1);
    t.depth[root] = 0;
    t.order.push_back(root);
    for (std::size_t head = 0; head < t.order.size(); ++head) {
        const NodeId u = t.order[head];
        for (NodeId c : kids[u]) {
            t.depth[c] = t.depth[u] + 1;
            t.order.push_back(c);
        }
    }
    for (NodeId v = 0; v < n; ++v)
        if (parent[v] != kNoNode && t.depth[v] < 0) throw TreeError("parent table has a cycle or a second root");
    t.parent = std::move(parent);
    t.summary.rows = t.order.size();
    for (NodeId u : t.order) t.summary.depth = std::max(t.summary.depth, t.depth[u]);
    t.summary.root_index = root;
    return t;
}

bool best_dlmtc(const TreeSummary& i, const TreeSummary& j) {
    if (j.rows > i.rows) return true;
    if (j.rows != i.rows) return false;
    if (j.total_energy > i.total_energy) return true;
    if (j.total_energy != i.total_energy) return false;
    if (j.depth < i.depth) return true;
    if (j.depth != i.depth) return false;
    if (j.root_energy > i.root_energy && j.root_sink_distance < i.root_sink_distance) return true;
    return j.root_energy == i.root_energy && j.root_index < i.root_index;
}

CandidateTree select_subsink(std::span<const NodeId> members, const TreeInputs& in, int cluster) {
    const auto sorted = sorted_unique(members);
    if (sorted.empty()) throw TreeError("cannot select a sub-sink for an empty cluster");
    CandidateTree best = grow(sorted, in, sorted.front(), cluster);
    for (std::size_t r = 1; r < sorted.size(); ++r) {
        CandidateTree challenger = grow(sorted, in, sorted[r], cluster);
        if (best_dlmtc(best.summary, challenger.summary)) best = std::move(challenger);
    }
    return best;
}

std::vector<TreeSummary> candidate_summaries(std::span<const NodeId> members, const TreeInputs& in) {
    const auto sorted = sorted_unique(members);
    std::vector<TreeSummary> out;
    out.reserve(sorted.size());
    for (NodeId r : sorted) out.push_back(grow(sorted, in, r, 0).summary);
    return out;
}

void write_tree_dot(std::ostream& out, const CandidateTree& tree, std::span<const double> energy) {
    out << "digraph cluster_" << tree.cluster << " {\n";
    out << "  rankdir=BT;\n";
    for (NodeId u : tree.order) {
        out << "  n" << u << " [label=\"" << u;
        if (u < energy.size()) out << "\\n" << energy[u] << " J";
        out << '"';
        if (u == tree.root) out << ", shape=box";
        out << "];\n";
    }
    for (NodeId u : tree.order)
        if (tree.parent[u] != kNoNode) out << "  n" << u << " -> n" << tree.parent[u] << ";\n";
    out << "}\n";
}

}  // namespace dlmtc

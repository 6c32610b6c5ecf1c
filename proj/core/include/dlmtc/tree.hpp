#pragma once

// Per-cluster aggregation trees. Each cluster member is tried as a root, the
// tree is grown greedily towards the highest-residual-energy parents, and the
// candidates are ranked with the five-rule BestDLMTC comparator.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "dlmtc/model.hpp"

namespace dlmtc {

class TreeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct TreeSummary {
    std::size_t rows = 0;            // nodes covered
    double total_energy = 0.0;       // J, summed in ascending NodeId order
    int depth = 0;                   // hops, root to deepest leaf
    double root_energy = 0.0;        // J
    double root_sink_distance = 0.0; // m, to the nearest sink
    NodeId root_index = kNoNode;

    friend bool operator==(const TreeSummary&, const TreeSummary&) = default;
};

/// Parent-pointer tree over (part of) one cluster. Per-node vectors are
/// indexed by global NodeId; nodes outside the tree hold kNoNode / -1.
struct CandidateTree {
    int cluster = 0;
    NodeId root = kNoNode;
    std::vector<NodeId> order;   // nodes in attachment order, root first
    std::vector<NodeId> parent;  // kNoNode for the root and for uncovered nodes
    std::vector<int> depth;      // -1 for uncovered nodes
    TreeSummary summary;

    bool contains(NodeId v) const { return v < depth.size() && depth[v] >= 0; }
    std::vector<NodeId> children(NodeId v) const;
};

/// Everything tree construction reads about the network.
struct TreeInputs {
    const DiskGraph& graph;
    std::span<const double> energy;     // residual energy by NodeId
    std::span<const Point> positions;   // by NodeId
    std::span<const Point> sinks;
};

/// Grows a tree from `root` over `members`. At every step the frontier member
/// whose best in-tree neighbour has the most residual energy is attached to
/// that neighbour (ties: lower parent id, then lower member id). Members not
/// connected to the root stay uncovered.
CandidateTree build_candidate_tree(std::span<const NodeId> members, const TreeInputs& in, NodeId root,
                                   int cluster = 0);

/// True when candidate j beats the incumbent i:
///   1. more rows
///   2. equal rows, more total energy
///   3. equal rows and energy, shallower
///   4. equal rows, energy and depth, richer root AND closer to a sink
///   5. equal rows, energy, depth and root energy, lower root index
bool best_dlmtc(const TreeSummary& i, const TreeSummary& j);

/// Wraps an explicit parent table (kNoNode marks the root and any node outside
/// the tree) as a CandidateTree. Order is breadth-first from the root with
/// children by ascending id; summary energies are left at zero. Throws if the
/// table does not describe a single tree rooted at `root`.
CandidateTree tree_from_parents(NodeId root, std::vector<NodeId> parent, int cluster = 0);

/// Builds one candidate per member and folds best_dlmtc over them in
/// ascending root-id order.
CandidateTree select_subsink(std::span<const NodeId> members, const TreeInputs& in, int cluster = 0);

/// Summaries of every candidate root, ascending by root id.
std::vector<TreeSummary> candidate_summaries(std::span<const NodeId> members, const TreeInputs& in);

/// Graphviz rendering; the root is drawn as a box.
void write_tree_dot(std::ostream& out, const CandidateTree& tree, std::span<const double> energy = {});

}  // namespace dlmtc

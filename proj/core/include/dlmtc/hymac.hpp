#pragma once

// Hybrid TDMA/FDMA slot and channel assignment over an aggregation tree.

#include <iosfwd>
#include <string>
#include <vector>

#include "dlmtc/fdma.hpp"
#include "dlmtc/model.hpp"
#include "dlmtc/tree.hpp"

namespace dlmtc {

/// Per-node (slot, channel) over one tree. Vectors are indexed by NodeId;
/// unscheduled nodes hold slot 0, channel -1, height -1.
struct Schedule {
    NodeId root = kNoNode;
    int cluster = 0;
    int t_max = 0;
    int available_channels = 1;
    bool inverted = false;
    std::vector<NodeId> nodes;  // BFS order
    std::vector<int> slot;
    std::vector<int> channel;
    std::vector<int> height;

    bool contains(NodeId v) const { return v < slot.size() && slot[v] > 0; }

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// BFS from the root, children in ascending id order. A node starts in the
/// first slot of its height level on channel 0 and is bumped until no
/// already-scheduled node of the same height within two hops shares its
/// (slot, channel) and no sibling shares its slot. Siblings and exhausted
/// channels move the slot past the blocker's; otherwise the channel moves.
/// Throws std::invalid_argument if available_channels < 1 or the graph does
/// not cover the tree.
Schedule schedule_tree(const CandidateTree& tree, const DiskGraph& graph, int available_channels);

/// t -> t_max - t + 1 on every scheduled node; toggles `inverted`.
Schedule invert_slots(Schedule schedule);

struct ScheduleViolation {
    enum class Kind { unscheduled, channel_range, interference, siblings, order };
    Kind kind;
    NodeId a = kNoNode;
    NodeId b = kNoNode;
    std::string message;
};

/// Checks coverage, channel bounds, same-height two-hop (slot, channel)
/// clashes, sibling slot clashes, and edge order: child slot < parent slot
/// when the schedule is inverted, greater otherwise.
std::vector<ScheduleViolation> validate_schedule(const Schedule& schedule, const CandidateTree& tree,
                                                 const DiskGraph& graph);

/// Centre frequency of channel `c` inside `range`.
double channel_center_hz(const FreqRange& range, int channel, int available_channels);

/// node,height,slot,channel,cluster in BFS order.
void write_schedule_csv(std::ostream& out, const Schedule& schedule, bool header = true);

}  // namespace dlmtc

#pragma once

// Sink-side frequency plan: the band is cut into one equal range per cluster,
// ranges return to a free pool when a sub-sink's stream completes, and a
// requesting cluster either takes the widest free range or the upper half of
// the busiest-but-slowest holder's widest range.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlmtc {

class FdmaError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// [lo, hi) in hertz. The range ending at the band edge is closed.
struct FreqRange {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    friend bool operator==(const FreqRange&, const FreqRange&) = default;
};

struct FrequencyPlan {
    FreqRange band;
    int k = 0;
    std::vector<std::vector<FreqRange>> allocations;  // per cluster, sorted by lo
    std::vector<FreqRange> free_pool;                 // sorted by lo, adjacent ranges merged

    bool holds(int cluster) const { return !allocations.at(static_cast<std::size_t>(cluster)).empty(); }
    double allocated_width(int cluster) const;
    double total_allocated() const;

    friend bool operator==(const FrequencyPlan&, const FrequencyPlan&) = default;
};

struct ClusterRateStats {
    int cluster = 0;
    std::uint64_t packets_sent = 0;  // over the sliding window
    double window = 10.0;            // seconds
};

FrequencyPlan initial_allocate(FreqRange band, int k);

/// Moves every range held by `cluster` to the free pool. Idempotent.
FrequencyPlan withdraw_on_completion(FrequencyPlan plan, int cluster);

/// Gives `cluster` (which must hold nothing) the widest free range, or, with
/// an empty pool, the upper half of the widest range of the allocated cluster
/// with the fewest packets sent (ties: lowest index). Clusters missing from
/// `stats` count as having sent nothing.
FrequencyPlan request_allocation(FrequencyPlan plan, int cluster, std::span<const ClusterRateStats> stats);

/// Descriptions of every broken plan invariant; empty when the allocated and
/// free ranges tile the band exactly.
std::vector<std::string> check_partition(const FrequencyPlan& plan);

/// Rows: cluster,range_lo_hz,range_hi_hz,timestamp. Free ranges use cluster -1.
void write_plan_csv_header(std::ostream& out);
void write_plan_csv(std::ostream& out, const FrequencyPlan& plan, double timestamp);

}  // namespace dlmtc

#include "dlmtc/fdma.hpp"

#include <algorithm>
#include <ostream>

namespace dlmtc {

namespace {

void check_cluster(const FrequencyPlan& plan, int cluster) {
    if (cluster < 0 || cluster >= plan.k)
        throw FdmaError("cluster " + std::to_string(cluster) + " outside plan of " + std::to_string(plan.k));
}

bool by_lo(const FreqRange& a, const FreqRange& b) { return a.lo < b.lo; }

void merge_free(std::vector<FreqRange>& pool) {
    std::sort(pool.begin(), pool.end(), by_lo);
    std::vector<FreqRange> merged;
    for (const auto& r : pool) {
        if (!merged.empty() && merged.back().hi == r.lo)
            merged.back().hi = r.hi;
        else
            merged.push_back(r);
    }
    pool = std::move(merged);
}

// Index of the widest range; ties go to the lowest start frequency.
std::size_t widest(const std::vector<FreqRange>& ranges) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ranges.size(); ++i) {
        const double w = ranges[i].width(), bw = ranges[best].width();
        if (w > bw || (w == bw && ranges[i].lo < ranges[best].lo)) best = i;
    }
    return best;
}

}  // namespace

double FrequencyPlan::allocated_width(int cluster) const {
    double w = 0.0;
    for (const auto& r : allocations.at(static_cast<std::size_t>(cluster))) w += r.width();
    return w;
}

double FrequencyPlan::total_allocated() const {
    double w = 0.0;
    for (std::size_t c = 0; c < allocations.size(); ++c) w += allocated_width(static_cast<int>(c));
    return w;
}

FrequencyPlan initial_allocate(FreqRange band, int k) {
    if (k < 1) throw FdmaError("frequency plan needs at least one cluster");
    if (!(band.hi > band.lo)) throw FdmaError("band must have positive width");
    FrequencyPlan plan;
    plan.band = band;
    plan.k = k;
    plan.allocations.resize(static_cast<std::size_t>(k));
    const double span = band.width();
    double lo = band.lo;
    for (int i = 0; i < k; ++i) {
        const double hi = i + 1 == k ? band.hi : band.lo + span * (i + 1) / k;
        plan.allocations[static_cast<std::size_t>(i)].push_back({lo, hi});
        lo = hi;
    }
    return plan;
}

FrequencyPlan withdraw_on_completion(FrequencyPlan plan, int cluster) {
    check_cluster(plan, cluster);
    auto& held = plan.allocations[static_cast<std::size_t>(cluster)];
    if (held.empty()) return plan;
    plan.free_pool.insert(plan.free_pool.end(), held.begin(), held.end());
    held.clear();
    merge_free(plan.free_pool);
    return plan;
}

FrequencyPlan request_allocation(FrequencyPlan plan, int cluster, std::span<const ClusterRateStats> stats) {
    check_cluster(plan, cluster);
    if (plan.holds(cluster))
        throw FdmaError("cluster " + std::to_string(cluster) + " already holds a range");

    auto& mine = plan.allocations[static_cast<std::size_t>(cluster)];
    if (!plan.free_pool.empty()) {
        const std::size_t i = widest(plan.free_pool);
        mine.push_back(plan.free_pool[i]);
        plan.free_pool.erase(plan.free_pool.begin() + static_cast<std::ptrdiff_t>(i));
        return plan;
    }

    std::vector<std::uint64_t> sent(static_cast<std::size_t>(plan.k), 0);
    for (const auto& s : stats)
        if (s.cluster >= 0 && s.cluster < plan.k) sent[static_cast<std::size_t>(s.cluster)] = s.packets_sent;

    int victim = -1;
    for (int c = 0; c < plan.k; ++c) {
        if (c == cluster || !plan.holds(c)) continue;
        if (victim < 0 || sent[static_cast<std::size_t>(c)] < sent[static_cast<std::size_t>(victim)]) victim = c;
    }
    if (victim < 0) throw FdmaError("band exhausted: no free range and no cluster to split");

    auto& theirs = plan.allocations[static_cast<std::size_t>(victim)];
    const std::size_t i = widest(theirs);
    const FreqRange r = theirs[i];
    const double mid = r.lo + 0.5 * (r.hi - r.lo);
    if (!(mid > r.lo && mid < r.hi)) throw FdmaError("range too narrow to split");
    theirs[i].hi = mid;
    mine.push_back({mid, r.hi});
    return plan;
}

std::vector<std::string> check_partition(const FrequencyPlan& plan) {
    std::vector<std::string> problems;
    std::vector<FreqRange> all;
    for (std::size_t c = 0; c < plan.allocations.size(); ++c) {
        for (const auto& r : plan.allocations[c]) {
            if (!(r.width() > 0.0))
                problems.push_back("cluster " + std::to_string(c) + " holds an empty range");
            all.push_back(r);
        }
    }
    all.insert(all.end(), plan.free_pool.begin(), plan.free_pool.end());
    if (all.empty()) {
        problems.emplace_back("plan covers nothing");
        return problems;
    }
    std::sort(all.begin(), all.end(), by_lo);
    if (all.front().lo != plan.band.lo) problems.emplace_back("band start is not covered");
    if (all.back().hi != plan.band.hi) problems.emplace_back("band end is not covered");
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (all[i - 1].hi < all[i].lo) problems.emplace_back("gap in coverage");
        if (all[i - 1].hi > all[i].lo) problems.emplace_back("overlapping ranges");
    }
    if (plan.total_allocated() > plan.band.width() * (1.0 + 1e-12))
        problems.emplace_back("allocated width exceeds the band");
    return problems;
}

void write_plan_csv_header(std::ostream& out) { out << "cluster,range_lo_hz,range_hi_hz,timestamp\n"; }

void write_plan_csv(std::ostream& out, const FrequencyPlan& plan, double timestamp) {
    const auto old = out.precision(17);
    for (std::size_t c = 0; c < plan.allocations.size(); ++c)
        for (const auto& r : plan.allocations[c]) out << c << ',' << r.lo << ',' << r.hi << ',' << timestamp << '\n';
    for (const auto& r : plan.free_pool) out << -1 << ',' << r.lo << ',' << r.hi << ',' << timestamp << '\n';
    out.precision(old);
}

}  // namespace dlmtc

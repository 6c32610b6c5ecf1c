#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dlmtc/fdma.hpp"

using namespace dlmtc;

namespace {

const FreqRange kBand{0.0, 2.0e6};

// Cluster 3 holds nothing and the pool is empty; clusters 0, 1 hold a quarter
// each and cluster 2 holds the upper half.
FrequencyPlan exhausted_plan() {
    FrequencyPlan p = initial_allocate(kBand, 4);
    p = withdraw_on_completion(p, 3);
    p = withdraw_on_completion(p, 2);
    return request_allocation(p, 2, {});
}

}  // namespace

TEST(Fdma, InitialSplitIsEqualAndExact) {
    const FrequencyPlan p = initial_allocate(kBand, 4);
    ASSERT_EQ(p.allocations.size(), 4u);
    for (int c = 0; c < 4; ++c) {
        ASSERT_EQ(p.allocations[static_cast<std::size_t>(c)].size(), 1u);
        EXPECT_DOUBLE_EQ(p.allocated_width(c), 5.0e5);
    }
    EXPECT_EQ(p.allocations[3][0].hi, kBand.hi);
    EXPECT_TRUE(p.free_pool.empty());
    EXPECT_TRUE(check_partition(p).empty());
    EXPECT_THROW(initial_allocate(kBand, 0), FdmaError);
    EXPECT_THROW(initial_allocate({1.0, 1.0}, 2), FdmaError);
}

TEST(Fdma, WithdrawCoalescesAndIsIdempotent) {
    FrequencyPlan p = initial_allocate(kBand, 4);
    p = withdraw_on_completion(p, 1);
    p = withdraw_on_completion(p, 2);
    ASSERT_EQ(p.free_pool.size(), 1u);
    EXPECT_EQ(p.free_pool[0], (FreqRange{5.0e5, 1.5e6}));
    EXPECT_EQ(withdraw_on_completion(p, 2), p);
    EXPECT_TRUE(check_partition(p).empty());
}

TEST(Fdma, RequestTakesWidestFreeRangeWhole) {
    FrequencyPlan p = initial_allocate(kBand, 4);
    p = withdraw_on_completion(p, 0);
    p = withdraw_on_completion(p, 2);
    p = withdraw_on_completion(p, 3);
    // Free: [0, 0.5M) and [1M, 2M).
    p = request_allocation(p, 0, {});
    EXPECT_EQ(p.allocations[0], (std::vector<FreqRange>{{1.0e6, 2.0e6}}));
    p = request_allocation(p, 2, {});
    EXPECT_EQ(p.allocations[2], (std::vector<FreqRange>{{0.0, 5.0e5}}));
    EXPECT_TRUE(p.free_pool.empty());
    EXPECT_TRUE(check_partition(p).empty());
}

TEST(Fdma, EqualWidthTieGoesToLowestStart) {
    FrequencyPlan p = initial_allocate(kBand, 4);
    p = withdraw_on_completion(p, 0);
    p = withdraw_on_completion(p, 2);
    p = request_allocation(p, 2, {});
    EXPECT_EQ(p.allocations[2][0].lo, 0.0);
}

TEST(Fdma, EmptyPoolSplitsSlowestHolder) {
    FrequencyPlan p = exhausted_plan();
    ASSERT_TRUE(p.free_pool.empty());
    const std::vector<ClusterRateStats> stats{{0, 40, 10.0}, {1, 7, 10.0}, {2, 7, 10.0}};
    p = request_allocation(p, 3, stats);
    // 1 and 2 tie on packets; the lower index gives up the upper half.
    EXPECT_EQ(p.allocations[1], (std::vector<FreqRange>{{5.0e5, 7.5e5}}));
    EXPECT_EQ(p.allocations[3], (std::vector<FreqRange>{{7.5e5, 1.0e6}}));
    EXPECT_TRUE(check_partition(p).empty());
}

TEST(Fdma, SplitUsesVictimsWidestRange) {
    FrequencyPlan p = exhausted_plan();
    const std::vector<ClusterRateStats> stats{{0, 40, 10.0}, {1, 40, 10.0}, {2, 1, 10.0}};
    p = request_allocation(p, 3, stats);
    EXPECT_EQ(p.allocations[2], (std::vector<FreqRange>{{1.0e6, 1.5e6}}));
    EXPECT_EQ(p.allocations[3], (std::vector<FreqRange>{{1.5e6, 2.0e6}}));
}

TEST(Fdma, MissingStatsCountAsSilent) {
    FrequencyPlan p = exhausted_plan();
    const std::vector<ClusterRateStats> stats{{1, 3, 10.0}, {2, 3, 10.0}};
    p = request_allocation(p, 3, stats);
    EXPECT_EQ(p.allocations[0], (std::vector<FreqRange>{{0.0, 2.5e5}}));
}

TEST(Fdma, RequestErrors) {
    FrequencyPlan p = initial_allocate(kBand, 2);
    EXPECT_THROW(request_allocation(p, 0, {}), FdmaError);  // already holds
    EXPECT_THROW(request_allocation(p, 5, {}), FdmaError);
    EXPECT_THROW(withdraw_on_completion(p, -1), FdmaError);
}

TEST(Fdma, PartitionCheckerSpotsDamage) {
    FrequencyPlan p = initial_allocate(kBand, 2);
    p.allocations[0][0].hi = 9.0e5;
    EXPECT_FALSE(check_partition(p).empty());
    FrequencyPlan q = initial_allocate(kBand, 2);
    q.free_pool.push_back({0.0, 1.0});
    EXPECT_FALSE(check_partition(q).empty());
}

TEST(Fdma, RandomSequencesKeepExactCover) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const int k = 2 + static_cast<int>(seed % 7);
        FrequencyPlan p = initial_allocate(kBand, k);
        std::uniform_int_distribution<int> pick(0, k - 1);
        std::uniform_int_distribution<std::uint64_t> sent(0, 50);
        for (int step = 0; step < 300; ++step) {
            const int c = pick(rng);
            if (p.holds(c)) {
                p = withdraw_on_completion(p, c);
            } else {
                std::vector<ClusterRateStats> stats;
                for (int i = 0; i < k; ++i) stats.push_back({i, sent(rng), 10.0});
                p = request_allocation(p, c, stats);
                EXPECT_TRUE(p.holds(c));
            }
            const auto problems = check_partition(p);
            ASSERT_TRUE(problems.empty()) << "seed " << seed << " step " << step << ": " << problems.front();
        }
    }
}

TEST(Fdma, CsvDump) {
    FrequencyPlan p = initial_allocate(kBand, 2);
    p = withdraw_on_completion(p, 1);
    std::ostringstream os;
    write_plan_csv_header(os);
    write_plan_csv(os, p, 1.5);
    EXPECT_EQ(os.str(), "cluster,range_lo_hz,range_hi_hz,timestamp\n0,0,1000000,1.5\n-1,1000000,2000000,1.5\n");
}

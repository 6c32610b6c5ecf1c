#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dlmtc/hymac.hpp"
#include "oracles.hpp"

using namespace dlmtc;

namespace {

DiskGraph line_graph(std::vector<Point> pts) { return DiskGraph(pts, 45.0); }

}  // namespace

TEST(Hymac, SiblingsGetDistinctSlots) {
    // Root 0 with children 1 and 2, all mutually in range.
    const DiskGraph g = line_graph({{0, 0}, {20, 0}, {0, 20}});
    const CandidateTree t = tree_from_parents(0, {kNoNode, 0, 0});
    const Schedule s = schedule_tree(t, g, 4);
    EXPECT_NE(s.slot[1], s.slot[2]);
    EXPECT_EQ(s.slot[0], 1);
    EXPECT_TRUE(validate_schedule(s, t, g).empty());
}

TEST(Hymac, CousinsShareSlotOnDifferentChannels) {
    //      0
    //    1   2
    //    3   4     3 and 4 are 2-hop neighbours with different parents.
    const DiskGraph g = line_graph({{50, 0}, {20, 30}, {80, 30}, {30, 60}, {70, 60}});
    const CandidateTree t = tree_from_parents(0, {kNoNode, 0, 0, 1, 2});
    const Schedule s = schedule_tree(t, g, 4);
    ASSERT_TRUE(g.within_two_hops(3, 4));
    EXPECT_EQ(s.slot[3], s.slot[4]);
    EXPECT_NE(s.channel[3], s.channel[4]);
    EXPECT_TRUE(validate_schedule(s, t, g).empty());
}

TEST(Hymac, SingleChannelFallsBackToSlots) {
    const DiskGraph g = line_graph({{50, 0}, {20, 30}, {80, 30}, {30, 60}, {70, 60}});
    const CandidateTree t = tree_from_parents(0, {kNoNode, 0, 0, 1, 2});
    const Schedule s = schedule_tree(t, g, 1);
    EXPECT_NE(s.slot[3], s.slot[4]);
    EXPECT_EQ(s.channel[3], 0);
    EXPECT_EQ(s.channel[4], 0);
}

TEST(Hymac, InversionExamples) {
    Schedule s;
    s.t_max = 5;
    s.nodes = {0, 1, 2};
    s.slot = {1, 2, 3};
    s.channel = {0, 0, 0};
    s.height = {0, 1, 1};
    const Schedule inv = invert_slots(s);
    EXPECT_EQ(inv.slot, (std::vector<int>{5, 4, 3}));
    EXPECT_EQ(inv.t_max, 5);
    EXPECT_TRUE(inv.inverted);
    EXPECT_EQ(invert_slots(inv), s);
}

TEST(Hymac, RandomTreesPassBruteForceOracle) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = trial == 0 ? 15 : 2 + static_cast<std::size_t>(rng() % 40);
        const int channels = 1 + static_cast<int>(rng() % 4);
        const auto rt = oracle::random_tree(rng, n);
        const Schedule s = schedule_tree(rt.tree, rt.graph, channels);
        EXPECT_TRUE(oracle::schedule_conflicts(s, rt.tree, rt.graph).empty()) << "trial " << trial;
        const Schedule inv = invert_slots(s);
        EXPECT_TRUE(oracle::schedule_conflicts(inv, rt.tree, rt.graph).empty()) << "trial " << trial;
        EXPECT_TRUE(validate_schedule(inv, rt.tree, rt.graph).empty()) << "trial " << trial;
        EXPECT_GE(s.t_max, rt.tree.summary.depth + 1);
        for (NodeId v : rt.tree.order) EXPECT_EQ(s.height[v], rt.tree.depth[v]);
    }
}

TEST(Hymac, ScheduleIsDeterministic) {
    std::mt19937_64 a(3), b(3);
    const auto ta = oracle::random_tree(a, 30), tb = oracle::random_tree(b, 30);
    EXPECT_EQ(schedule_tree(ta.tree, ta.graph, 2), schedule_tree(tb.tree, tb.graph, 2));
}

TEST(Hymac, ValidatorReportsSiblingClash) {
    const DiskGraph g = line_graph({{0, 0}, {20, 0}, {0, 20}});
    const CandidateTree t = tree_from_parents(0, {kNoNode, 0, 0});
    Schedule s = invert_slots(schedule_tree(t, g, 4));
    s.slot[1] = 3;
    s.slot[2] = 3;
    s.slot[0] = 4;
    s.t_max = 4;
    const auto v = validate_schedule(s, t, g);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ScheduleViolation::Kind::siblings);
}

TEST(Hymac, ValidatorReportsOrderAndCoverage) {
    const DiskGraph g = line_graph({{0, 0}, {20, 0}});
    const CandidateTree t = tree_from_parents(0, {kNoNode, 0});
    Schedule s = schedule_tree(t, g, 2);  // not inverted: child after parent
    EXPECT_TRUE(validate_schedule(s, t, g).empty());
    s.inverted = true;
    EXPECT_EQ(validate_schedule(s, t, g).size(), 1u);
    s.slot[1] = 0;
    EXPECT_EQ(validate_schedule(s, t, g)[0].kind, ScheduleViolation::Kind::unscheduled);
}

TEST(Hymac, SingleNodeTree) {
    const DiskGraph g = line_graph({{0, 0}});
    const CandidateTree t = tree_from_parents(0, {kNoNode});
    const Schedule s = invert_slots(schedule_tree(t, g, 3));
    EXPECT_EQ(s.t_max, 1);
    EXPECT_EQ(s.slot[0], 1);
    EXPECT_TRUE(validate_schedule(s, t, g).empty());
    EXPECT_THROW(schedule_tree(t, g, 0), std::invalid_argument);
}

TEST(Hymac, ChannelCentresAndCsv) {
    EXPECT_DOUBLE_EQ(channel_center_hz({1.0e6, 2.0e6}, 0, 4), 1.125e6);
    EXPECT_DOUBLE_EQ(channel_center_hz({1.0e6, 2.0e6}, 3, 4), 1.875e6);
    const DiskGraph g = line_graph({{0, 0}, {20, 0}});
    const Schedule s = schedule_tree(tree_from_parents(0, {kNoNode, 0}), g, 2);
    std::ostringstream os;
    write_schedule_csv(os, s);
    EXPECT_EQ(os.str(), "node,height,slot,channel,cluster\n0,0,1,0,0\n1,1,2,0,0\n");
}

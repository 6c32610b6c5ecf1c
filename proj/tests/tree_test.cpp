#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dlmtc/tree.hpp"
#include "oracles.hpp"

using namespace dlmtc;

namespace {

struct Net {
    std::vector<Point> pos;
    std::vector<Point> sinks;
    std::vector<double> energy;
    DiskGraph graph;

    TreeInputs inputs() const { return {graph, energy, pos, sinks}; }
};

Net random_net(std::uint64_t seed, std::size_t n, double side, bool distinct_energy) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, side), e(10.0, 18.0);
    Net net;
    for (std::size_t i = 0; i < n; ++i) net.pos.push_back({u(rng), u(rng)});
    for (int s = 0; s < 2; ++s) net.sinks.push_back({u(rng), u(rng)});
    std::uniform_int_distribution<int> coarse(0, 2);
    for (std::size_t i = 0; i < n; ++i) net.energy.push_back(distinct_energy ? e(rng) : 10.0 + coarse(rng));
    net.graph = DiskGraph(net.pos, 45.0);
    return net;
}

TreeSummary summary(std::size_t rows, double total, int depth, double re, double dist, NodeId id) {
    return {rows, total, depth, re, dist, id};
}

}  // namespace

TEST(BestDlmtc, RuleByRule) {
    const TreeSummary base = summary(5, 50.0, 3, 12.0, 30.0, 4);
    // Rule 1: rows.
    EXPECT_TRUE(best_dlmtc(base, summary(6, 1.0, 9, 1.0, 99.0, 9)));
    EXPECT_FALSE(best_dlmtc(base, summary(4, 99.0, 1, 99.0, 1.0, 0)));
    // Rule 2: energy at equal rows.
    EXPECT_TRUE(best_dlmtc(base, summary(5, 51.0, 9, 1.0, 99.0, 9)));
    EXPECT_FALSE(best_dlmtc(base, summary(5, 49.0, 1, 99.0, 1.0, 0)));
    // Rule 3: depth.
    EXPECT_TRUE(best_dlmtc(base, summary(5, 50.0, 2, 1.0, 99.0, 9)));
    EXPECT_FALSE(best_dlmtc(base, summary(5, 50.0, 4, 99.0, 1.0, 0)));
    // Rule 4: richer root and closer sink, both needed.
    EXPECT_TRUE(best_dlmtc(base, summary(5, 50.0, 3, 13.0, 29.0, 9)));
    EXPECT_FALSE(best_dlmtc(base, summary(5, 50.0, 3, 13.0, 31.0, 0)));
    EXPECT_FALSE(best_dlmtc(base, summary(5, 50.0, 3, 11.0, 29.0, 0)));
    // Rule 5: same root energy, lower index.
    EXPECT_TRUE(best_dlmtc(base, summary(5, 50.0, 3, 12.0, 99.0, 3)));
    EXPECT_FALSE(best_dlmtc(base, summary(5, 50.0, 3, 12.0, 1.0, 5)));
    // Rule 5 needs equal root energy.
    EXPECT_FALSE(best_dlmtc(base, summary(5, 50.0, 3, 13.0, 31.0, 3)));
    // Identity never wins.
    EXPECT_FALSE(best_dlmtc(base, base));
}

TEST(BestDlmtc, NonTransitiveWithEqualRootEnergies) {
    // c beats a on rule 4 and b beats c on rule 5, but b does not beat a.
    const TreeSummary a = summary(3, 20.0, 2, 5.0, 5.0, 0);
    const TreeSummary b = summary(3, 20.0, 2, 7.0, 6.0, 1);
    const TreeSummary c = summary(3, 20.0, 2, 7.0, 4.0, 2);
    EXPECT_FALSE(best_dlmtc(a, b));  // b richer but farther
    EXPECT_TRUE(best_dlmtc(a, c));   // c richer and closer
    EXPECT_TRUE(best_dlmtc(c, b));   // same energy, lower index
    // Folding a, b, c keeps c even though b beats c.
}

TEST(Tree, MatchesReplayOracle) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Net net = random_net(seed, 8 + seed % 25, 110.0, seed % 2 == 0);
        std::vector<NodeId> members;
        for (NodeId v = 0; v < net.pos.size(); ++v)
            if ((v + seed) % 4 != 0) members.push_back(v);
        for (NodeId root : members) {
            const CandidateTree t = build_candidate_tree(members, net.inputs(), root);
            const auto o = oracle::replay_tree(net.graph, net.energy, members, root);
            ASSERT_EQ(t.parent, o.parent) << "seed " << seed << " root " << root;
            ASSERT_EQ(t.depth, o.depth);
            ASSERT_EQ(t.order, o.order);
            EXPECT_EQ(t.summary,
                      oracle::replay_summary(net.graph, net.energy, net.pos, net.sinks, members, root));
        }
    }
}

TEST(Tree, EdgesAreRadioLinksBetweenMembers) {
    const Net net = random_net(5, 40, 100.0, true);
    std::vector<NodeId> members;
    for (NodeId v = 0; v < 40; v += 2) members.push_back(v);
    const CandidateTree t = build_candidate_tree(members, net.inputs(), members[3]);
    for (NodeId u : t.order) {
        EXPECT_TRUE(std::binary_search(members.begin(), members.end(), u));
        if (t.parent[u] != kNoNode) {
            EXPECT_TRUE(net.graph.adjacent(u, t.parent[u]));
            EXPECT_EQ(t.depth[u], t.depth[t.parent[u]] + 1);
        }
    }
}

TEST(Tree, DisconnectedMembersStayUncovered) {
    Net net;
    net.pos = {{0, 0}, {30, 0}, {300, 0}};
    net.sinks = {{0, 10}};
    net.energy = {10, 11, 12};
    net.graph = DiskGraph(net.pos, 45.0);
    const std::vector<NodeId> members{0, 1, 2};
    const CandidateTree t = build_candidate_tree(members, net.inputs(), 0);
    EXPECT_EQ(t.summary.rows, 2u);
    EXPECT_FALSE(t.contains(2));
    // The largest component wins on rows.
    EXPECT_NE(select_subsink(members, net.inputs()).root, 2u);
}

TEST(Tree, RootMustBeMember) {
    const Net net = random_net(1, 5, 50.0, true);
    const std::vector<NodeId> members{0, 1};
    EXPECT_THROW(build_candidate_tree(members, net.inputs(), 3), TreeError);
    EXPECT_THROW(select_subsink(std::vector<NodeId>{}, net.inputs()), TreeError);
}

TEST(SelectSubsink, EqualsBruteForceFold) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const Net net = random_net(100 + seed, 2 + seed % 9, 70.0, seed % 3 != 0);
        std::vector<NodeId> members;
        for (NodeId v = 0; v < net.pos.size(); ++v) members.push_back(v);
        TreeSummary best = oracle::replay_summary(net.graph, net.energy, net.pos, net.sinks, members, members[0]);
        for (std::size_t i = 1; i < members.size(); ++i) {
            const auto s = oracle::replay_summary(net.graph, net.energy, net.pos, net.sinks, members, members[i]);
            if (best_dlmtc(best, s)) best = s;
        }
        EXPECT_EQ(select_subsink(members, net.inputs()).summary, best) << "seed " << seed;
    }
}

TEST(SelectSubsink, WinnerIsUndominatedWhenRootEnergiesDiffer) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Net net = random_net(500 + seed, 4 + seed % 7, 80.0, true);
        std::vector<NodeId> members;
        for (NodeId v = 0; v < net.pos.size(); ++v) members.push_back(v);
        const TreeSummary w = select_subsink(members, net.inputs()).summary;
        for (const TreeSummary& s : candidate_summaries(members, net.inputs()))
            EXPECT_FALSE(best_dlmtc(w, s)) << "seed " << seed << " root " << s.root_index;
    }
}

TEST(SelectSubsink, RelayRootPreferredOverSourceOnTwoHopChain) {
    Net net;
    net.pos = {{0, 0}, {40, 0}};
    net.sinks = {{80, 0}};
    net.energy = {12.0, 28.0};
    net.graph = DiskGraph(net.pos, 45.0);
    const std::vector<NodeId> members{0, 1};
    const CandidateTree t = select_subsink(members, net.inputs());
    EXPECT_EQ(t.root, 1u);
    EXPECT_EQ(t.parent[0], 1u);
}

TEST(Tree, FromParentsAndDot) {
    const std::vector<NodeId> parent{kNoNode, 0, 0, 1};
    const CandidateTree t = tree_from_parents(0, parent);
    EXPECT_EQ(t.order, (std::vector<NodeId>{0, 1, 2, 3}));
    EXPECT_EQ(t.summary.depth, 2);
    EXPECT_EQ(t.children(0), (std::vector<NodeId>{1, 2}));
    std::ostringstream os;
    write_tree_dot(os, t);
    EXPECT_NE(os.str().find("n3 -> n1"), std::string::npos);
    EXPECT_THROW(tree_from_parents(0, std::vector<NodeId>{kNoNode, 2, 1}), TreeError);
}

#include <benchmark/benchmark.h>

#include <random>

#include "dlmtc/clustering.hpp"
#include "dlmtc/hymac.hpp"
#include "dlmtc/sim.hpp"
#include "dlmtc/tree.hpp"

using namespace dlmtc;

namespace {

Scenario network(std::size_t n) {
    ScenarioParams p;
    p.num_nodes = n;
    return generate_scenario(p, 7);
}

std::vector<Point> sensor_positions(const Scenario& sc) {
    std::vector<Point> pts;
    for (const Node& v : sc.nodes)
        if (v.role != Role::sink) pts.push_back(v.position);
    return pts;
}

void BM_Em(benchmark::State& state) {
    const Scenario sc = network(static_cast<std::size_t>(state.range(0)));
    const auto pts = sensor_positions(sc);
    const int k = default_cluster_count(pts.size());
    for (auto _ : state) benchmark::DoNotOptimize(run_emd(pts, k, EmConfig{}));
}
BENCHMARK(BM_Em)->Arg(50)->Arg(150)->Arg(300);

void BM_SelectSubsink(benchmark::State& state) {
    const Scenario sc = network(static_cast<std::size_t>(state.range(0)));
    const DiskGraph g = disk_graph(sc);
    std::vector<double> energy;
    std::vector<Point> pos, sinks;
    std::vector<NodeId> members;
    for (const Node& v : sc.nodes) {
        energy.push_back(v.residual_energy);
        pos.push_back(v.position);
        if (v.role == Role::sink) sinks.push_back(v.position);
        else members.push_back(v.id);
    }
    const TreeInputs in{g, energy, pos, sinks};
    for (auto _ : state) benchmark::DoNotOptimize(select_subsink(members, in));
}
BENCHMARK(BM_SelectSubsink)->Arg(25)->Arg(50)->Arg(100);

void BM_ScheduleTree(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 120.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    std::vector<NodeId> parent(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) parent[v] = static_cast<NodeId>(rng() % v);
    const DiskGraph g(pts, 45.0);
    const CandidateTree t = tree_from_parents(0, parent);
    for (auto _ : state) benchmark::DoNotOptimize(schedule_tree(t, g, 4));
}
BENCHMARK(BM_ScheduleTree)->Arg(20)->Arg(60);

void BM_Simulation(benchmark::State& state) {
    const Scenario sc = network(100);
    PipelineConfig cfg;
    cfg.mode = state.range(0) ? Mode::dlmtc : Mode::dlmt;
    cfg.horizon = 60.0;
    for (auto _ : state) benchmark::DoNotOptimize(run_simulation(sc, cfg));
}
BENCHMARK(BM_Simulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

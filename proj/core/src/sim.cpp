#include "dlmtc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "dlmtc/fdma.hpp"
#include "dlmtc/hymac.hpp"
#include "dlmtc/tree.hpp"
#include "json.hpp"

namespace dlmtc {

std::string_view to_string(Mode mode) { return mode == Mode::dlmt ? "dlmt" : "dlmtc"; }

Mode mode_from_string(std::string_view s) {
    if (s == "dlmt") return Mode::dlmt;
    if (s == "dlmtc") return Mode::dlmtc;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::slot_end: return "slot_end";
        case EventKind::node_death: return "node_death";
        case EventKind::reconstruct: return "reconstruct";
        case EventKind::setup_end: return "setup_end";
        case EventKind::report_ready: return "report_ready";
        case EventKind::slot_begin: return "slot_begin";
        case EventKind::energy_log_tick: return "energy_log_tick";
    }
    return "?";
}

double EnergyLedger::total_dissipated(NodeId v) const {
    const auto& d = dissipated.at(v);
    return d[0] + d[1] + d[2];
}

namespace {

constexpr std::size_t kIdle = static_cast<std::size_t>(EnergyBucket::idle);
constexpr std::size_t kRx = static_cast<std::size_t>(EnergyBucket::rx);
constexpr std::size_t kTx = static_cast<std::size_t>(EnergyBucket::tx);

struct Event {
    double time;
    EventKind kind;
    std::uint32_t subject;
    std::uint64_t seq;
    std::uint64_t version = 0;
    int slot = 0;
};

// Earliest time first; the EventKind order is the tie priority.
struct Later {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        if (a.subject != b.subject) return a.subject > b.subject;
        return a.seq > b.seq;
    }
};

struct Report {
    NodeId source;
    double generated_at;
    int hops = 0;
    std::vector<int> slots;
};

struct NodeRt {
    double residual = 0.0;
    double last = 0.0;
    std::array<double, 3> dissipated{};
    int ntx = 0;
    int nrx = 0;
    bool alive = true;
    bool sink = false;
    bool source = false;
    std::uint64_t version = 0;
    std::uint64_t next_report = 0;
    int group = -1;
    std::deque<std::uint64_t> queue;
};

enum class Dest { parent, path, sink };

struct Sender {
    NodeId node;
    bool on_path;
    std::size_t path_index;
    NodeId to;
    Dest dest;
    std::size_t dest_index;
};

struct InFlight {
    Sender sender;
    std::vector<std::uint64_t> payload;
    bool rx;
};

struct Group {
    enum class State { idle, scheduled, running };

    int cluster = 0;
    std::vector<NodeId> members;
    std::vector<NodeId> sources;
    CandidateTree tree;
    Schedule schedule;
    std::vector<NodeId> path;  // relays after the root, nearest to the root first
    NodeId sink = kNoNode;
    bool schedulable = false;
    double epoch = 0.0;
    std::uint64_t length = 0;  // slots per cycle
    std::uint64_t cycle = 0;
    std::uint64_t version = 0;
    State state = State::idle;
    bool rebuild = false;
    std::vector<std::vector<Sender>> slots;
    std::vector<char> on_path;
    std::vector<std::vector<std::uint64_t>> own;
    std::vector<std::vector<std::uint64_t>> buf;
    std::vector<std::vector<std::uint64_t>> path_buf;
    std::vector<InFlight> in_flight;
    std::deque<double> sends;
};

class Engine {
public:
    Engine(const Scenario& sc, const PipelineConfig& cfg);
    SimResult run();

private:
    void push(double t, EventKind kind, std::uint32_t subject, std::uint64_t version = 0, int slot = 0);

    void settle(NodeId v);
    double power(const NodeRt& n) const;
    void predict_death(NodeId v);
    void activity(NodeId v, bool tx, int delta);

    void rebuild(Group& g, double epoch, bool initial);
    bool route_to_sink(Group& g);
    bool pending(const Group& g) const;
    void schedule_cycle(Group& g);
    double slot_time(const Group& g, std::uint64_t k) const;
    std::vector<ClusterRateStats> rate_stats();
    void withdraw(int cluster);

    void on_slot_begin(Group& g, int k);
    void on_slot_end(Group& g, int k);
    void on_cycle_end(Group& g);
    void on_death(NodeId v);
    void on_reconstruct(Group& g);
    void on_setup_end();
    void on_report(NodeId s);
    void on_tick();

    std::size_t drain(std::vector<std::uint64_t>& b) {
        const std::size_t n = b.size();
        b.clear();
        return n;
    }

    const Scenario& sc_;
    const PipelineConfig& cfg_;
    DiskGraph graph_;
    std::vector<Point> positions_;
    std::vector<Point> sink_positions_;
    std::vector<NodeId> sink_ids_;
    double tau_;
    double p_idle_, p_rx_, p_tx_;
    std::vector<NodeRt> nodes_;
    std::vector<Group> groups_;
    std::vector<Report> reports_;
    FrequencyPlan plan_;
    std::priority_queue<Event, std::vector<Event>, Later> events_;
    std::uint64_t seq_ = 0;
    std::uint64_t tick_ = 0;
    std::size_t sensors_alive_ = 0;
    double now_ = 0.0;
    EnergyLedger ledger_;
    RunTrace trace_;
};

Engine::Engine(const Scenario& sc, const PipelineConfig& cfg)
    : sc_(sc), cfg_(cfg), tau_(sc.packet_airtime()) {
    validate_scenario(sc);
    if (sc.num_nodes == 0) throw std::invalid_argument("scenario has no sensor nodes");
    if (cfg.channels < 1) throw std::invalid_argument("channels must be at least 1");
    if (!(cfg.band_hz > 0.0)) throw std::invalid_argument("band width must be positive");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(cfg.setup >= 0.0)) throw std::invalid_argument("setup time must be non-negative");
    if (cfg.queue_capacity < 1) throw std::invalid_argument("queue capacity must be at least 1");
    if (!(cfg.rate_window > 0.0)) throw std::invalid_argument("rate window must be positive");
    if (cfg.k && *cfg.k < 1) throw std::invalid_argument("cluster count must be at least 1");

    graph_ = disk_graph(sc);
    positions_ = sc.positions();
    sink_positions_ = sc.sink_positions();
    sink_ids_ = sc.sink_ids();
    p_idle_ = sc.idle_power_mw * 1e-3;
    p_rx_ = sc.rx_power_mw * 1e-3;
    p_tx_ = sc.tx_power_mw * 1e-3;

    const std::size_t n = sc.size();
    nodes_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        nodes_[v].residual = sc.nodes[v].residual_energy;
        nodes_[v].sink = sc.is_sink(v);
        nodes_[v].source = sc.is_source(v);
        if (!nodes_[v].sink) ++sensors_alive_;
    }
    ledger_.initial.resize(n);
    for (NodeId v = 0; v < n; ++v) ledger_.initial[v] = nodes_[v].residual;

    const auto sensors = sc.sensor_ids();
    const int k = std::min<int>(cfg.k.value_or(default_cluster_count(sensors.size())),
                                static_cast<int>(sensors.size()));
    std::vector<std::vector<NodeId>> clusters;
    if (cfg.mode == Mode::dlmt) {
        clusters.push_back(sensors);
    } else {
        std::vector<Point> pts;
        for (NodeId v : sensors) pts.push_back(positions_[v]);
        const EmResult em = run_emd(pts, k, cfg.em);
        clusters.resize(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < sensors.size(); ++i)
            clusters[static_cast<std::size_t>(em.assignment.membership[i])].push_back(sensors[i]);
    }
    plan_ = initial_allocate({cfg.band_lo_hz, cfg.band_lo_hz + cfg.band_hz}, k);

    groups_.resize(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        Group& g = groups_[c];
        g.cluster = static_cast<int>(c);
        g.members = std::move(clusters[c]);
        for (NodeId v : g.members) {
            nodes_[v].group = g.cluster;
            if (nodes_[v].source) g.sources.push_back(v);
        }
        g.on_path.assign(n, 0);
        g.own.resize(n);
        g.buf.resize(n);
    }
    trace_.horizon = cfg.horizon;
    trace_.band_hz = cfg.band_hz;
    trace_.clusters = static_cast<int>(groups_.size());
}

void Engine::push(double t, EventKind kind, std::uint32_t subject, std::uint64_t version, int slot) {
    events_.push(Event{t, kind, subject, seq_++, version, slot});
}

double Engine::power(const NodeRt& n) const {
    if (n.ntx == 0 && n.nrx == 0) return p_idle_;
    return n.ntx * p_tx_ + n.nrx * p_rx_;
}

void Engine::settle(NodeId v) {
    NodeRt& n = nodes_[v];
    const double dt = now_ - n.last;
    n.last = now_;
    if (n.sink || !n.alive || !(dt > 0.0)) return;
    if (n.ntx == 0 && n.nrx == 0) {
        const double e = p_idle_ * dt;
        n.dissipated[kIdle] += e;
        n.residual -= e;
    } else {
        const double et = n.ntx * p_tx_ * dt;
        const double er = n.nrx * p_rx_ * dt;
        n.dissipated[kTx] += et;
        n.dissipated[kRx] += er;
        n.residual -= et + er;
    }
}

void Engine::predict_death(NodeId v) {
    NodeRt& n = nodes_[v];
    ++n.version;
    if (n.sink || !n.alive) return;
    const double t = now_ + std::max(n.residual, 0.0) / power(n);
    push(t, EventKind::node_death, v, n.version);
}

void Engine::activity(NodeId v, bool tx, int delta) {
    NodeRt& n = nodes_[v];
    if (n.sink || !n.alive) return;
    settle(v);
    (tx ? n.ntx : n.nrx) += delta;
    predict_death(v);
}

double Engine::slot_time(const Group& g, std::uint64_t k) const {
    return g.epoch + static_cast<double>(g.cycle * g.length + k) * tau_;
}

bool Engine::route_to_sink(Group& g) {
    const std::size_t n = nodes_.size();
    const NodeId root = g.tree.root;
    std::vector<int> dist(n, -1);
    std::vector<NodeId> pred(n, kNoNode);
    std::vector<NodeId> q{root};
    dist[root] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
        const NodeId u = q[h];
        for (NodeId w : graph_.neighbors(u)) {
            if (dist[w] >= 0 || nodes_[w].sink || !nodes_[w].alive) continue;
            dist[w] = dist[u] + 1;
            pred[w] = u;
            q.push_back(w);
        }
    }

    std::vector<NodeId> sinks = sink_ids_;
    std::stable_sort(sinks.begin(), sinks.end(), [&](NodeId a, NodeId b) {
        return distance(positions_[root], positions_[a]) < distance(positions_[root], positions_[b]);
    });
    for (NodeId s : sinks) {
        NodeId last = kNoNode;
        for (NodeId w : graph_.neighbors(s)) {
            if (dist[w] < 0) continue;
            if (last == kNoNode || dist[w] < dist[last]) last = w;
        }
        if (last == kNoNode) continue;
        g.path.clear();
        for (NodeId u = last; u != root; u = pred[u]) g.path.push_back(u);
        std::reverse(g.path.begin(), g.path.end());
        g.sink = s;
        return true;
    }
    return false;
}

void Engine::rebuild(Group& g, double epoch, bool initial) {
    g.rebuild = false;
    ++g.version;
    g.state = Group::State::idle;
    g.in_flight.clear();
    for (NodeId v : g.members) {
        trace_.lost += drain(g.own[v]) + drain(g.buf[v]);
    }
    for (auto& b : g.path_buf) trace_.lost += drain(b);
    for (NodeId v : g.path) g.on_path[v] = 0;
    g.path.clear();
    g.slots.clear();
    g.schedulable = false;
    g.tree = CandidateTree{};
    g.schedule = Schedule{};
    if (!initial) ++trace_.reconstructions;

    std::vector<NodeId> alive;
    for (NodeId v : g.members)
        if (nodes_[v].alive) alive.push_back(v);
    if (alive.empty()) {
        withdraw(g.cluster);
        return;
    }

    std::vector<double> energy(nodes_.size());
    for (NodeId v = 0; v < nodes_.size(); ++v) {
        settle(v);
        energy[v] = nodes_[v].residual;
    }
    const TreeInputs in{graph_, energy, positions_, sink_positions_};
    g.tree = select_subsink(alive, in, g.cluster);
    g.schedule = invert_slots(schedule_tree(g.tree, graph_, cfg_.channels));
    if (!route_to_sink(g)) {
        ++trace_.unschedulable;
        withdraw(g.cluster);
        return;
    }

    g.schedulable = true;
    g.epoch = epoch;
    g.cycle = 0;
    const auto t_max = static_cast<std::size_t>(g.schedule.t_max);
    g.length = t_max + g.path.size();
    g.slots.assign(g.length, {});
    for (NodeId u : g.schedule.nodes) {
        Sender s{u, false, 0, g.tree.parent[u], Dest::parent, 0};
        if (u == g.tree.root) {
            if (g.path.empty())
                s.to = g.sink, s.dest = Dest::sink;
            else
                s.to = g.path[0], s.dest = Dest::path;
        }
        g.slots[static_cast<std::size_t>(g.schedule.slot[u] - 1)].push_back(s);
    }
    for (std::size_t i = 0; i < g.path.size(); ++i) {
        g.on_path[g.path[i]] = 1;
        const bool last = i + 1 == g.path.size();
        g.slots[t_max + i].push_back(
            Sender{g.path[i], true, i, last ? g.sink : g.path[i + 1], last ? Dest::sink : Dest::path, i + 1});
    }
    g.path_buf.assign(g.path.size(), {});
}

bool Engine::pending(const Group& g) const {
    for (NodeId s : g.sources)
        if (nodes_[s].alive && g.tree.contains(s) && !nodes_[s].queue.empty()) return true;
    return false;
}

void Engine::schedule_cycle(Group& g) {
    if (!g.schedulable || g.state != Group::State::idle || !pending(g)) return;
    const double t0 = std::max(now_, g.epoch);
    const double span = static_cast<double>(g.length) * tau_;
    std::uint64_t m = t0 > g.epoch ? static_cast<std::uint64_t>(std::ceil((t0 - g.epoch) / span)) : 0;
    auto start = [&](std::uint64_t c) { return g.epoch + static_cast<double>(c * g.length) * tau_; };
    while (m > 0 && start(m - 1) >= t0) --m;
    while (start(m) < t0) ++m;
    g.cycle = m;
    g.state = Group::State::scheduled;
    push(start(m), EventKind::slot_begin, static_cast<std::uint32_t>(g.cluster), g.version, 1);
}

std::vector<ClusterRateStats> Engine::rate_stats() {
    std::vector<ClusterRateStats> out;
    for (Group& g : groups_) {
        while (!g.sends.empty() && g.sends.front() <= now_ - cfg_.rate_window) g.sends.pop_front();
        out.push_back({g.cluster, g.sends.size(), cfg_.rate_window});
    }
    return out;
}

void Engine::withdraw(int cluster) {
    if (cfg_.mode == Mode::dlmtc) plan_ = withdraw_on_completion(std::move(plan_), cluster);
}

void Engine::on_slot_begin(Group& g, int k) {
    if (k == 1) {
        g.state = Group::State::running;
        for (NodeId s : g.sources) {
            NodeRt& n = nodes_[s];
            if (!n.alive || !g.tree.contains(s)) continue;
            g.own[s].insert(g.own[s].end(), n.queue.begin(), n.queue.end());
            n.queue.clear();
        }
        if (cfg_.mode == Mode::dlmtc && !plan_.holds(g.cluster)) {
            const auto stats = rate_stats();
            plan_ = request_allocation(std::move(plan_), g.cluster, stats);
        }
    }
    const int range_owner = cfg_.mode == Mode::dlmt ? 0 : g.cluster;
    const double width = plan_.allocated_width(range_owner) / cfg_.channels;

    for (const Sender& s : g.slots[static_cast<std::size_t>(k - 1)]) {
        if (!nodes_[s.node].alive) continue;
        std::vector<std::uint64_t> payload;
        if (s.on_path) {
            payload.swap(g.path_buf[s.path_index]);
        } else {
            payload.swap(g.own[s.node]);
            auto& b = g.buf[s.node];
            payload.insert(payload.end(), b.begin(), b.end());
            b.clear();
        }
        if (payload.empty()) continue;

        activity(s.node, true, +1);
        const bool rx = s.dest != Dest::sink && nodes_[s.to].alive;
        if (rx) activity(s.to, false, +1);
        if (cfg_.record_events) {
            for (std::uint64_t id : payload) reports_[id].slots.push_back(k);
            trace_.transmission_log.push_back({now_, s.node, s.to, g.cluster, k, payload.size()});
        }
        ++trace_.transmissions;
        trace_.occupied_hz_s += width * tau_;
        g.sends.push_back(now_);
        g.in_flight.push_back({s, std::move(payload), rx});
    }
    push(slot_time(g, static_cast<std::uint64_t>(k)), EventKind::slot_end, static_cast<std::uint32_t>(g.cluster),
         g.version, k);
}

void Engine::on_slot_end(Group& g, int k) {
    for (InFlight& f : g.in_flight) {
        const Sender& s = f.sender;
        const bool tx_alive = nodes_[s.node].alive;
        if (tx_alive) activity(s.node, true, -1);
        if (f.rx) activity(s.to, false, -1);
        const bool delivered = tx_alive && (s.dest == Dest::sink || nodes_[s.to].alive);
        if (!delivered) {
            trace_.lost += f.payload.size();
            continue;
        }
        for (std::uint64_t id : f.payload) ++reports_[id].hops;
        switch (s.dest) {
            case Dest::sink:
                for (std::uint64_t id : f.payload) {
                    Report& r = reports_[id];
                    trace_.deliveries.push_back({id, r.source, r.generated_at, now_, r.hops, r.slots});
                }
                break;
            case Dest::parent: {
                auto& b = g.buf[s.to];
                b.insert(b.end(), f.payload.begin(), f.payload.end());
                break;
            }
            case Dest::path: {
                auto& b = g.path_buf[s.dest_index];
                b.insert(b.end(), f.payload.begin(), f.payload.end());
                break;
            }
        }
    }
    g.in_flight.clear();
    if (static_cast<std::uint64_t>(k) < g.length)
        push(now_, EventKind::slot_begin, static_cast<std::uint32_t>(g.cluster), g.version, k + 1);
    else
        on_cycle_end(g);
}

void Engine::on_cycle_end(Group& g) {
    for (NodeId v : g.members) trace_.lost += drain(g.own[v]) + drain(g.buf[v]);
    for (auto& b : g.path_buf) trace_.lost += drain(b);
    g.state = Group::State::idle;
    withdraw(g.cluster);
    if (g.rebuild) rebuild(g, now_, false);
    schedule_cycle(g);
}

void Engine::on_death(NodeId v) {
    settle(v);
    NodeRt& n = nodes_[v];
    const std::size_t bucket = n.ntx > 0 ? kTx : n.nrx > 0 ? kRx : kIdle;
    n.dissipated[bucket] += n.residual;
    n.residual = 0.0;
    n.alive = false;
    n.ntx = n.nrx = 0;
    --sensors_alive_;
    trace_.deaths.push_back({v, now_, n.source});
    trace_.lost += n.queue.size();
    n.queue.clear();

    for (Group& g : groups_) {
        trace_.lost += drain(g.own[v]) + drain(g.buf[v]);
        const bool affected = g.tree.contains(v) || g.on_path[v];
        if (g.on_path[v])
            for (std::size_t i = 0; i < g.path.size(); ++i)
                if (g.path[i] == v) trace_.lost += drain(g.path_buf[i]);
        if (!affected) continue;
        g.rebuild = true;
        if (g.state != Group::State::running)
            push(now_, EventKind::reconstruct, static_cast<std::uint32_t>(g.cluster));
    }
}

void Engine::on_reconstruct(Group& g) {
    if (!g.rebuild || g.state == Group::State::running) return;
    rebuild(g, now_, false);
    schedule_cycle(g);
}

void Engine::on_setup_end() {
    for (Group& g : groups_)
        if (g.state == Group::State::idle) withdraw(g.cluster);
}

void Engine::on_report(NodeId s) {
    NodeRt& n = nodes_[s];
    if (!n.alive) return;
    const std::uint64_t id = reports_.size();
    reports_.push_back({s, now_, 0, {}});
    ++trace_.generated;
    n.queue.push_back(id);
    if (n.queue.size() > cfg_.queue_capacity) {
        n.queue.pop_front();
        ++trace_.dropped;
    }
    ++n.next_report;
    const double next = sc_.nodes[s].start_offset + static_cast<double>(n.next_report) / sc_.report_rate;
    if (next <= cfg_.horizon) push(next, EventKind::report_ready, s);
    schedule_cycle(groups_[static_cast<std::size_t>(n.group)]);
}

void Engine::on_tick() {
    for (NodeId v = 0; v < nodes_.size(); ++v) {
        settle(v);
        const NodeRt& n = nodes_[v];
        const double err =
            std::abs(ledger_.initial[v] - n.residual - (n.dissipated[0] + n.dissipated[1] + n.dissipated[2]));
        ledger_.max_conservation_error = std::max(ledger_.max_conservation_error, err);
        if (cfg_.record_energy_log && !n.sink) ledger_.log.push_back({now_, v, n.residual});
    }
    ++ledger_.ticks;
    ++tick_;
    const double next = static_cast<double>(tick_) * sc_.energy_log_interval;
    if (next <= cfg_.horizon) push(next, EventKind::energy_log_tick, 0);
}

SimResult Engine::run() {
    for (Group& g : groups_) rebuild(g, cfg_.setup, true);
    for (NodeId v = 0; v < nodes_.size(); ++v) predict_death(v);
    for (NodeId v = 0; v < nodes_.size(); ++v)
        if (nodes_[v].source && sc_.nodes[v].start_offset <= cfg_.horizon)
            push(sc_.nodes[v].start_offset, EventKind::report_ready, v);
    push(cfg_.setup, EventKind::setup_end, 0);
    push(0.0, EventKind::energy_log_tick, 0);

    double end = cfg_.horizon;
    while (!events_.empty()) {
        const Event ev = events_.top();
        if (ev.time > cfg_.horizon) break;
        events_.pop();
        now_ = ev.time;

        bool live = true;
        switch (ev.kind) {
            case EventKind::slot_begin:
            case EventKind::slot_end: {
                Group& g = groups_[ev.subject];
                live = ev.version == g.version;
                if (!live) break;
                if (ev.kind == EventKind::slot_begin)
                    on_slot_begin(g, ev.slot);
                else
                    on_slot_end(g, ev.slot);
                break;
            }
            case EventKind::node_death:
                live = nodes_[ev.subject].alive && ev.version == nodes_[ev.subject].version;
                if (live) on_death(ev.subject);
                break;
            case EventKind::reconstruct: on_reconstruct(groups_[ev.subject]); break;
            case EventKind::setup_end: on_setup_end(); break;
            case EventKind::report_ready: on_report(ev.subject); break;
            case EventKind::energy_log_tick: on_tick(); break;
        }
        if (live && cfg_.record_events) trace_.events.push_back({ev.time, ev.kind, ev.subject});
        if (sensors_alive_ == 0) {
            end = now_;
            break;
        }
    }

    now_ = end;
    for (NodeId v = 0; v < nodes_.size(); ++v) settle(v);
    const std::size_t n = nodes_.size();
    ledger_.residual.resize(n);
    ledger_.dissipated.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        ledger_.residual[v] = nodes_[v].residual;
        ledger_.dissipated[v] = nodes_[v].dissipated;
        const double err = std::abs(ledger_.initial[v] - ledger_.residual[v] - ledger_.total_dissipated(v));
        ledger_.max_conservation_error = std::max(ledger_.max_conservation_error, err);
    }
    trace_.end_time = end;

    SimResult out;
    out.metrics = compute_metrics(ledger_, trace_, sc_);
    out.ledger = std::move(ledger_);
    out.trace = std::move(trace_);
    return out;
}

std::optional<double> mean_of(double sum, std::size_t count) {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

}  // namespace

MetricsReport compute_metrics(const EnergyLedger& ledger, const RunTrace& trace, const Scenario& scenario) {
    MetricsReport m;
    const auto sensors = scenario.sensor_ids();
    double dissipated = 0.0;
    for (NodeId v : sensors) dissipated += ledger.total_dissipated(v);
    m.ade = sensors.empty() ? 0.0 : dissipated / static_cast<double>(sensors.size());

    std::vector<double> source_deaths;
    for (const Death& d : trace.deaths)
        if (d.source) source_deaths.push_back(d.time);
    std::sort(source_deaths.begin(), source_deaths.end());
    const std::size_t num_sources = scenario.source_ids().size();
    m.anlt_censored = source_deaths.empty();
    m.anlt = m.anlt_censored ? trace.horizon : source_deaths.front();
    if (num_sources > 0 && source_deaths.size() == num_sources) m.last_source_death = source_deaths.back();
    const std::size_t half = (num_sources + 1) / 2;
    if (half > 0 && source_deaths.size() >= half) m.half_sources_dead = source_deaths[half - 1];

    double sum = 0.0, sum_a = 0.0, sum_b = 0.0;
    std::size_t n_a = 0, n_b = 0;
    std::array<double, kDelayBins> bin_sum{};
    std::array<std::size_t, kDelayBins> bin_n{};
    for (const Delivery& d : trace.deliveries) {
        const double delay = d.delivered_at - d.generated_at;
        sum += delay;
        if (d.generated_at < trace.end_time / 2.0) {
            sum_a += delay;
            ++n_a;
        } else {
            sum_b += delay;
            ++n_b;
        }
        if (trace.end_time > 0.0) {
            auto b = static_cast<int>(std::floor(d.generated_at / trace.end_time * kDelayBins));
            b = std::clamp(b, 0, kDelayBins - 1);
            bin_sum[static_cast<std::size_t>(b)] += delay;
            ++bin_n[static_cast<std::size_t>(b)];
        }
    }
    m.avg_delay = mean_of(sum, trace.deliveries.size());
    m.delay_first_half = mean_of(sum_a, n_a);
    m.delay_second_half = mean_of(sum_b, n_b);
    for (std::size_t b = 0; b < kDelayBins; ++b) m.delay_bins[b] = mean_of(bin_sum[b], bin_n[b]);

    if (trace.band_hz > 0.0 && trace.end_time > 0.0)
        m.bandwidth_utilization = trace.occupied_hz_s / (trace.band_hz * trace.end_time);
    m.delivered = trace.deliveries.size();
    m.generated = trace.generated;
    m.dropped = trace.dropped;
    m.lost = trace.lost;
    m.end_time = trace.end_time;
    return m;
}

SimResult run_simulation(const Scenario& scenario, const PipelineConfig& config) {
    Engine engine(scenario, config);
    return engine.run();
}

std::string metrics_to_json(const MetricsReport& r, int indent) {
    using nlohmann::ordered_json;
    auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    ordered_json bins = ordered_json::array();
    for (const auto& b : r.delay_bins) bins.push_back(opt(b));
    ordered_json j{
        {"ade", r.ade},
        {"anlt", r.anlt},
        {"anlt_censored", r.anlt_censored},
        {"last_source_death", opt(r.last_source_death)},
        {"half_sources_dead", opt(r.half_sources_dead)},
        {"avg_delay", opt(r.avg_delay)},
        {"delay_first_half", opt(r.delay_first_half)},
        {"delay_second_half", opt(r.delay_second_half)},
        {"delay_bins", bins},
        {"bandwidth_utilization", r.bandwidth_utilization},
        {"delivered_packets", r.delivered},
        {"generated_packets", r.generated},
        {"dropped_packets", r.dropped},
        {"lost_packets", r.lost},
        {"end_time", r.end_time},
    };
    return j.dump(indent);
}

void write_energy_csv(std::ostream& out, const EnergyLedger& ledger) {
    const auto old = out.precision(17);
    out << "time,node,residual\n";
    for (const auto& s : ledger.log) out << s.time << ',' << s.node << ',' << s.residual << '\n';
    out.precision(old);
}

void write_delivery_csv(std::ostream& out, const RunTrace& trace) {
    const auto old = out.precision(17);
    out << "packet_id,source,generated_at,delivered_at,hops\n";
    for (const auto& d : trace.deliveries)
        out << d.packet_id << ',' << d.source << ',' << d.generated_at << ',' << d.delivered_at << ',' << d.hops
            << '\n';
    out.precision(old);
}

}  // namespace dlmtc

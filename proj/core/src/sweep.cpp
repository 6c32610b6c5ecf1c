#include "dlmtc/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dlmtc {

namespace {

std::size_t parse_count(std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("bad node count '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string fmt_stat(const Stat& s) { return s.count ? fmt(s.mean) + "," + fmt(s.stddev) : std::string(","); }

std::ofstream open_csv(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

}  // namespace

void validate_sweep_spec(const SweepSpec& spec) {
    if (spec.node_counts.empty()) throw std::invalid_argument("sweep needs at least one node count");
    for (std::size_t i = 0; i < spec.node_counts.size(); ++i) {
        if (spec.node_counts[i] == 0) throw std::invalid_argument("node counts must be positive");
        if (i > 0 && spec.node_counts[i] <= spec.node_counts[i - 1])
            throw std::invalid_argument("node counts must be strictly ascending");
    }
    if (spec.modes.empty()) throw std::invalid_argument("sweep needs at least one mode");
    if (spec.seeds < 1) throw std::invalid_argument("sweep needs at least one seed");
}

std::vector<std::size_t> parse_node_counts(std::string_view text) {
    std::vector<std::size_t> out;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const auto colon = text.find(':', dots);
        const std::size_t lo = parse_count(text.substr(0, dots));
        const std::size_t hi = parse_count(text.substr(dots + 2, colon == std::string_view::npos ? colon : colon - dots - 2));
        const std::size_t step = colon == std::string_view::npos ? 1 : parse_count(text.substr(colon + 1));
        if (step == 0 || hi < lo) throw std::invalid_argument("bad node range '" + std::string(text) + "'");
        for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
        return out;
    }
    for (auto part : split(text, ',')) out.push_back(parse_count(part));
    return out;
}

std::vector<Mode> parse_modes(std::string_view text) {
    std::vector<Mode> out;
    for (auto part : split(text, ',')) out.push_back(mode_from_string(part));
    return out;
}

std::uint64_t cell_seed(const SweepSpec& spec, std::size_t num_nodes, int seed_index) {
    return spec.base_seed + 1000003ULL * num_nodes + static_cast<std::uint64_t>(seed_index);
}

Stat summarize(const std::vector<double>& values) {
    Stat s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::vector<AggregateRow> aggregate(const SweepSpec& spec, const std::vector<SweepCell>& cells) {
    std::vector<AggregateRow> rows;
    for (std::size_t n : spec.node_counts) {
        for (Mode mode : spec.modes) {
            AggregateRow row;
            row.num_nodes = n;
            row.mode = mode;
            std::vector<double> ade, anlt, bw, delay, first, second;
            std::array<std::vector<double>, kDelayBins> bins;
            for (const SweepCell& c : cells) {
                if (c.num_nodes != n || c.mode != mode) continue;
                ++row.runs;
                if (!c.metrics) {
                    ++row.failures;
                    continue;
                }
                const MetricsReport& m = *c.metrics;
                ade.push_back(m.ade);
                anlt.push_back(m.anlt);
                bw.push_back(m.bandwidth_utilization);
                if (m.avg_delay) delay.push_back(*m.avg_delay);
                if (m.delay_first_half) first.push_back(*m.delay_first_half);
                if (m.delay_second_half) second.push_back(*m.delay_second_half);
                for (std::size_t b = 0; b < kDelayBins; ++b)
                    if (m.delay_bins[b]) bins[b].push_back(*m.delay_bins[b]);
            }
            row.ade = summarize(ade);
            row.anlt = summarize(anlt);
            row.bandwidth = summarize(bw);
            row.avg_delay = summarize(delay);
            row.delay_first_half = summarize(first);
            row.delay_second_half = summarize(second);
            for (std::size_t b = 0; b < kDelayBins; ++b) row.delay_bins[b] = summarize(bins[b]);
            rows.push_back(row);
        }
    }
    return rows;
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate_sweep_spec(spec);
    SweepResult result;
    for (std::size_t n : spec.node_counts)
        for (Mode mode : spec.modes)
            for (int s = 0; s < spec.seeds; ++s)
                result.cells.push_back({n, mode, s, cell_seed(spec, n, s), std::nullopt, {}, 0.0});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) {
            SweepCell& cell = result.cells[i];
            try {
                ScenarioParams params = spec.scenario;
                params.num_nodes = cell.num_nodes;
                const Scenario sc = generate_scenario(params, cell.seed);
                PipelineConfig cfg = spec.pipeline;
                cfg.mode = cell.mode;
                cfg.record_energy_log = false;
                cfg.record_events = false;
                const SimResult r = run_simulation(sc, cfg);
                cell.metrics = r.metrics;
                cell.max_conservation_error = r.ledger.max_conservation_error;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.cells.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    result.rows = aggregate(spec, result.cells);
    return result;
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    auto scalar = [&](const char* file, const char* name, Stat AggregateRow::*field) {
        auto out = open_csv(dir / file);
        out << "num_nodes,mode,runs,failures," << name << "_mean," << name << "_std\n";
        for (const auto& r : result.rows)
            out << r.num_nodes << ',' << to_string(r.mode) << ',' << r.runs << ',' << r.failures << ','
                << fmt_stat(r.*field) << '\n';
    };
    scalar("ade_vs_n.csv", "ade_j", &AggregateRow::ade);
    scalar("anlt_vs_n.csv", "anlt_s", &AggregateRow::anlt);
    scalar("bandwidth_vs_n.csv", "bandwidth_utilization", &AggregateRow::bandwidth);

    {
        auto out = open_csv(dir / "delay_vs_time.csv");
        out << "num_nodes,mode,avg_delay_mean,avg_delay_std,first_half_mean,first_half_std,second_half_mean,"
               "second_half_std";
        for (int b = 0; b < kDelayBins; ++b) out << ",bin" << b << "_mean";
        out << '\n';
        for (const auto& r : result.rows) {
            out << r.num_nodes << ',' << to_string(r.mode) << ',' << fmt_stat(r.avg_delay) << ','
                << fmt_stat(r.delay_first_half) << ',' << fmt_stat(r.delay_second_half);
            for (const auto& b : r.delay_bins) out << ',' << (b.count ? fmt(b.mean) : std::string());
            out << '\n';
        }
    }
    {
        auto out = open_csv(dir / "runs.csv");
        out << "num_nodes,mode,seed_index,seed,ade_j,anlt_s,anlt_censored,avg_delay_s,first_half_delay_s,"
               "second_half_delay_s,bandwidth_utilization,delivered,generated,dropped,lost,error\n";
        for (const auto& c : result.cells) {
            out << c.num_nodes << ',' << to_string(c.mode) << ',' << c.seed_index << ',' << c.seed << ',';
            if (c.metrics) {
                const auto& m = *c.metrics;
                out << fmt(m.ade) << ',' << fmt(m.anlt) << ',' << (m.anlt_censored ? 1 : 0) << ','
                    << fmt_opt(m.avg_delay) << ',' << fmt_opt(m.delay_first_half) << ','
                    << fmt_opt(m.delay_second_half) << ',' << fmt(m.bandwidth_utilization) << ',' << m.delivered
                    << ',' << m.generated << ',' << m.dropped << ',' << m.lost << ",\n";
            } else {
                std::string err = c.error;
                for (char& ch : err)
                    if (ch == ',' || ch == '\n') ch = ' ';
                out << ",,,,,,,,,,," << err << '\n';
            }
        }
    }
}

std::vector<CheckResult> check_sweep(const SweepResult& result, const CheckLimits& limits) {
    std::vector<CheckResult> out;

    std::size_t failed = 0;
    double worst = 0.0;
    for (const auto& c : result.cells) {
        if (!c.metrics) ++failed;
        worst = std::max(worst, c.max_conservation_error);
    }
    out.push_back({"all runs completed", failed == 0, std::to_string(failed) + " failed cells"});
    out.push_back({"energy conservation", worst <= limits.conservation, "worst error " + fmt(worst) + " J"});

    auto find = [&](std::size_t n, Mode m) -> const AggregateRow* {
        for (const auto& r : result.rows)
            if (r.num_nodes == n && r.mode == m) return &r;
        return nullptr;
    };
    // A mode only "wins" by more than `margin`, so rounding noise cannot decide a trend.
    auto trend = [&](const std::string& name, Stat AggregateRow::*field, bool dlmtc_higher, double margin) {
        bool ok = true;
        std::string detail;
        bool any = false;
        for (const auto& r : result.rows) {
            if (r.mode != Mode::dlmtc) continue;
            const AggregateRow* base = find(r.num_nodes, Mode::dlmt);
            if (!base) continue;
            any = true;
            const double a = (r.*field).mean, b = (base->*field).mean;
            const bool pass = dlmtc_higher ? a - b > margin : b - a > margin;
            ok = ok && pass;
            detail += "N=" + std::to_string(r.num_nodes) + " dlmtc=" + fmt(a) + " dlmt=" + fmt(b) +
                      (pass ? "" : " FAIL") + "; ";
        }
        out.push_back({name, ok && any, any ? detail : "no dlmt/dlmtc pairs"});
    };
    trend("ade dlmtc < dlmt", &AggregateRow::ade, false, limits.ade_margin);
    trend("anlt dlmtc > dlmt", &AggregateRow::anlt, true, limits.anlt_margin);
    trend("bandwidth dlmtc > dlmt", &AggregateRow::bandwidth, true, limits.bandwidth_margin);

    std::size_t checked = 0, bad = 0;
    std::string worst_run;
    for (const auto& c : result.cells) {
        if (c.mode != Mode::dlmtc || !c.metrics) continue;
        const auto& m = *c.metrics;
        if (!m.delay_first_half || !m.delay_second_half) continue;
        ++checked;
        if (*m.delay_second_half > *m.delay_first_half) {
            ++bad;
            if (worst_run.empty())
                worst_run = " first: N=" + std::to_string(c.num_nodes) + " seed " + std::to_string(c.seed_index) +
                            " " + fmt(*m.delay_first_half) + " -> " + fmt(*m.delay_second_half);
        }
    }
    out.push_back({"dlmtc delay second half <= first half", checked > 0 && bad == 0,
                   std::to_string(bad) + "/" + std::to_string(checked) + " runs violate" + worst_run});
    return out;
}

}  // namespace dlmtc

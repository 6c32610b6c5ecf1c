#include "dlmtc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace dlmtc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Eigen2 {
    double hi, lo;
    Point v_hi;  // unit eigenvector for hi
};

Eigen2 eigen(const Cov2& c) {
    const double half_tr = 0.5 * (c.xx + c.yy);
    const double half_diff = 0.5 * (c.xx - c.yy);
    const double r = std::hypot(half_diff, c.xy);
    Eigen2 e{half_tr + r, half_tr - r, {1.0, 0.0}};
    if (c.xy != 0.0) {
        const double vx = e.hi - c.yy;
        const double vy = c.xy;
        const double norm = std::hypot(vx, vy);
        e.v_hi = {vx / norm, vy / norm};
    } else if (c.yy > c.xx) {
        e.v_hi = {0.0, 1.0};
    }
    return e;
}

double log_sum_exp(std::span<const double> v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

Cov2 sample_covariance(std::span<const Point> pts, Point mean) {
    Cov2 c{0.0, 0.0, 0.0};
    for (const Point& p : pts) {
        const double dx = p.x - mean.x, dy = p.y - mean.y;
        c.xx += dx * dx;
        c.xy += dx * dy;
        c.yy += dy * dy;
    }
    const double n = static_cast<double>(pts.size());
    c.xx /= n;
    c.xy /= n;
    c.yy /= n;
    return c;
}

Point sample_mean(std::span<const Point> pts) {
    Point m;
    for (const Point& p : pts) {
        m.x += p.x;
        m.y += p.y;
    }
    m.x /= static_cast<double>(pts.size());
    m.y /= static_cast<double>(pts.size());
    return m;
}

std::vector<std::size_t> initial_centres(std::span<const Point> pts, int k, const EmConfig& cfg,
                                         std::mt19937_64& rng) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> chosen;
    if (cfg.init_strategy == InitStrategy::random_points) {
        std::vector<std::size_t> ids(n);
        std::iota(ids.begin(), ids.end(), std::size_t{0});
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), n - 1);
            std::swap(ids[static_cast<std::size_t>(i)], ids[pick(rng)]);
            chosen.push_back(ids[static_cast<std::size_t>(i)]);
        }
        return chosen;
    }
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    chosen.push_back(first(rng));
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::vector<char> taken(n, 0);
    taken[chosen.front()] = 1;
    while (chosen.size() < static_cast<std::size_t>(k)) {
        const Point last = pts[chosen.back()];
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], distance(pts[i], last));
            if (taken[i]) continue;
            if (best == n || nearest[i] > nearest[best]) best = i;
        }
        taken[best] = 1;
        chosen.push_back(best);
    }
    return chosen;
}

class EmRunner {
public:
    EmRunner(std::span<const Point> pts, const EmConfig& cfg, EmDiagnostics& diag)
        : pts_(pts), cfg_(cfg), diag_(diag) {}

    // Runs E/M steps until convergence or max_iters. On return `state` holds the
    // parameters of the last E-step and `resp` its responsibilities.
    void run_segment(GmmState& state, std::vector<std::vector<double>>& resp, int segment) {
        double prev = kNegInf;
        for (int it = 0; it < cfg_.max_iters; ++it) {
            state.log_likelihood = e_step(state, resp);
            diag_.trace.push_back({segment, it, state});
            ++diag_.iterations;
            if (it > 0 && std::abs(state.log_likelihood - prev) < cfg_.theta_em) {
                diag_.converged = true;
                return;
            }
            if (it + 1 == cfg_.max_iters) break;
            prev = state.log_likelihood;
            m_step(state, resp);
        }
        diag_.converged = false;
    }

    double e_step(const GmmState& s, std::vector<std::vector<double>>& resp) const {
        const auto k = static_cast<std::size_t>(s.k);
        resp.assign(pts_.size(), std::vector<double>(k, 0.0));
        std::vector<double> terms(k);
        double total = 0.0;
        for (std::size_t n = 0; n < pts_.size(); ++n) {
            for (std::size_t c = 0; c < k; ++c) {
                terms[c] = s.weights[c] > 0.0
                               ? std::log(s.weights[c]) + log_normal_density(pts_[n], s.means[c], s.covariances[c])
                               : kNegInf;
            }
            const double lse = log_sum_exp(terms);
            for (std::size_t c = 0; c < k; ++c) resp[n][c] = std::exp(terms[c] - lse);
            total += lse;
        }
        return total;
    }

    void m_step(GmmState& s, const std::vector<std::vector<double>>& resp) const {
        const auto k = static_cast<std::size_t>(s.k);
        const double n_total = static_cast<double>(pts_.size());
        for (std::size_t c = 0; c < k; ++c) {
            double nk = 0.0;
            Point mu;
            for (std::size_t n = 0; n < pts_.size(); ++n) {
                nk += resp[n][c];
                mu.x += resp[n][c] * pts_[n].x;
                mu.y += resp[n][c] * pts_[n].y;
            }
            s.weights[c] = nk / n_total;
            if (nk < 1e-12) continue;  // collapsed; parameters are irrelevant until repair
            mu.x /= nk;
            mu.y /= nk;
            Cov2 cov{0.0, 0.0, 0.0};
            for (std::size_t n = 0; n < pts_.size(); ++n) {
                const double dx = pts_[n].x - mu.x, dy = pts_[n].y - mu.y;
                cov.xx += resp[n][c] * dx * dx;
                cov.xy += resp[n][c] * dx * dy;
                cov.yy += resp[n][c] * dy * dy;
            }
            cov.xx /= nk;
            cov.xy /= nk;
            cov.yy /= nk;
            s.means[c] = mu;
            s.covariances[c] = cov.clamped(cfg_.cov_floor);
        }
    }

private:
    std::span<const Point> pts_;
    const EmConfig& cfg_;
    EmDiagnostics& diag_;
};

void canonicalize(GmmState& s, std::vector<std::vector<double>>& resp) {
    const auto k = static_cast<std::size_t>(s.k);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s.means[a].x != s.means[b].x) return s.means[a].x < s.means[b].x;
        return s.means[a].y < s.means[b].y;
    });
    GmmState out = s;
    for (std::size_t i = 0; i < k; ++i) {
        out.weights[i] = s.weights[order[i]];
        out.means[i] = s.means[order[i]];
        out.covariances[i] = s.covariances[order[i]];
    }
    for (auto& row : resp) {
        std::vector<double> r(k);
        for (std::size_t i = 0; i < k; ++i) r[i] = row[order[i]];
        row = std::move(r);
    }
    s = std::move(out);
}

std::vector<int> hard_assign(const std::vector<std::vector<double>>& resp) {
    std::vector<int> out(resp.size(), 0);
    for (std::size_t n = 0; n < resp.size(); ++n) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < resp[n].size(); ++c)
            if (resp[n][c] > resp[n][best]) best = c;
        out[n] = static_cast<int>(best);
    }
    return out;
}

// Point with the lowest max-responsibility whose current component keeps at
// least one other member. Returns npos if none qualifies.
std::size_t weakest_point(const std::vector<std::vector<double>>& resp, const std::vector<int>& label,
                          const std::vector<std::size_t>& counts, const std::vector<char>& excluded) {
    std::size_t best = static_cast<std::size_t>(-1);
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < resp.size(); ++n) {
        if (excluded[n] || counts[static_cast<std::size_t>(label[n])] < 2) continue;
        const double m = *std::max_element(resp[n].begin(), resp[n].end());
        if (m < best_val) {
            best_val = m;
            best = n;
        }
    }
    return best;
}

}  // namespace

double Cov2::min_eigenvalue() const { return eigen(*this).lo; }
double Cov2::max_eigenvalue() const { return eigen(*this).hi; }

Cov2 Cov2::clamped(double floor) const {
    const Eigen2 e = eigen(*this);
    if (e.lo >= floor) return *this;
    const double hi = std::max(e.hi, floor);
    const double lo = floor;
    const Point u = e.v_hi;
    const Point w{-u.y, u.x};
    return Cov2{hi * u.x * u.x + lo * w.x * w.x,
                hi * u.x * u.y + lo * w.x * w.y,
                hi * u.y * u.y + lo * w.y * w.y};
}

int default_cluster_count(std::size_t num_points) {
    return std::max(1, static_cast<int>(std::lround(static_cast<double>(num_points) / 25.0)));
}

double log_normal_density(Point x, Point mean, const Cov2& s) {
    const double det = s.det();
    if (!(det > 0.0) || !(s.xx > 0.0) || !std::isfinite(det))
        throw ClusteringError("covariance is not positive definite (regularization failure)");
    const double dx = x.x - mean.x, dy = x.y - mean.y;
    const double q = (s.yy * dx * dx - 2.0 * s.xy * dx * dy + s.xx * dy * dy) / det;
    return -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det) - 0.5 * q;
}

double log_likelihood(std::span<const Point> points, const GmmState& state) {
    if (points.empty()) throw ClusteringError("log-likelihood needs at least one point");
    if (state.k < 1 || state.weights.size() != static_cast<std::size_t>(state.k) ||
        state.means.size() != state.weights.size() || state.covariances.size() != state.weights.size())
        throw ClusteringError("malformed mixture state");
    std::vector<double> terms(static_cast<std::size_t>(state.k));
    double total = 0.0;
    for (const Point& x : points) {
        for (std::size_t c = 0; c < terms.size(); ++c) {
            terms[c] = state.weights[c] > 0.0
                           ? std::log(state.weights[c]) +
                                 log_normal_density(x, state.means[c], state.covariances[c])
                           : kNegInf;
        }
        total += log_sum_exp(terms);
    }
    return total;
}

EmResult run_emd(std::span<const Point> points, int k, const EmConfig& config) {
    if (k < 1) throw ClusteringError("cluster count must be at least 1");
    if (points.size() < static_cast<std::size_t>(k))
        throw ClusteringError("cluster count exceeds the number of points");
    if (!(config.theta_em > 0.0) || config.max_iters < 1 || !(config.cov_floor > 0.0))
        throw ClusteringError("invalid EM configuration");

    std::mt19937_64 rng(config.rng_seed);
    const Point global_mean = sample_mean(points);
    const Cov2 global_cov = sample_covariance(points, global_mean).clamped(config.cov_floor);

    EmResult result;
    GmmState& s = result.state;
    s.k = k;
    s.weights.assign(static_cast<std::size_t>(k), 1.0 / k);
    s.covariances.assign(static_cast<std::size_t>(k), global_cov);
    for (std::size_t idx : initial_centres(points, k, config, rng)) s.means.push_back(points[idx]);

    EmRunner runner(points, config, result.diagnostics);
    auto& resp = result.responsibilities;
    std::vector<int> label;
    for (int segment = 0;; ++segment) {
        runner.run_segment(s, resp, segment);
        canonicalize(s, resp);
        label = hard_assign(resp);

        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (int l : label) ++counts[static_cast<std::size_t>(l)];
        std::vector<std::size_t> empty;
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] == 0) empty.push_back(c);
        if (empty.empty()) break;

        std::vector<char> excluded(points.size(), 0);
        if (segment >= k) {
            for (std::size_t c : empty) {
                const std::size_t p = weakest_point(resp, label, counts, excluded);
                if (p == static_cast<std::size_t>(-1)) break;
                --counts[static_cast<std::size_t>(label[p])];
                label[p] = static_cast<int>(c);
                ++counts[c];
                excluded[p] = 1;
                ++result.diagnostics.forced_assignments;
            }
            break;
        }
        for (std::size_t c : empty) {
            const std::size_t p = weakest_point(resp, label, counts, excluded);
            if (p == static_cast<std::size_t>(-1)) break;
            excluded[p] = 1;
            s.means[c] = points[p];
            s.covariances[c] = global_cov;
            s.weights[c] = 1.0 / static_cast<double>(points.size());
            ++result.diagnostics.reseeds;
        }
        const double wsum = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
        for (double& w : s.weights) w /= wsum;
    }

    result.assignment.k = k;
    result.assignment.membership = std::move(label);
    result.assignment.centroids = s.means;
    return result;
}

void write_em_trace_csv(std::ostream& out, const EmDiagnostics& diag) {
    out << "segment,iter,P,component,pi,mu_x,mu_y,s_xx,s_xy,s_yy\n";
    const auto old = out.precision(17);
    for (const auto& row : diag.trace) {
        for (int c = 0; c < row.state.k; ++c) {
            const auto i = static_cast<std::size_t>(c);
            const auto& cov = row.state.covariances[i];
            out << row.segment << ',' << row.iteration << ',' << row.state.log_likelihood << ',' << c << ','
                << row.state.weights[i] << ',' << row.state.means[i].x << ',' << row.state.means[i].y << ','
                << cov.xx << ',' << cov.xy << ',' << cov.yy << '\n';
        }
    }
    out.precision(old);
}

}  // namespace dlmtc

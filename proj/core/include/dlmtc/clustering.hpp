#pragma once

// Gaussian-mixture EM clustering of node positions.
//
// The mixture log-likelihood of points x_1..x_N is
//
//     P = sum_n ln( sum_k pi_k * N(x_n | mu_k, Sigma_k) )
//
// and run_emd() alternates responsibilities (E-step) with closed-form
// weight/mean/covariance updates (M-step) until |P_t - P_{t-1}| < theta_em.
// Covariance eigenvalues are clamped from below at cov_floor, which is the
// exact maximiser of the M-step objective under that constraint, so P stays
// non-decreasing within an EM segment.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "dlmtc/model.hpp"

namespace dlmtc {

class ClusteringError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Cov2 {
    double xx = 1.0;
    double xy = 0.0;
    double yy = 1.0;

    double det() const { return xx * yy - xy * xy; }
    double min_eigenvalue() const;
    double max_eigenvalue() const;
    /// Clamp both eigenvalues to at least `floor`.
    Cov2 clamped(double floor) const;

    friend bool operator==(const Cov2&, const Cov2&) = default;
};

struct GmmState {
    int k = 0;
    std::vector<double> weights;
    std::vector<Point> means;
    std::vector<Cov2> covariances;
    double log_likelihood = 0.0;

    friend bool operator==(const GmmState&, const GmmState&) = default;
};

enum class InitStrategy { random_points, farthest_point };

struct EmConfig {
    double theta_em = 1e-6;   // nats
    int max_iters = 200;      // E-steps per segment
    double cov_floor = 1e-4;  // m^2
    InitStrategy init_strategy = InitStrategy::farthest_point;
    std::uint64_t rng_seed = 1;
};

/// One evaluated E-step. Segments restart after an empty-cluster repair.
struct EmTraceRow {
    int segment = 0;
    int iteration = 0;
    GmmState state;
};

struct EmDiagnostics {
    int iterations = 0;  // E-steps across all segments
    int reseeds = 0;
    int forced_assignments = 0;
    bool converged = false;
    std::vector<EmTraceRow> trace;
};

struct EmResult {
    GmmState state;
    ClusterAssignment assignment;
    std::vector<std::vector<double>> responsibilities;  // [point][component]
    EmDiagnostics diagnostics;
};

/// Default cluster count: one component per ~25 nodes.
int default_cluster_count(std::size_t num_points);

/// Bivariate normal log-density. Throws ClusteringError if sigma is not SPD.
double log_normal_density(Point x, Point mean, const Cov2& sigma);

double log_likelihood(std::span<const Point> points, const GmmState& state);

/// Fits a k-component mixture and hard-assigns each point to its most
/// responsible component (ties go to the lower index). Components are
/// relabelled canonically by ascending mean (x, then y), and every returned
/// component owns at least one point.
EmResult run_emd(std::span<const Point> points, int k, const EmConfig& config);

/// CSV convergence trace: segment,iter,P,component,pi,mu_x,mu_y,s_xx,s_xy,s_yy
void write_em_trace_csv(std::ostream& out, const EmDiagnostics& diagnostics);

}  // namespace dlmtc

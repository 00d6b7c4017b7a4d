#pragma once

#include <cstdint>
#include <vector>

#include "rstop/policy.hpp"
#include "rstop/rng.hpp"

namespace rstop {

enum class MeasureKind {
    TrueTheta,  // fixed drift theta
    WorstCase,  // adversarial drift switching at the indifference trajectory
};
const char* measure_name(MeasureKind m);

struct SimMeasure {
    MeasureKind kind = MeasureKind::TrueTheta;
    double theta = 0.0;  // drift under TrueTheta; ignored under WorstCase
};

struct SimConfig {
    SimMeasure measure;
    double dt = 1e-3;
    double t_max = 0.0;  // <= 0 requests the default horizon
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 1;
    unsigned n_threads = 1;  // estimates are identical for any thread count
};

struct PathOutcome {
    double tau = 0.0;
    Action action = Action::a2;
    bool censored = false;
};

struct TraceRow {
    double t = 0.0;
    double z = 0.0;
    double m_lo = 0.0;
    double m_hi = 0.0;
};

// Euler path of the signal under the configured measure, stopped by the
// policy at grid times (no intra-step crossing correction; the discretization
// bias shrinks with dt). Deterministic given (seed, path_index).
PathOutcome simulate_path(const StoppingPolicy& policy, const SimConfig& cfg,
                          std::uint64_t path_index,
                          std::vector<TraceRow>* trace = nullptr);

struct SimStats {
    std::uint64_t n_paths = 0;
    std::uint64_t n_censored = 0;
    std::uint64_t n_decided = 0;
    double mean_tau = 0.0;  // over decided paths
    double se_tau = 0.0;
    double freq_a0 = 0.0;   // of decided paths
    double freq_a1 = 0.0;
    double freq_a2 = 0.0;
    // fraction of committed stops (a0/a1) matching the true drift; defined
    // only under TrueTheta and when at least one committed stop occurred
    bool correct_defined = false;
    double correct_rate = 0.0;
    double se_correct = 0.0;
};

SimStats estimate(const StoppingPolicy& policy, const SimConfig& cfg);

// Horizon used when cfg.t_max <= 0: 50x the analytic mean exit time where
// available, otherwise 50x the squared width of the time-0 continuation
// region in units of sigma.
double default_horizon(const StoppingPolicy& policy);

// Exit-time law of the symmetric two-urn policy under drift theta: the
// continuation region is the fixed band (-z_bar, z_bar). Raises solver_error
// in the no-learning regime where no such band exists.
struct AnalyticStats {
    double mean_tau = 0.0;
    double correct_prob = 0.0;  // continuous limit 1/2 at theta = 0
};
AnalyticStats analytic_stats(const EllsbergParams& e, double theta);

} // namespace rstop

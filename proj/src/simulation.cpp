#include "rstop/simulation.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rstop/errors.hpp"

namespace rstop {

const char* measure_name(MeasureKind m) {
    switch (m) {
        case MeasureKind::TrueTheta: return "true_theta";
        case MeasureKind::WorstCase: return "worst_case";
    }
    return "unknown";
}

namespace {

// Time-homogeneous frame for the path loop. On the line w = z - slope * t
// (slope = (theta0 + theta1)/2) every region boundary is a constant and the
// posterior pair is a function of w alone, so each step needs one comparison
// set and, under the adversarial measure, a single exp.
struct SimFrame {
    bool two_band = false;          // interior outside-option stop band
    double b_a0 = 0.0;              // stop a0 at w <= b_a0
    double b_a1 = 0.0;              // stop a1 at w >= b_a1
    double b2_lo = 0.0, b2_hi = 0.0;  // stop a2 inside [b2_lo, b2_hi]
    double slope = 0.0;
    double kappa = 0.0;
    double logit_m_lo = 0.0, logit_m_hi = 0.0;
    double w_tilde = 0.0;
    double theta0 = 0.0, gap = 0.0, sigma = 1.0;
    double t_max = 0.0;

    bool stop_at(double w, Action& act) const {
        if (w <= b_a0) {
            act = Action::a0;
            return true;
        }
        if (w >= b_a1) {
            act = Action::a1;
            return true;
        }
        if (two_band && w >= b2_lo && w <= b2_hi) {
            act = Action::a2;
            return true;
        }
        return false;
    }

    double posterior_lo(double w) const { return expit(logit_m_lo + kappa * w); }
    double posterior_hi(double w) const { return expit(logit_m_hi + kappa * w); }
};

SimFrame make_frame(const StoppingPolicy& policy, const SimConfig& cfg) {
    const Problem& pr = policy.problem;
    SimFrame fr;
    RegionReport rep = region_report(policy, 0.0);
    if (rep.z_breaks.size() == 4) {
        fr.two_band = true;
        fr.b_a0 = rep.z_breaks[0];
        fr.b2_lo = rep.z_breaks[1];
        fr.b2_hi = rep.z_breaks[2];
        fr.b_a1 = rep.z_breaks[3];
    } else {
        fr.b_a0 = rep.z_breaks[0];
        fr.b_a1 = rep.z_breaks[1];
    }
    fr.slope = boundary_slope(pr.model);
    fr.kappa = pr.model.kappa();
    fr.logit_m_lo = logit(pr.prior.m_lo);
    fr.logit_m_hi = logit(pr.prior.m_hi);
    fr.w_tilde = z_tilde(policy.th.ind, 0.0, pr.prior, pr.model);
    fr.theta0 = pr.model.theta0;
    fr.gap = pr.model.drift_gap();
    fr.sigma = pr.model.sigma;
    fr.t_max = cfg.t_max > 0.0 ? cfg.t_max : default_horizon(policy);
    return fr;
}

PathOutcome run_path(const SimFrame& fr, const SimConfig& cfg,
                     const NormalSampler& nrm, std::uint64_t path_index,
                     std::vector<TraceRow>* trace) {
    Pcg64 rng(cfg.seed, path_index);
    const double dt = cfg.dt;
    const double step_sd = fr.sigma * std::sqrt(dt);
    const bool fixed_drift = cfg.measure.kind == MeasureKind::TrueTheta;
    const double fixed_mu = cfg.measure.theta - fr.slope;

    double w = 0.0;
    Action act = Action::a2;
    if (trace) trace->push_back({0.0, 0.0, fr.posterior_lo(0.0), fr.posterior_hi(0.0)});
    if (fr.stop_at(w, act)) return PathOutcome{0.0, act, false};

    const auto max_steps =
        static_cast<std::uint64_t>(std::ceil(fr.t_max / dt));
    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        double mu;
        if (fixed_drift) {
            mu = fixed_mu;
        } else {
            double m = w < fr.w_tilde ? fr.posterior_hi(w) : fr.posterior_lo(w);
            mu = fr.theta0 + fr.gap * m - fr.slope;
        }
        w += mu * dt + step_sd * nrm.sample(rng);
        if (trace) {
            double t = static_cast<double>(k) * dt;
            trace->push_back(
                {t, w + fr.slope * t, fr.posterior_lo(w), fr.posterior_hi(w)});
        }
        if (fr.stop_at(w, act))
            return PathOutcome{static_cast<double>(k) * dt, act, false};
    }
    return PathOutcome{static_cast<double>(max_steps) * dt, Action::a2, true};
}

void validate_config(const SimConfig& cfg) {
    if (!std::isfinite(cfg.dt) || !(cfg.dt > 0.0))
        throw std::domain_error("simulation dt must be positive");
    if (cfg.n_paths == 0) throw std::domain_error("n_paths must be at least 1");
    if (!std::isfinite(cfg.measure.theta))
        throw std::domain_error("measure theta must be finite");
    if (!std::isfinite(cfg.t_max))
        throw std::domain_error("t_max must be finite");
}

} // namespace

PathOutcome simulate_path(const StoppingPolicy& policy, const SimConfig& cfg,
                          std::uint64_t path_index,
                          std::vector<TraceRow>* trace) {
    validate_config(cfg);
    NormalSampler nrm;
    return run_path(make_frame(policy, cfg), cfg, nrm, path_index, trace);
}

double default_horizon(const StoppingPolicy& policy) {
    RegionReport rep = region_report(policy, 0.0);
    double width = rep.z_breaks.back() - rep.z_breaks.front();
    double half = 0.5 * width / policy.problem.model.sigma;
    return std::max(50.0 * half * half, 1e-6);
}

SimStats estimate(const StoppingPolicy& policy, const SimConfig& cfg) {
    validate_config(cfg);
    SimFrame fr = make_frame(policy, cfg);
    NormalSampler nrm;

    // Fixed chunk layout independent of the thread count: partial sums are
    // merged in chunk order, so estimates are bit-identical however the
    // chunks were scheduled.
    struct Chunk {
        double sum_tau = 0.0, sum_tau2 = 0.0;
        std::uint64_t n_a0 = 0, n_a1 = 0, n_a2 = 0, n_cens = 0;
        std::uint64_t n_committed = 0, n_correct = 0;
    };
    const std::uint64_t n = cfg.n_paths;
    const std::uint64_t n_chunks = std::min<std::uint64_t>(n, 256);
    std::vector<Chunk> chunks(n_chunks);

    const bool true_theta = cfg.measure.kind == MeasureKind::TrueTheta;
    const bool hi_side =
        std::abs(cfg.measure.theta - policy.problem.model.theta1) <=
        std::abs(cfg.measure.theta - policy.problem.model.theta0);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            Chunk& ch = chunks[c];
            std::uint64_t lo = c * n / n_chunks;
            std::uint64_t hi = (c + 1) * n / n_chunks;
            for (std::uint64_t i = lo; i < hi; ++i) {
                PathOutcome out = run_path(fr, cfg, nrm, i, nullptr);
                if (out.censored) {
                    ++ch.n_cens;
                    continue;
                }
                ch.sum_tau += out.tau;
                ch.sum_tau2 += out.tau * out.tau;
                switch (out.action) {
                    case Action::a0: ++ch.n_a0; break;
                    case Action::a1: ++ch.n_a1; break;
                    case Action::a2: ++ch.n_a2; break;
                }
                if (true_theta && out.action != Action::a2) {
                    ++ch.n_committed;
                    bool hit = (out.action == Action::a1) == hi_side;
                    if (hit) ++ch.n_correct;
                }
            }
        }
    };

    unsigned n_threads = std::max(1u, cfg.n_threads);
    if (n_threads > 1) {
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    } else {
        worker();
    }

    Chunk tot;
    for (const Chunk& ch : chunks) {
        tot.sum_tau += ch.sum_tau;
        tot.sum_tau2 += ch.sum_tau2;
        tot.n_a0 += ch.n_a0;
        tot.n_a1 += ch.n_a1;
        tot.n_a2 += ch.n_a2;
        tot.n_cens += ch.n_cens;
        tot.n_committed += ch.n_committed;
        tot.n_correct += ch.n_correct;
    }

    SimStats st;
    st.n_paths = n;
    st.n_censored = tot.n_cens;
    st.n_decided = n - tot.n_cens;
    if (st.n_decided > 0) {
        double nd = static_cast<double>(st.n_decided);
        st.mean_tau = tot.sum_tau / nd;
        if (st.n_decided > 1) {
            double var =
                (tot.sum_tau2 - tot.sum_tau * tot.sum_tau / nd) / (nd - 1.0);
            st.se_tau = std::sqrt(std::max(var, 0.0) / nd);
        }
        st.freq_a0 = static_cast<double>(tot.n_a0) / nd;
        st.freq_a1 = static_cast<double>(tot.n_a1) / nd;
        st.freq_a2 = static_cast<double>(tot.n_a2) / nd;
    }
    if (true_theta && tot.n_committed > 0) {
        st.correct_defined = true;
        double nc = static_cast<double>(tot.n_committed);
        st.correct_rate = static_cast<double>(tot.n_correct) / nc;
        st.se_correct =
            std::sqrt(st.correct_rate * (1.0 - st.correct_rate) / nc);
    }
    return st;
}

AnalyticStats analytic_stats(const EllsbergParams& e, double theta) {
    if (!std::isfinite(theta)) throw std::domain_error("theta must be finite");
    RbarResult rb = solve_rbar(e);  // raises in the no-learning regime
    double s2 = e.sigma * e.sigma;
    double base = rb.z_bar * rb.z_bar / s2;
    AnalyticStats out;
    if (theta == 0.0) {
        out.mean_tau = base;
        out.correct_prob = 0.5;
    } else {
        double x = theta * rb.z_bar / s2;
        out.mean_tau = base * std::tanh(x) / x;
        out.correct_prob = 1.0 / (1.0 + std::exp(-2.0 * std::abs(x)));
    }
    return out;
}

} // namespace rstop

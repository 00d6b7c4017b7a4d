#include "rstop/policy.hpp"

#include <algorithm>

namespace rstop {

const char* action_name(Action a) {
    switch (a) {
        case Action::a0: return "a0";
        case Action::a1: return "a1";
        case Action::a2: return "a2";
    }
    return "unknown";
}

const char* region_name(Region r) {
    switch (r) {
        case Region::StopA0: return "stop_a0";
        case Region::Continue: return "continue";
        case Region::StopA2: return "stop_a2";
        case Region::StopA1: return "stop_a1";
    }
    return "unknown";
}

StoppingPolicy make_policy(const Problem& prob) {
    return StoppingPolicy{prob, classify(prob)};
}

Decision decide(const StoppingPolicy& policy, double t, double z) {
    PosteriorPair m =
        posterior_pair(policy.problem.prior, t, z, policy.problem.model);
    const Thresholds& th = policy.th;
    if (m.m_hi_t <= th.stop_a0_r()) return Decision::stop_with(Action::a0);
    if (m.m_lo_t >= th.stop_a1_r()) return Decision::stop_with(Action::a1);
    if (th.has_a2_stop()) {
        const CaseAiThresholds& a = *th.ai;
        if (m.m_hi_t >= a.r1l && m.m_lo_t <= a.r1R)
            return Decision::stop_with(Action::a2);
    }
    return Decision::go_on();
}

double immediate_payoff(double t, double z, const Payoffs& u,
                        const PriorInterval& prior, const ModelParams& p) {
    PosteriorPair m = posterior_pair(prior, t, z, p);
    return std::max({u.worst_a0(m.m_hi_t), u.worst_a1(m.m_lo_t), u.u2});
}

RegionReport region_report(const StoppingPolicy& policy, double t) {
    const Problem& pr = policy.problem;
    const Thresholds& th = policy.th;
    RegionReport rep;
    rep.t = t;
    if (th.solved_case == CaseTag::CaseAI) {
        const CaseAiThresholds& a = *th.ai;
        rep.z_breaks = {z_of_posterior_hi(a.r2l, t, pr.prior, pr.model),
                        z_of_posterior_hi(a.r1l, t, pr.prior, pr.model),
                        z_of_posterior_lo(a.r1R, t, pr.prior, pr.model),
                        z_of_posterior_lo(a.r2R, t, pr.prior, pr.model)};
        rep.regions = {Region::StopA0, Region::Continue, Region::StopA2,
                       Region::Continue, Region::StopA1};
    } else {
        rep.z_breaks = {z_of_posterior_hi(th.stop_a0_r(), t, pr.prior, pr.model),
                        z_of_posterior_lo(th.stop_a1_r(), t, pr.prior, pr.model)};
        rep.regions = {Region::StopA0, Region::Continue, Region::StopA1};
    }
    return rep;
}

} // namespace rstop

#include "rstop/value_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rstop/errors.hpp"
#include "rstop/policy.hpp"

namespace rstop {

ValueFunction build_value_function(const Problem& prob) {
    return build_value_function(prob, classify(prob));
}

ValueFunction build_value_function(const Problem& prob, const Thresholds& th) {
    ValueFunction vf;
    vf.problem = prob;
    vf.th = th;
    const Payoffs& u = prob.payoffs;
    double ch = th.c_hat;
    double d0 = u.u00 - u.u01;
    double d1 = u.u11 - u.u10;
    double r_a0 = th.stop_a0_r();  // raises if the thresholds carry no case
    double r_a1 = th.stop_a1_r();

    // left piece: value and slope fitted to the a0 stop payoff at its boundary
    vf.a_left = -d0 - ch * l(r_a0);
    vf.b_left = u.u00 - ch * (1.0 - l_tilde(r_a0));

    if (th.solved_case == CaseTag::CaseB) {
        // carry value and slope across the switching trajectory
        double v_switch =
            ch * l_hat(th.ind.pi_hi) + vf.a_left * th.ind.pi_hi + vf.b_left;
        vf.a_right = vf.a_left + ch * (l(th.ind.pi_hi) - l(th.ind.pi_lo));
        vf.b_right = v_switch - ch * l_hat(th.ind.pi_lo) - vf.a_right * th.ind.pi_lo;
    } else {
        // fitted to the a1 stop payoff at its boundary
        vf.a_right = d1 - ch * l(r_a1);
        vf.b_right = u.u10 - ch * (1.0 - l_tilde(r_a1));
    }
    return vf;
}

namespace {

double g_piece(double y, double ch, double a, double b) {
    return ch * l_hat(y) + a * y + b;
}

} // namespace

double evaluate(const ValueFunction& vf, double t, double z) {
    const Payoffs& u = vf.problem.payoffs;
    PosteriorPair m = posterior_pair(vf.problem.prior, t, z, vf.problem.model);
    double ch = vf.th.c_hat;

    if (vf.th.solved_case == CaseTag::CaseAI) {
        const CaseAiThresholds& a = *vf.th.ai;
        if (m.m_hi_t <= a.r2l) return u.worst_a0(m.m_hi_t);
        if (m.m_lo_t >= a.r2R) return u.worst_a1(m.m_lo_t);
        if (m.m_hi_t >= a.r1l && m.m_lo_t <= a.r1R) return u.u2;
        if (m.m_hi_t < a.r1l) return g_piece(m.m_hi_t, ch, vf.a_left, vf.b_left);
        return g_piece(m.m_lo_t, ch, vf.a_right, vf.b_right);
    }
    if (m.m_hi_t <= vf.th.stop_a0_r()) return u.worst_a0(m.m_hi_t);
    if (m.m_lo_t >= vf.th.stop_a1_r()) return u.worst_a1(m.m_lo_t);
    if (m.m_hi_t < vf.th.ind.pi_hi)
        return g_piece(m.m_hi_t, ch, vf.a_left, vf.b_left);
    return g_piece(m.m_lo_t, ch, vf.a_right, vf.b_right);
}

namespace {

struct Breakpoint {
    double z;
    const char* where;
    bool chart_switch = false;  // posterior chart changes across this point
};

std::vector<Breakpoint> breakpoints_at(const ValueFunction& vf, double t) {
    const Problem& pr = vf.problem;
    std::vector<Breakpoint> bp;
    if (vf.th.solved_case == CaseTag::CaseAI) {
        const CaseAiThresholds& a = *vf.th.ai;
        bp.push_back({z_of_posterior_hi(a.r2l, t, pr.prior, pr.model), "a0 boundary"});
        bp.push_back({z_of_posterior_hi(a.r1l, t, pr.prior, pr.model),
                      "outside-option left edge"});
        bp.push_back({z_of_posterior_lo(a.r1R, t, pr.prior, pr.model),
                      "outside-option right edge"});
        bp.push_back({z_of_posterior_lo(a.r2R, t, pr.prior, pr.model), "a1 boundary"});
    } else {
        bp.push_back({z_of_posterior_hi(vf.th.stop_a0_r(), t, pr.prior, pr.model),
                      "a0 boundary"});
        bp.push_back({z_tilde(vf.th.ind, t, pr.prior, pr.model), "switch", true});
        bp.push_back({z_of_posterior_lo(vf.th.stop_a1_r(), t, pr.prior, pr.model),
                      "a1 boundary"});
    }
    return bp;
}

} // namespace

bool SmoothContactReport::ok() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ContactCheck& c) { return c.pass; });
}

std::vector<ContactCheck> SmoothContactReport::violations() const {
    std::vector<ContactCheck> bad;
    for (const ContactCheck& c : checks)
        if (!c.pass) bad.push_back(c);
    return bad;
}

SmoothContactReport check_smooth_contact(const ValueFunction& vf, double t,
                                         double tol) {
    SmoothContactReport rep;
    rep.t = t;
    rep.tol = tol;
    std::vector<Breakpoint> bp = breakpoints_at(vf, t);

    for (std::size_t i = 0; i < bp.size(); ++i) {
        double zb = bp[i].z;
        // keep stencils away from the neighboring breakpoints
        double room = 1e308;
        for (std::size_t j = 0; j < bp.size(); ++j)
            if (j != i && std::abs(bp[j].z - zb) > 0.0)
                room = std::min(room, std::abs(bp[j].z - zb));
        double h = std::min(1e-5 * std::max(1.0, std::abs(zb)), 0.25 * room);
        h = std::max(h, 1e-9);

        auto v = [&](double z) { return evaluate(vf, t, z); };
        ContactCheck chk;
        chk.z = zb;
        chk.where = bp[i].where;
        chk.value_gap = std::abs(v(zb + 1e-9) - v(zb - 1e-9));
        // second-order one-sided slopes from each side of the breakpoint
        double left =
            (3.0 * v(zb) - 4.0 * v(zb - h) + v(zb - 2.0 * h)) / (2.0 * h);
        double right =
            (-3.0 * v(zb) + 4.0 * v(zb + h) - v(zb + 2.0 * h)) / (2.0 * h);
        if (bp[i].chart_switch) {
            // Where the worst-case posterior switches, each side is smoothly
            // pasted in its own chart: dv/d(upper posterior) on the left must
            // equal dv/d(lower posterior) on the right. Rescale the z-slopes
            // by each side's dm/dz before comparing; the raw dv/dz values
            // differ here by construction unless the two charts are mirror
            // images (symmetric rewards).
            double kappa = vf.problem.model.kappa();
            double pi_hi = vf.th.ind.pi_hi;
            double pi_lo = vf.th.ind.pi_lo;
            left /= kappa * pi_hi * (1.0 - pi_hi);
            right /= kappa * pi_lo * (1.0 - pi_lo);
        }
        chk.slope_gap = std::abs(right - left);
        chk.pass = chk.value_gap <= tol && chk.slope_gap <= tol;
        rep.checks.push_back(chk);
    }
    return rep;
}

double hjb_residual(const ValueFunction& vf, double t, double z) {
    StoppingPolicy pol{vf.problem, vf.th};
    if (decide(pol, t, z).stop)
        throw region_error("hjb_residual: (t, z) lies in a stopping region");

    const ModelParams& p = vf.problem.model;
    double slope = boundary_slope(p);
    double room = 1e308;
    for (const Breakpoint& b : breakpoints_at(vf, t))
        room = std::min(room, std::abs(b.z - z));

    double ht = 1e-4 * std::max(1.0, std::abs(t));
    // breakpoints drift with the common slope; keep the time stencil from
    // pushing the spatial one across a boundary
    double room_t = room - std::abs(slope) * ht;
    if (room_t < 1e-6)
        throw region_error("hjb_residual: too close to a region boundary for "
                           "a stable stencil");
    double hz = std::min(1e-4 * std::max(1.0, std::abs(z)), 0.3 * room_t);

    auto v = [&](double tt, double zz) { return evaluate(vf, tt, zz); };
    double vt = (v(t + ht, z) - v(t - ht, z)) / (2.0 * ht);
    double vz = (v(t, z + hz) - v(t, z - hz)) / (2.0 * hz);
    double vzz = (v(t, z + hz) - 2.0 * v(t, z) + v(t, z - hz)) / (hz * hz);
    double f = worst_case_drift(vf.problem, vf.th.ind, t, z);
    return -p.c + vt + 0.5 * p.sigma * p.sigma * vzz + f * vz;
}

} // namespace rstop

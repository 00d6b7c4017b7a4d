#include "rstop/thresholds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rstop/errors.hpp"
#include "rstop/root_find.hpp"

namespace rstop {

const char* case_name(CaseTag tag) {
    switch (tag) {
        case CaseTag::NoLearn: return "no_learn";
        case CaseTag::CaseAI: return "case_a_i";
        case CaseTag::CaseAII: return "case_a_ii";
        case CaseTag::CaseB: return "case_b";
    }
    return "unknown";
}

double Thresholds::stop_a0_r() const {
    switch (solved_case) {
        case CaseTag::CaseAI:
            if (ai) return ai->r2l;
            break;
        case CaseTag::CaseAII:
            if (aii) return aii->rl;
            break;
        case CaseTag::CaseB:
            if (b) return b->rtl;
            break;
        default:
            break;
    }
    throw std::logic_error("thresholds carry no solved values for their case");
}

double Thresholds::stop_a1_r() const {
    switch (solved_case) {
        case CaseTag::CaseAI:
            if (ai) return ai->r2R;
            break;
        case CaseTag::CaseAII:
            if (aii) return aii->rR;
            break;
        case CaseTag::CaseB:
            if (b) return b->rtR;
            break;
        default:
            break;
    }
    throw std::logic_error("thresholds carry no solved values for their case");
}

bool Thresholds::has_a2_stop() const { return solved_case == CaseTag::CaseAI; }

// ---------- coupled l / l_tilde gap system ----------

LGapPair solve_l_gap_pair(double gap_l, double gap_lt) {
    if (!std::isfinite(gap_l) || !std::isfinite(gap_lt))
        throw std::domain_error("solve_l_gap_pair: gaps must be finite");
    if (gap_l < 0.0) {
        LGapPair flipped = solve_l_gap_pair(-gap_l, -gap_lt);
        return LGapPair{flipped.r2, flipped.r1};
    }
    // Along the one-parameter family r2(r1) fixed by the l gap, the l_tilde
    // gap sweeps (0, gap_l) monotonically, so a solution exists iff gap_lt
    // lies strictly inside that range.
    if (!(gap_l > 0.0) || !(gap_lt > 0.0) || !(gap_lt < gap_l))
        throw solver_error(
            "solve_l_gap_pair: no solution (the l_tilde gap must lie strictly "
            "between 0 and the l gap; got l gap " + std::to_string(gap_l) +
            ", l_tilde gap " + std::to_string(gap_lt) + ")");

    auto x2_of = [&](double x1) {
        return logodds::invert_l(logodds::l(x1) + gap_l);
    };
    auto resid = [&](double x1) {
        return logodds::l_tilde(x2_of(x1)) - logodds::l_tilde(x1) - gap_lt;
    };
    auto dresid = [&](double x1) {
        double r1 = expit(x1);
        double r2 = expit(x2_of(x1));
        return (r2 - r1) / (r1 * (1.0 - r1));
    };

    // |l| grows like e^|x|, so once it passes gap_l / machine-eps the gap is
    // absorbed in rounding and resid collapses to -gap_lt on both sides. Keep
    // the bracket where the gap stays representable; the crossing sits inside
    // it unless the gaps are within ~1e-9 relative of the degenerate edges.
    double reach = std::log(std::max(gap_l, 4.0)) + 20.0;
    double lo = -reach;
    double hi = reach;

    RootOptions opt;
    opt.f_tol = std::max(1e-13, 4e-16 * std::abs(gap_lt));
    double x1 = newton_bisect(resid, dresid, lo, hi, opt, "solve_l_gap_pair");
    return LGapPair{expit(x1), expit(x2_of(x1))};
}

// ---------- case solvers ----------

CaseAiThresholds solve_case_ai(const Payoffs& u, const ModelParams& p) {
    double ch = p.c_hat();
    if (!(u.u2 > u.u10) || !(u.u2 < u.u11))
        throw solver_error(
            "solve_case_ai: no continuation band borders the a1 stop region "
            "(u2 must lie strictly between u10 and u11)");
    if (!(u.u2 > u.u01) || !(u.u2 < u.u00))
        throw solver_error(
            "solve_case_ai: no continuation band borders the a0 stop region "
            "(u2 must lie strictly between u01 and u00)");
    LGapPair right = solve_l_gap_pair((u.u11 - u.u10) / ch, (u.u2 - u.u10) / ch);
    LGapPair left = solve_l_gap_pair((u.u00 - u.u01) / ch, (u.u00 - u.u2) / ch);
    CaseAiThresholds th;
    th.r1R = right.r1;
    th.r2R = right.r2;
    th.r2l = left.r1;
    th.r1l = left.r2;
    return th;
}

CaseAiiThresholds solve_case_aii(const Payoffs& u, const PriorInterval& prior,
                                 const ModelParams& p) {
    IndifferencePoint ind = indifference(prior, u);
    double ch = p.c_hat();
    CaseAiiThresholds th;
    th.rl = invert_l(l(ind.pi_hi) - (u.u00 - u.u01) / ch);
    th.rR = invert_l(l(ind.pi_lo) + (u.u11 - u.u10) / ch);
    return th;
}

namespace {

// One shot of the case-b construction: fit the continuation value to the a0
// stop payoff at boundary x (value and slope), carry it across the switching
// trajectory into the lower-posterior chart, and report how far the resulting
// slope-matched a1 boundary candidate misses the a1 stop payoff.
struct CaseBShot {
    double y_star = 0.0;
    double resid = 0.0;
};

CaseBShot case_b_shot(double x, const Payoffs& u, const IndifferencePoint& ind,
                      double ch) {
    double d0 = u.u00 - u.u01;
    double d1 = u.u11 - u.u10;
    double a_left = -d0 - ch * l(x);
    double b_left = u.u00 - ch * (1.0 - l_tilde(x));
    double v_at_switch = ch * l_hat(ind.pi_hi) + a_left * ind.pi_hi + b_left;
    double a_right = a_left + ch * (l(ind.pi_hi) - l(ind.pi_lo));
    double b_right = v_at_switch - ch * l_hat(ind.pi_lo) - a_right * ind.pi_lo;
    double y_star = invert_l((d1 - a_right) / ch);
    double v_y_star = ch * l_hat(y_star) + a_right * y_star + b_right;
    return CaseBShot{y_star, v_y_star - (u.u10 + d1 * y_star)};
}

} // namespace

CaseBThresholds solve_case_b(const Payoffs& u, const PriorInterval& prior,
                             const ModelParams& p) {
    IndifferencePoint ind = indifference(prior, u);
    double ch = p.c_hat();

    auto resid = [&](double s) {
        return case_b_shot(expit(s), u, ind, ch).resid;
    };

    // shoot on the log-odds of the a0 boundary; the residual starts positive
    // near 0 and turns negative as the boundary approaches pi_hi
    double s_hi = logit(ind.pi_hi) - 1e-9;
    if (!(resid(s_hi) < 0.0))
        throw solver_error("solve_case_b: no sign change near the upper end of "
                           "the a0 boundary range");
    // expand toward 0, staying above the probability clamp of the transforms
    double s_floor = logit(PROB_EPS) + 1.0;
    double s_lo = std::max(s_floor, s_hi - 10.0);
    while (resid(s_lo) <= 0.0 && s_lo > s_floor)
        s_lo = std::max(s_floor, s_lo - 20.0);
    if (resid(s_lo) <= 0.0)
        throw solver_error("solve_case_b: failed to bracket the a0 boundary");

    RootOptions opt;
    opt.x_tol = 0.0;  // drive the bracket by residual alone
    // a residual of size d shows up as a d/h kink in finite-difference slope
    // checks at the fitted boundary, so keep it close to machine precision
    opt.f_tol = 1e-13;
    double s = bisect(resid, s_lo, s_hi, opt, "solve_case_b");

    CaseBThresholds th;
    th.rtl = expit(s);
    th.rtR = case_b_shot(th.rtl, u, ind, ch).y_star;
    if (!(th.rtl < ind.pi_hi) || !(th.rtR > ind.pi_lo))
        throw solver_error("solve_case_b: boundaries violate the switching "
                           "trajectory ordering");
    return th;
}

BayesianThresholds bayesian_sprt(double a, double b, double c_hat) {
    if (!(a > 0.0) || !(b > 0.0) || !(c_hat > 0.0))
        throw std::domain_error("bayesian_sprt: penalties and cost must be positive");
    LGapPair pair = solve_l_gap_pair((a + b) / c_hat, b / c_hat);
    return BayesianThresholds{pair.r1, pair.r2};
}

CriticalU2 critical_u2(const Payoffs& u, const PriorInterval& prior,
                       const ModelParams& p) {
    double denom = u.u00 + u.u11 - u.u01 - u.u10;
    CriticalU2 crit;
    crit.u2_star = (u.u11 * u.u00 - u.u10 * u.u01) / denom;
    IndifferencePoint ind = indifference(prior, u);
    double ch = p.c_hat();
    double rl = invert_l(l(ind.pi_hi) - (u.u00 - u.u01) / ch);
    crit.u2_dstar = 0.5 * ch * (1.0 / (rl * (1.0 - rl)) -
                                1.0 / (ind.pi_hi * (1.0 - ind.pi_hi))) +
                    0.5 * (u.u00 + u.u01);
    return crit;
}

// ---------- classification ----------

Thresholds classify(const Problem& prob) {
    // uniform domain validation regardless of how the problem was assembled
    ModelParams::make(prob.model.theta0, prob.model.theta1, prob.model.sigma,
                      prob.model.c);
    PriorInterval::make(prob.prior.m_lo, prob.prior.m_hi);
    Payoffs::make(prob.payoffs.u00, prob.payoffs.u01, prob.payoffs.u10,
                  prob.payoffs.u11, prob.payoffs.u2);

    const Payoffs& u = prob.payoffs;
    Thresholds th;
    th.ind = indifference(prob.prior, u);
    th.c_hat = prob.model.c_hat();
    CriticalU2 crit = critical_u2(u, prob.prior, prob.model);
    th.u2_star = crit.u2_star;
    th.u2_dstar = crit.u2_dstar;

    if (u.no_risky_option()) {
        th.solved_case = CaseTag::CaseB;
        th.b = solve_case_b(u, prob.prior, prob.model);
    } else if (u.symmetric()) {
        if (u.u2 >= th.u2_dstar) {
            th.solved_case = CaseTag::CaseAI;
            th.ai = solve_case_ai(u, prob.model);
        } else {
            th.solved_case = CaseTag::CaseAII;
            th.aii = solve_case_aii(u, prob.prior, prob.model);
        }
    } else {
        throw solver_error(
            "classify: unsupported payoff configuration (asymmetric committed "
            "stakes need a dominated outside option, u2 <= min(u01, u10))");
    }
    th.case_tag = th.solved_case;

    // tag configurations whose time-0 posteriors already sit in a stop region
    double m_hi0 = prob.prior.m_hi;
    double m_lo0 = prob.prior.m_lo;
    bool stops_now = false;
    switch (th.solved_case) {
        case CaseTag::CaseAI: {
            const CaseAiThresholds& a = *th.ai;
            stops_now = m_hi0 <= a.r2l || m_lo0 >= a.r2R ||
                        (m_hi0 >= a.r1l && m_lo0 <= a.r1R);
            break;
        }
        case CaseTag::CaseAII:
            stops_now = m_hi0 <= th.aii->rl || m_lo0 >= th.aii->rR;
            break;
        case CaseTag::CaseB:
            stops_now = m_hi0 <= th.b->rtl || m_lo0 >= th.b->rtR;
            break;
        default:
            break;
    }
    if (stops_now) th.case_tag = CaseTag::NoLearn;
    return th;
}

// ---------- symmetric two-urn family ----------

EllsbergParams EllsbergParams::make(double alpha, double eps, double c,
                                    double sigma) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha <= 0.5))
        throw std::domain_error("alpha must lie in (0, 1/2]");
    if (!std::isfinite(eps) || !(eps >= 0.0) || !(eps < 1.0))
        throw std::domain_error("eps must lie in [0, 1)");
    if (!std::isfinite(c) || !(c > 0.0)) throw std::domain_error("c must be positive");
    if (!std::isfinite(sigma) || !(sigma > 0.0))
        throw std::domain_error("sigma must be positive");
    return EllsbergParams{alpha, eps, c, sigma};
}

ModelParams EllsbergParams::model() const {
    return ModelParams::make(-alpha, alpha, sigma, c);
}

Payoffs EllsbergParams::payoffs() const {
    return Payoffs::make(0.5 + alpha, 0.5 - alpha, 0.5 - alpha, 0.5 + alpha, 0.5);
}

PriorInterval EllsbergParams::prior() const {
    return PriorInterval::make(0.5 * (1.0 - eps), 0.5 * (1.0 + eps));
}

Problem EllsbergParams::problem() const {
    return Problem{model(), prior(), payoffs()};
}

double solve_rhat(const EllsbergParams& e) {
    return invert_l(e.alpha / e.model().c_hat());
}

double no_learning_cutoff(const EllsbergParams& e) {
    return 2.0 * solve_rhat(e) - 1.0;
}

RbarResult solve_rbar(const EllsbergParams& e) {
    double pi_hi = 0.5 * (1.0 + e.eps);
    double rhat = solve_rhat(e);
    if (pi_hi >= rhat)
        throw solver_error("solve_rbar: prior ambiguity at or past the "
                           "no-learning cutoff; no finite commitment boundary");
    double ch = e.model().c_hat();
    RbarResult out;
    out.rbar = invert_l(2.0 * e.alpha / ch - l(pi_hi));
    out.z_bar = boundary_intercept_lo(out.rbar, e.prior(), e.model());
    return out;
}

double ellsberg_value0(const EllsbergParams& e) {
    double pi_hi = 0.5 * (1.0 + e.eps);
    if (pi_hi >= solve_rhat(e)) return 0.5;
    RbarResult rb = solve_rbar(e);
    double ch = e.model().c_hat();
    return 0.5 + 0.5 * ch * (1.0 / (rb.rbar * (1.0 - rb.rbar)) -
                             1.0 / (pi_hi * (1.0 - pi_hi)));
}

} // namespace rstop

#pragma once

#include <optional>

#include "rstop/core_math.hpp"

namespace rstop {

// Shape of the optimal stopping rule.
enum class CaseTag {
    NoLearn,  // time-0 posteriors already sit in a stopping region
    CaseAI,   // two continuation bands around an interior outside-option band
    CaseAII,  // single continuation band, outside option never taken
    CaseB,    // single continuation band, outside option dominated everywhere
};
const char* case_name(CaseTag tag);

// Case a.i: stop with a0 at m_hi <= r2l, with the outside option inside
// [r1l, r1R] (graded on m_hi / m_lo), with a1 at m_lo >= r2R.
struct CaseAiThresholds {
    double r1R = 0.0;
    double r2R = 0.0;
    double r1l = 0.0;
    double r2l = 0.0;
};

// Case a.ii: stop with a0 at m_hi <= rl, with a1 at m_lo >= rR.
struct CaseAiiThresholds {
    double rl = 0.0;
    double rR = 0.0;
};

// Case b: same two-sided shape, thresholds from the shooting construction.
struct CaseBThresholds {
    double rtl = 0.0;
    double rtR = 0.0;
};

// Single-prior (SPRT) thresholds for misclassification penalties a, b.
struct BayesianThresholds {
    double rBl = 0.0;
    double rBR = 0.0;
};

struct CriticalU2 {
    double u2_star = 0.0;   // level at which the outside option starts to bind
    double u2_dstar = 0.0;  // level at which the interior stop band appears
};

struct Thresholds {
    CaseTag case_tag = CaseTag::CaseAII;
    // underlying functional form; differs from case_tag only under NoLearn
    CaseTag solved_case = CaseTag::CaseAII;
    IndifferencePoint ind;
    double c_hat = 0.0;
    double u2_star = 0.0;
    double u2_dstar = 0.0;
    std::optional<CaseAiThresholds> ai;
    std::optional<CaseAiiThresholds> aii;
    std::optional<CaseBThresholds> b;

    // outer stop boundaries shared by every case shape
    double stop_a0_r() const;  // stop with a0 once m_hi falls to this level
    double stop_a1_r() const;  // stop with a1 once m_lo rises to this level
    bool has_a2_stop() const;  // interior outside-option band present
};

// Unique pair r1 < r2 (for gap_l > 0) with l(r2) - l(r1) = gap_l and
// l_tilde(r2) - l_tilde(r1) = gap_lt. Solvable iff gap_lt lies strictly
// between 0 and gap_l; raises solver_error otherwise.
struct LGapPair {
    double r1 = 0.0;
    double r2 = 0.0;
};
LGapPair solve_l_gap_pair(double gap_l, double gap_lt);

CaseAiThresholds solve_case_ai(const Payoffs& u, const ModelParams& p);
CaseAiiThresholds solve_case_aii(const Payoffs& u, const PriorInterval& prior,
                                 const ModelParams& p);
CaseBThresholds solve_case_b(const Payoffs& u, const PriorInterval& prior,
                             const ModelParams& p);
BayesianThresholds bayesian_sprt(double a, double b, double c_hat);
CriticalU2 critical_u2(const Payoffs& u, const PriorInterval& prior,
                       const ModelParams& p);

Thresholds classify(const Problem& prob);

// ---------- symmetric two-urn family ----------
// Signal drifts -alpha / +alpha, bets on the drawn color pay 1/2 + alpha when
// right and 1/2 - alpha when wrong, outside option pays 1/2, and the prior set
// is the eps-interval around 1/2.
struct EllsbergParams {
    double alpha = 0.125;
    double eps = 0.0;
    double c = 0.01;
    double sigma = 1.0;

    static EllsbergParams make(double alpha, double eps, double c, double sigma);
    ModelParams model() const;
    Payoffs payoffs() const;
    PriorInterval prior() const;
    Problem problem() const;
};

// Posterior level below which learning is never worth starting; the prior
// interval kills learning once (1 + eps)/2 reaches it.
double solve_rhat(const EllsbergParams& e);
double no_learning_cutoff(const EllsbergParams& e);  // 2 rhat - 1

// Commitment threshold and the matching constant z-boundary of the
// continuation region. Raises solver_error in the no-learning regime.
struct RbarResult {
    double rbar = 0.0;
    double z_bar = 0.0;
};
RbarResult solve_rbar(const EllsbergParams& e);

// Closed-form time-0 value at z = 0 for the two-urn family.
double ellsberg_value0(const EllsbergParams& e);

} // namespace rstop

// Acceptance gate: one self-contained check per release criterion, each
// printed as a single [PASS]/[FAIL] line. Exits nonzero if any criterion
// fails. Monte Carlo checks run on fixed seeds so the outcome is
// deterministic; statistical tolerances are three standard errors plus, where
// the discrete-time scheme biases the estimate upward, an explicit allowance
// for the first-passage overshoot of one Euler step.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rstop/errors.hpp"
#include "rstop/policy.hpp"
#include "rstop/rng.hpp"
#include "rstop/simulation.hpp"
#include "rstop/thresholds.hpp"
#include "rstop/value_function.hpp"

using namespace rstop;

namespace {

constexpr std::uint64_t MC_SEED = 20240817;

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return std::string(buf);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

EllsbergParams urn(double eps) {
    return EllsbergParams::make(0.125, eps, 0.01, 1.0);
}

SimStats run_mc(const StoppingPolicy& policy, MeasureKind kind, double theta,
                std::uint64_t n_paths, double dt) {
    SimConfig cfg;
    cfg.measure = SimMeasure{kind, theta};
    cfg.dt = dt;
    cfg.t_max = 0.0;
    cfg.n_paths = n_paths;
    cfg.seed = MC_SEED;
    return estimate(policy, cfg);
}

// Upper bound for the upward bias of the discretely monitored mean exit time
// of a band of half-width z_bar: both walls move out by ~0.5826 sigma sqrt(dt)
// (the one-step overshoot constant), padded by 25%.
double exit_bias_bound(double z_bar, double sigma, double dt) {
    double shifted = z_bar + 0.5826 * sigma * std::sqrt(dt);
    return 1.25 * (shifted * shifted - z_bar * z_bar) / (sigma * sigma);
}

// ----- criterion 1: the no-learning cutoff of the two-urn family -----

Outcome criterion_cutoff() {
    EllsbergParams e = urn(0.0);
    double cutoff = no_learning_cutoff(e);  // warm-up and value under test

    auto t0 = std::chrono::steady_clock::now();
    constexpr int reps = 1000;
    double sink = 0.0;
    for (int i = 0; i < reps; ++i)
        sink += no_learning_cutoff(urn(0.0));
    auto t1 = std::chrono::steady_clock::now();
    double ms_per_solve =
        std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;

    double diff = std::abs(cutoff - 0.0488);
    bool pass = diff <= 5e-4 && ms_per_solve < 1.0 && sink > 0.0;
    return {pass, fmt("cutoff=%.9f vs 0.0488 (|diff|=%.2e <= 5e-4), "
                      "%.4f ms/solve (< 1 ms)",
                      cutoff, diff, ms_per_solve)};
}

// ----- criterion 2: mean sample length, closed form and Monte Carlo -----

Outcome criterion_mean_exit_time() {
    EllsbergParams e = urn(0.04);
    StoppingPolicy policy = make_policy(e.problem());
    double an = analytic_stats(e, 0.0).mean_tau;
    double z_bar = solve_rbar(e).z_bar;

    double diff_a = std::abs(an - 0.61);
    bool pass_a = diff_a <= 0.005;

    // coarse grid, many paths: upward discretization bias allowed for
    SimStats coarse = run_mc(policy, MeasureKind::TrueTheta, 0.0, 100000, 1e-4);
    double bias = exit_bias_bound(z_bar, 1.0, 1e-4);
    bool pass_b = coarse.n_censored == 0 &&
                  coarse.mean_tau >= an - 3.0 * coarse.se_tau &&
                  coarse.mean_tau <= an + bias + 3.0 * coarse.se_tau;

    // fine grid: the bias (~1.8e-3) drops well below three standard errors
    SimStats fine = run_mc(policy, MeasureKind::TrueTheta, 0.0, 20000, 4e-6);
    bool pass_c = fine.n_censored == 0 &&
                  std::abs(fine.mean_tau - an) <= 3.0 * fine.se_tau;

    bool pass = pass_a && pass_b && pass_c;
    return {pass,
            fmt("analytic=%.6f vs 0.61 (|diff|=%.1e <= 5e-3); "
                "mc dt=1e-4 n=1e5: %.6f in [%.6f, %.6f]; "
                "mc dt=4e-6 n=2e4: %.6f +- %.6f (3se band around analytic)",
                an, diff_a, coarse.mean_tau, an - 3.0 * coarse.se_tau,
                an + bias + 3.0 * coarse.se_tau, fine.mean_tau,
                3.0 * fine.se_tau)};
}

// ----- criterion 3: ambiguity shrinks the experimentation region -----

Outcome criterion_robust_inside_bayesian() {
    double min_left = 1e300, min_right = 1e300;
    int solved = 0;
    std::string note;
    const double chats[4] = {0.1, 0.25, 0.5, 1.0};
    const double fracs[5] = {0.06, 0.12, 0.20, 0.28, 0.36};
    for (double ch : chats) {
        BayesianThresholds bb = bayesian_sprt(1.0, 1.0, ch);
        double half_b = bb.rBR - 0.5;
        for (double f : fracs) {
            double d = f * half_b;  // symmetric prior half-width
            Payoffs pay = Payoffs::make(2.0, 1.0, 1.0, 2.0, 0.0);
            ModelParams mp = ModelParams::make(0.0, 1.0, 1.0, ch / 2.0);
            PriorInterval prior = PriorInterval::make(0.5 - d, 0.5 + d);
            try {
                CaseBThresholds rt = solve_case_b(pay, prior, mp);
                min_left = std::min(min_left, rt.rtl - bb.rBl);
                min_right = std::min(min_right, bb.rBR - rt.rtR);
                ++solved;
            } catch (const solver_error& ex) {
                if (note.empty())
                    note = fmt(" [unsolved at c_hat=%g width=%g: %s]", ch,
                                2.0 * d, ex.what());
            }
        }
    }
    bool pass = solved == 20 && min_left > 1e-6 && min_right > 1e-6;
    return {pass, fmt("20-point grid: %d solved, min margins "
                      "rtl-rBl=%.3e, rBR-rtR=%.3e (> 1e-6)%s",
                      solved, min_left, min_right, note.c_str())};
}

// ----- criterion 4: singleton prior reduces to the classical thresholds -----

Outcome criterion_singleton_reduction() {
    double max_diff = 0.0;
    int solved = 0;
    std::string note;
    const double pairs[4][2] = {{1.0, 1.0}, {2.0, 0.7}, {0.5, 1.5}, {3.0, 1.0}};
    const double chats[5] = {0.1, 0.25, 0.5, 1.0, 2.0};
    for (const double* ab : pairs) {
        for (double ch : chats) {
            double a = ab[0], b = ab[1];
            BayesianThresholds bb = bayesian_sprt(a, b, ch);
            double m = 0.45 * bb.rBl + 0.55 * bb.rBR;  // strictly inside
            Payoffs pay = Payoffs::make(a + b, b, a, a + b, 0.0);
            ModelParams mp = ModelParams::make(0.0, 1.0, 1.0, ch / 2.0);
            PriorInterval prior = PriorInterval::make(m, m);
            try {
                CaseBThresholds rt = solve_case_b(pay, prior, mp);
                max_diff = std::max({max_diff, std::abs(rt.rtl - bb.rBl),
                                     std::abs(rt.rtR - bb.rBR)});
                ++solved;
            } catch (const solver_error& ex) {
                if (note.empty())
                    note = fmt(" [unsolved at a=%g b=%g c_hat=%g: %s]", a, b,
                               ch, ex.what());
            }
        }
    }
    bool pass = solved == 20 && max_diff <= 1e-8;
    return {pass,
            fmt("20-point grid: %d solved, max |shooting - closed form| "
                "= %.3e (<= 1e-8)%s",
                solved, max_diff, note.c_str())};
}

// ----- criterion 5: verification of the closed-form value function -----

struct Rand {
    Pcg64 g;
    explicit Rand(std::uint64_t stream) : g(20260814, stream) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * g.next_double(); }
};

struct VfTally {
    int scenarios = 0;
    long grid_points = 0;
    long grid_fail = 0;
    int contact_checks = 0;
    int contact_fail = 0;
    long hjb_points = 0;
    long hjb_fail = 0;
    double max_hjb = 0.0;
    double max_v0_gap = 0.0;  // two-urn scenarios only
    std::string note;
};

void verify_value(const Problem& prob, const Thresholds& th, VfTally& tally) {
    ValueFunction vf = build_value_function(prob, th);
    StoppingPolicy policy{prob, th};
    ++tally.scenarios;

    double ts = default_horizon(policy) / 50.0;
    const double t_grid[4] = {0.0, 0.3 * ts, 0.6 * ts, ts};
    RegionReport rep0 = region_report(policy, 0.0);
    double zlo = rep0.z_breaks.front(), zhi = rep0.z_breaks.back();
    double span = std::max(1.0, zhi - zlo);
    double slope = boundary_slope(prob.model);

    // dominance v >= stopping reward on a 4 x 250 (t, z) grid tracking the
    // drifting region layout
    for (double t : t_grid) {
        for (int i = 0; i < 250; ++i) {
            double z = zlo - 0.75 * span + slope * t +
                       (zhi - zlo + 1.5 * span) * i / 249.0;
            ++tally.grid_points;
            double v = evaluate(vf, t, z);
            double x = immediate_payoff(t, z, prob.payoffs, prob.prior,
                                        prob.model);
            if (!(v >= x - 1e-9)) ++tally.grid_fail;
        }
    }

    // first-order contact at every boundary of two time slices
    for (double t : {0.0, ts}) {
        ++tally.contact_checks;
        if (!check_smooth_contact(vf, t, 1e-6).ok()) ++tally.contact_fail;
    }

    // continuation equation in the interior of every bounded continuation band
    for (double t : {0.0, ts}) {
        RegionReport rep = region_report(policy, t);
        double z_sw = z_tilde(th.ind, t, prob.prior, prob.model);
        for (std::size_t i = 0; i + 1 < rep.regions.size(); ++i) {
            if (i == 0 || rep.regions[i] != Region::Continue) continue;
            double lo = rep.z_breaks[i - 1], hi = rep.z_breaks[i];
            double margin = std::max(0.06 * (hi - lo), 4e-3);
            for (int k = 0; k < 7; ++k) {
                double z = lo + margin + (hi - lo - 2.0 * margin) * k / 6.0;
                // the worst-case drift flips across this trajectory and the
                // value has a kink there, so a pointwise residual is
                // undefined; skip the switch itself
                if (std::abs(z - z_sw) < std::max(0.01 * (hi - lo), 1e-3))
                    continue;
                ++tally.hjb_points;
                double res = std::abs(hjb_residual(vf, t, z));
                tally.max_hjb = std::max(tally.max_hjb, res);
                if (!(res < 1e-4)) ++tally.hjb_fail;
            }
        }
    }
}

bool band_widths_ok(const StoppingPolicy& policy) {
    RegionReport rep = region_report(policy, 0.0);
    for (std::size_t i = 0; i + 1 < rep.regions.size(); ++i)
        if (i > 0 && rep.regions[i] == Region::Continue &&
            rep.z_breaks[i] - rep.z_breaks[i - 1] < 0.05)
            return false;
    return true;
}

Outcome criterion_value_function() {
    VfTally tally;

    // ten random two-urn scenarios (single continuation band, live outside
    // option priced by the closed form)
    Rand r1(1);
    for (int k = 0; k < 10; ++k) {
        EllsbergParams e;
        Thresholds th;
        bool found = false;
        for (int tries = 0; tries < 500 && !found; ++tries) {
            double alpha = r1.uniform(0.06, 0.45);
            double sigma = r1.uniform(0.5, 2.0);
            double ch = r1.uniform(0.08, 0.8);
            double c = ch * (2.0 * alpha) * (2.0 * alpha) / (2.0 * sigma * sigma);
            EllsbergParams base = EllsbergParams::make(alpha, 0.0, c, sigma);
            double eps = r1.uniform(0.1, 0.85) * no_learning_cutoff(base);
            if (!(eps > 0.0)) continue;
            e = EllsbergParams::make(alpha, eps, c, sigma);
            th = classify(e.problem());
            if (th.case_tag != CaseTag::CaseAII) continue;
            if (!band_widths_ok(StoppingPolicy{e.problem(), th})) continue;
            found = true;
        }
        if (!found) return {false, "could not draw a two-urn scenario"};
        verify_value(e.problem(), th, tally);
        ValueFunction vf = build_value_function(e.problem(), th);
        tally.max_v0_gap = std::max(
            tally.max_v0_gap, std::abs(evaluate(vf, 0.0, 0.0) -
                                       ellsberg_value0(e)));
    }

    // ten random symmetric problems with an interior outside-option band
    Rand r2(2);
    for (int k = 0; k < 10; ++k) {
        bool found = false;
        for (int tries = 0; tries < 500 && !found; ++tries) {
            double L = r2.uniform(0.0, 1.0);
            double H = L + r2.uniform(0.6, 2.5);
            double sigma = r2.uniform(0.6, 1.6);
            double th1 = r2.uniform(0.7, 1.8);
            double ch = r2.uniform(0.04, 0.4);
            double c = ch * th1 * th1 / (2.0 * sigma * sigma);
            double lo = r2.uniform(0.15, 0.55);
            double hi = lo + r2.uniform(0.03, 0.25);
            if (hi >= 0.85) continue;
            ModelParams mp = ModelParams::make(0.0, th1, sigma, c);
            PriorInterval prior = PriorInterval::make(lo, hi);
            Payoffs probe = Payoffs::make(H, L, L, H, 0.0);
            CriticalU2 crit = critical_u2(probe, prior, mp);
            double u2 = crit.u2_dstar +
                        r2.uniform(0.08, 0.6) * (H - crit.u2_dstar);
            if (!(u2 > crit.u2_dstar && u2 < H)) continue;
            Problem prob{mp, prior, Payoffs::make(H, L, L, H, u2)};
            Thresholds th;
            try {
                th = classify(prob);
            } catch (const solver_error&) {
                continue;
            }
            if (th.case_tag != CaseTag::CaseAI) continue;
            if (!band_widths_ok(StoppingPolicy{prob, th})) continue;
            verify_value(prob, th, tally);
            found = true;
        }
        if (!found) return {false, "could not draw a banded scenario"};
    }

    // ten random problems with a dominated outside option
    Rand r3(3);
    for (int k = 0; k < 10; ++k) {
        bool found = false;
        for (int tries = 0; tries < 500 && !found; ++tries) {
            double a = r3.uniform(0.4, 2.6);
            double b = r3.uniform(0.4, 2.6);
            double ch = r3.uniform(0.08, 1.2);
            BayesianThresholds bb = bayesian_sprt(a, b, ch);
            double center = bb.rBl + r3.uniform(0.35, 0.65) * (bb.rBR - bb.rBl);
            double half = r3.uniform(0.02, 0.12) * (bb.rBR - bb.rBl);
            double lo = center - half, hi = center + half;
            if (lo <= 0.02 || hi >= 0.98) continue;
            ModelParams mp = ModelParams::make(0.0, 1.0, 1.0, ch / 2.0);
            Problem prob{mp, PriorInterval::make(lo, hi),
                         Payoffs::make(a + b, b, a, a + b, 0.0)};
            Thresholds th;
            try {
                th = classify(prob);
            } catch (const solver_error&) {
                continue;
            }
            if (th.case_tag != CaseTag::CaseB) continue;
            if (!band_widths_ok(StoppingPolicy{prob, th})) continue;
            verify_value(prob, th, tally);
            found = true;
        }
        if (!found) return {false, "could not draw a dominated-option scenario"};
    }

    bool pass = tally.scenarios == 30 && tally.grid_fail == 0 &&
                tally.contact_fail == 0 && tally.hjb_fail == 0 &&
                tally.max_v0_gap <= 1e-10;
    return {pass,
            fmt("%d scenarios: dominance %ld/%ld grid points ok, smooth "
                "contact %d/%d slices ok, max |pde residual| = %.2e "
                "(< 1e-4) over %ld interior points, two-urn value-at-origin "
                "gap = %.2e (<= 1e-10)",
                tally.scenarios, tally.grid_points - tally.grid_fail,
                tally.grid_points, tally.contact_checks - tally.contact_fail,
                tally.contact_checks, tally.max_hjb, tally.hjb_points,
                tally.max_v0_gap)};
}

// ----- criterion 6: comparative statics in the ambiguity width -----

Outcome criterion_comparative_statics() {
    EllsbergParams e0 = urn(0.0);
    double cutoff = no_learning_cutoff(e0);

    bool z_increasing = true, gap_decreasing = true, gap_positive = true;
    double prev_z = -1e300, prev_gap = 1e300;
    const int K = 12;
    for (int k = 0; k < K; ++k) {
        EllsbergParams e = urn(k * cutoff / K);
        double z = solve_rbar(e).z_bar;
        double gap = ellsberg_value0(e) - 0.5;
        if (!(z > prev_z)) z_increasing = false;
        if (!(gap < prev_gap)) gap_decreasing = false;
        if (!(gap > 0.0)) gap_positive = false;
        prev_z = z;
        prev_gap = gap;
    }

    double z_at_0 = solve_rbar(e0).z_bar;
    double anchor_diff = std::abs(z_at_0 - 0.778785237948);

    // the learning premium vanishes linearly as the width reaches the cutoff
    double end_gap = ellsberg_value0(urn(cutoff - 5e-6)) - 0.5;

    bool pass = z_increasing && gap_decreasing && gap_positive &&
                anchor_diff <= 1e-9 && end_gap > 0.0 && end_gap <= 1e-6;
    return {pass,
            fmt("12-point width grid on [0, cutoff): boundary %s, premium %s "
                "and positive; boundary(0)=%.12f (|diff|=%.1e); premium at "
                "cutoff-5e-6 = %.2e (<= 1e-6)",
                z_increasing ? "increasing" : "NOT increasing",
                gap_decreasing ? "decreasing" : "NOT decreasing", z_at_0,
                anchor_diff, end_gap)};
}

// ----- criterion 7: the outside option is never exercised while learning --

Outcome criterion_no_outside_stop() {
    EllsbergParams e = urn(0.04);
    StoppingPolicy policy = make_policy(e.problem());
    if (decide(policy, 0.0, 0.0).stop)
        return {false, "policy stops immediately; nothing to simulate"};

    SimStats flat = run_mc(policy, MeasureKind::TrueTheta, 0.0, 100000, 1e-3);
    SimStats adv = run_mc(policy, MeasureKind::WorstCase, 0.0, 20000, 1e-3);
    bool pass = flat.n_censored == 0 && flat.freq_a2 == 0.0 &&
                adv.n_censored == 0 && adv.freq_a2 == 0.0;
    return {pass,
            fmt("1e5 paths (fixed drift) + 2e4 paths (adversarial drift): "
                "outside-option stop frequency %g and %g, censored %llu and "
                "%llu (all must be 0)",
                flat.freq_a2, adv.freq_a2,
                static_cast<unsigned long long>(flat.n_censored),
                static_cast<unsigned long long>(adv.n_censored))};
}

// ----- criterion 8: probability of betting on the true color -----

Outcome criterion_correct_decision() {
    EllsbergParams e = urn(0.04);
    StoppingPolicy policy = make_policy(e.problem());
    AnalyticStats an = analytic_stats(e, 0.125);

    SimStats mc = run_mc(policy, MeasureKind::TrueTheta, 0.125, 100000, 1e-4);
    bool defined = mc.correct_defined && mc.n_censored == 0;
    double diff = std::abs(mc.correct_rate - an.correct_prob);
    bool pass_mc = defined && diff <= 3.0 * mc.se_correct;

    bool increasing = true;
    double prev = -1.0;
    for (double eps : {0.0, 0.01, 0.02, 0.03, 0.04, 0.045}) {
        double pc = analytic_stats(urn(eps), 0.125).correct_prob;
        if (!(pc > prev)) increasing = false;
        prev = pc;
    }

    bool pass = pass_mc && increasing;
    return {pass,
            fmt("mc n=1e5 dt=1e-4: %.6f vs analytic %.6f (|diff|=%.2e <= "
                "3se=%.2e); analytic hit rate %s in the ambiguity width",
                mc.correct_rate, an.correct_prob, diff, 3.0 * mc.se_correct,
                increasing ? "increasing" : "NOT increasing")};
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "no-learning cutoff of the two-urn family", criterion_cutoff},
        {2, "mean sample length, closed form and simulation",
         criterion_mean_exit_time},
        {3, "robust thresholds sit strictly inside the single-prior ones",
         criterion_robust_inside_bayesian},
        {4, "singleton prior reduces to the classical thresholds",
         criterion_singleton_reduction},
        {5, "value function: dominance, smooth contact, continuation equation",
         criterion_value_function},
        {6, "comparative statics in the ambiguity width",
         criterion_comparative_statics},
        {7, "the outside option is never exercised while learning",
         criterion_no_outside_stop},
        {8, "probability of betting on the true color",
         criterion_correct_decision},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& ex) {
            out = {false, fmt("unexpected exception: %s", ex.what())};
        }
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();
        std::printf("[%s] criterion %d: %s — %s (%.2fs)\n",
                    out.pass ? "PASS" : "FAIL", c.number, c.name,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }

    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures,
                criteria.size());
    return 1;
}

#include "rstop/core_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rstop/root_find.hpp"

namespace rstop {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

ModelParams ModelParams::make(double theta0, double theta1, double sigma, double c) {
    require(finite(theta0) && finite(theta1) && finite(sigma) && finite(c),
            "model parameters must be finite");
    require(sigma > 0.0, "sigma must be positive");
    require(theta1 > theta0, "theta1 must exceed theta0");
    require(c > 0.0, "observation cost must be positive");
    return ModelParams{theta0, theta1, sigma, c};
}

PriorInterval PriorInterval::make(double m_lo, double m_hi) {
    require(finite(m_lo) && finite(m_hi), "prior endpoints must be finite");
    require(m_lo > 0.0 && m_hi < 1.0, "prior endpoints must lie strictly inside (0,1)");
    require(m_lo <= m_hi, "prior interval endpoints out of order");
    return PriorInterval{m_lo, m_hi};
}

Payoffs Payoffs::make(double u00, double u01, double u10, double u11, double u2) {
    require(finite(u00) && finite(u01) && finite(u10) && finite(u11) && finite(u2),
            "payoffs must be finite");
    require(u00 >= 0.0 && u01 >= 0.0 && u10 >= 0.0 && u11 >= 0.0 && u2 >= 0.0,
            "payoffs must be nonnegative");
    require(u00 > u10, "matching payoff u00 must exceed mismatched u10");
    require(u11 > u01, "matching payoff u11 must exceed mismatched u01");
    return Payoffs{u00, u01, u10, u11, u2};
}

// ---------- posterior statistics ----------

double likelihood_ratio(double t, double z, const ModelParams& p) {
    return std::exp(p.kappa() * z - p.lambda() * t);
}

double posterior(double m0, double t, double z, const ModelParams& p) {
    require(m0 > 0.0 && m0 < 1.0, "prior must lie strictly inside (0,1)");
    // log-odds update keeps the map stable where the ratio form overflows
    return expit(logit(m0) + p.kappa() * z - p.lambda() * t);
}

PosteriorPair posterior_pair(const PriorInterval& prior, double t, double z,
                             const ModelParams& p) {
    double w = p.kappa() * z - p.lambda() * t;
    return PosteriorPair{expit(logit(prior.m_lo) + w), expit(logit(prior.m_hi) + w)};
}

double boundary_slope(const ModelParams& p) {
    return 0.5 * (p.theta0 + p.theta1);
}

double boundary_intercept_hi(double r, const PriorInterval& prior,
                             const ModelParams& p) {
    return (logit(r) - logit(prior.m_hi)) / p.kappa();
}

double boundary_intercept_lo(double r, const PriorInterval& prior,
                             const ModelParams& p) {
    return (logit(r) - logit(prior.m_lo)) / p.kappa();
}

double z_of_posterior_hi(double r, double t, const PriorInterval& prior,
                         const ModelParams& p) {
    return boundary_slope(p) * t + boundary_intercept_hi(r, prior, p);
}

double z_of_posterior_lo(double r, double t, const PriorInterval& prior,
                         const ModelParams& p) {
    return boundary_slope(p) * t + boundary_intercept_lo(r, prior, p);
}

BoundaryZ boundary_maps(double r, double t, const PriorInterval& prior,
                        const ModelParams& p) {
    return BoundaryZ{z_of_posterior_hi(r, t, prior, p),
                     z_of_posterior_lo(r, t, prior, p)};
}

// ---------- indifference ----------

IndifferencePoint indifference(const PriorInterval& prior, const Payoffs& u) {
    double gap = prior.logit_gap();
    if (u.symmetric()) {
        // equal stakes make the posteriors mirror images around 1/2
        double x = -0.5 * gap;
        return IndifferencePoint{expit(x), expit(x + gap)};
    }
    // worst_a1 rises and worst_a0 falls along the shared log-odds coordinate,
    // so the difference below has exactly one zero
    auto diff = [&](double x) {
        return u.worst_a1(expit(x)) - u.worst_a0(expit(x + gap));
    };
    auto ddiff = [&](double x) {
        double mlo = expit(x);
        double mhi = expit(x + gap);
        return (u.u11 - u.u10) * mlo * (1.0 - mlo) +
               (u.u00 - u.u01) * mhi * (1.0 - mhi);
    };
    double x = newton_bisect(diff, ddiff, -60.0, 60.0, RootOptions{},
                             "indifference point");
    return IndifferencePoint{expit(x), expit(x + gap)};
}

double z_tilde(const IndifferencePoint& ind, double t, const PriorInterval& prior,
               const ModelParams& p) {
    return z_of_posterior_hi(ind.pi_hi, t, prior, p);
}

double worst_case_drift(const Problem& prob, const IndifferencePoint& ind,
                        double t, double z) {
    double zt = z_tilde(ind, t, prob.prior, prob.model);
    PosteriorPair m = posterior_pair(prob.prior, t, z, prob.model);
    return prob.model.drift_given(z < zt ? m.m_hi_t : m.m_lo_t);
}

// ---------- threshold transforms ----------

namespace {

double checked_prob(double r, const char* who) {
    if (!(r > 0.0) || !(r < 1.0))
        throw std::domain_error(std::string(who) +
                                ": argument must lie strictly inside (0,1)");
    return clamp_prob(r);
}

} // namespace

double l(double r) {
    r = checked_prob(r, "l");
    return 2.0 * std::log(r / (1.0 - r)) - 1.0 / r + 1.0 / (1.0 - r);
}

double l_tilde(double r) {
    r = checked_prob(r, "l_tilde");
    return std::log(r / (1.0 - r)) + r / (1.0 - r);
}

double l_hat(double r) {
    r = checked_prob(r, "l_hat");
    return (2.0 * r - 1.0) * std::log(r / (1.0 - r));
}

double l_prime(double r) {
    r = checked_prob(r, "l_prime");
    double q = r * (1.0 - r);
    return 1.0 / (q * q);
}

double invert_l(double target) {
    return expit(logodds::invert_l(target));
}

namespace logodds {

double l(double x) { return 2.0 * (x + std::sinh(x)); }

double l_tilde(double x) { return x + std::exp(x); }

double l_hat(double x) { return x * std::tanh(0.5 * x); }

double invert_l(double target) {
    if (!std::isfinite(target)) throw std::domain_error("invert_l: target not finite");
    // x + sinh(x) = target/2 is strictly increasing with derivative >= 2
    double half = 0.5 * target;
    if (half == 0.0) return 0.0;
    double mag = std::min(std::abs(half), std::asinh(std::abs(half)) + 1.0);
    double lo = half > 0.0 ? 0.0 : -mag;
    double hi = half > 0.0 ? mag : 0.0;
    auto f = [half](double x) { return x + std::sinh(x) - half; };
    auto df = [](double x) { return 1.0 + std::cosh(x); };
    RootOptions opt{1e-14, 1e-12 * std::max(1.0, std::abs(half)), 200};
    return newton_bisect(f, df, lo, hi, opt, "invert_l");
}

} // namespace logodds

} // namespace rstop

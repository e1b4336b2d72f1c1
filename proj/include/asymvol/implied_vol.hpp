#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "asymvol/black_scholes.hpp"
#include "asymvol/coefficients.hpp"
#include "asymvol/expansions.hpp"

// Regime-specific implied-volatility approximations. Each wing regime maps
// its price ratio to the small parameter lambda = -1/ln(ratio), solves the
// master inversion equation to fifth order, and rescales v back to total
// variance. The ATM path inverts the erf closed form by power series.
// newton_refine polishes any seed against exact Black-Scholes.

namespace asymvol {

// Parameter dictionary of one regime's master equation instance.
struct RegimeParams {
    enum class Scale { half_x_sq, eight_over_v }; // theta^2 = (x^2/2) v  or  8 / v
    double beta = 0.0;
    double gamma = 0.0;
    double alpha1 = 0.0;
    double lambda = 0.0;
    Scale scale = Scale::half_x_sq;
};

struct VolSolution {
    double sigma = 0.0;
    double theta_sq = 0.0;
    ExpansionRegime regime = ExpansionRegime::short_maturity;
    double lambda = 0.0;
    int order_used = 0;
    bool refined = false;
    double residual = 0.0;  // bs_call_price(sigma) - observed price
    int iterations = 0;
    double seed_sigma = 0.0; // unrefined expansion seed
    double last_step = 0.0;  // final sigma increment of the refinement loop
};

// Large-strike fixed-point failure; carries the last iterate.
struct FixedPointError : std::runtime_error {
    double last_theta;
    FixedPointError(const std::string& msg, double theta)
        : std::runtime_error(msg), last_theta(theta) {}
};

inline double lambda_of_ratio(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("ratio outside no-arbitrage open band");
    return -1.0 / std::log(r);
}

// Six-term solution of the master equation, exact through lambda^3.
inline double invert_fifth_order(double lambda, double beta, double gamma, double alpha1) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::domain_error("lambda must lie in (0,1) for the asymptotic ordering");
    const double L = std::log(lambda);
    const double l2 = lambda * lambda;
    const double l3 = l2 * lambda;
    return lambda - beta * l2 * L + gamma * l2 + beta * beta * l3 * L * L +
           (beta * beta - 2.0 * beta * gamma) * l3 * L +
           (gamma * gamma - beta * gamma - alpha1) * l3;
}

namespace detail {

inline double tv_ratio(const MarketQuote& q) {
    return (*q.call_price - intrinsic_value(q)) / q.spot;
}

inline double cc_ratio(const MarketQuote& q) { return (q.spot - *q.call_price) / q.spot; }

// lambda extended to ratios that round onto the band edge in doubles: a
// ratio at 1 means the regime is infinitely far away, at 0 infinitely deep.
inline double safe_lambda(double r) {
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    if (r <= 0.0) return 0.0;
    return -1.0 / std::log(r);
}

inline RegimeParams short_expiry_params(double x, double lambda) {
    RegimeParams p;
    p.beta = 1.5;
    p.gamma = std::log(4.0 * std::sqrt(std::numbers::pi)) - 0.5 * x - std::log(std::abs(x));
    p.alpha1 = -1.5 - x * x / 16.0;
    p.lambda = lambda;
    p.scale = RegimeParams::Scale::half_x_sq;
    return p;
}

inline RegimeParams large_expiry_params(double x, double lambda) {
    RegimeParams p;
    p.beta = 0.5;
    p.gamma = 0.5 * std::log(std::numbers::pi) - 0.5 * x;
    p.alpha1 = -0.5 - x * x / 16.0;
    p.lambda = lambda;
    p.scale = RegimeParams::Scale::eight_over_v;
    return p;
}

// theta-dependent dictionary of the extreme-strike regime; the e^{-theta^2/8}
// factor of the forward series lands in gamma, and alpha_1 = -(1/2) b_1(theta^2/4).
inline RegimeParams large_strike_params(double x, double theta, double lambda) {
    RegimeParams p;
    p.beta = 1.0;
    p.gamma = std::log(2.0 * std::sqrt(2.0 * std::numbers::pi)) - 0.5 * x - std::log(theta) +
              theta * theta / 8.0;
    p.alpha1 = -1.5 + theta * theta / 8.0;
    p.lambda = lambda;
    p.scale = RegimeParams::Scale::half_x_sq;
    return p;
}

inline void require_asymptotic(double lambda) {
    if (!(lambda < 1.0)) throw std::domain_error("outside asymptotic regime: lambda >= 1");
}

} // namespace detail

inline VolSolution implied_vol_short_expiry(const MarketQuote& q) {
    check_invertible_quote(q);
    const double x = std::log(q.strike / q.spot);
    if (x == 0.0) throw std::domain_error("at-the-money quote: use the ATM path");
    const double lambda = lambda_of_ratio(detail::tv_ratio(q));
    detail::require_asymptotic(lambda);
    const auto p = detail::short_expiry_params(x, lambda);
    const double v = invert_fifth_order(lambda, p.beta, p.gamma, p.alpha1);
    const double theta_sq = 0.5 * x * x * v;
    VolSolution s;
    s.sigma = std::sqrt(theta_sq / q.maturity);
    s.theta_sq = theta_sq;
    s.regime = ExpansionRegime::short_maturity;
    s.lambda = lambda;
    s.order_used = 3;
    s.residual = bs_call_price(q, s.sigma) - *q.call_price;
    s.seed_sigma = s.sigma;
    return s;
}

inline VolSolution implied_vol_large_expiry(const MarketQuote& q) {
    check_invertible_quote(q);
    const double x = std::log(q.strike / q.spot);
    const double lambda = lambda_of_ratio(detail::cc_ratio(q));
    detail::require_asymptotic(lambda);
    const auto p = detail::large_expiry_params(x, lambda);
    // Expansion of 8/v through lambda^2 (reciprocal of the fifth-order v).
    const double L = std::log(lambda);
    const double theta_sq =
        (8.0 / lambda) *
        (1.0 + 0.5 * lambda * L - p.gamma * lambda - 0.25 * lambda * lambda * L +
         (0.5 * p.gamma + p.alpha1) * lambda * lambda);
    VolSolution s;
    s.sigma = std::sqrt(theta_sq / q.maturity);
    s.theta_sq = theta_sq;
    s.regime = ExpansionRegime::large_maturity;
    s.lambda = lambda;
    s.order_used = 2;
    s.residual = bs_call_price(q, s.sigma) - *q.call_price;
    s.seed_sigma = s.sigma;
    return s;
}

inline VolSolution implied_vol_large_strike(const MarketQuote& q, double theta_seed) {
    check_invertible_quote(q);
    const double x = std::log(q.strike / q.spot);
    if (x == 0.0) throw std::domain_error("at-the-money quote: use the ATM path");
    if (!(theta_seed > 0.0)) throw std::domain_error("theta seed must be positive");
    const double lambda = lambda_of_ratio(detail::tv_ratio(q));
    detail::require_asymptotic(lambda);

    double theta = theta_seed;
    int iterations = 0;
    for (;;) {
        const auto p = detail::large_strike_params(x, theta, lambda);
        const double v = invert_fifth_order(lambda, p.beta, p.gamma, p.alpha1);
        const double theta_next = std::sqrt(0.5 * x * x * v);
        ++iterations;
        const bool converged = std::abs(theta_next - theta) <= 1e-12 * theta;
        theta = theta_next;
        if (converged) break;
        if (iterations >= 50)
            throw FixedPointError("extreme-strike fixed point did not converge in 50 iterations",
                                  theta);
    }
    VolSolution s;
    s.theta_sq = theta * theta;
    s.sigma = theta / std::sqrt(q.maturity);
    s.regime = ExpansionRegime::large_strike;
    s.lambda = lambda;
    s.order_used = 3;
    s.residual = bs_call_price(q, s.sigma) - *q.call_price;
    s.iterations = iterations;
    s.seed_sigma = s.sigma;
    return s;
}

// Seedless overload: the short-expiry formula provides the starting theta.
inline VolSolution implied_vol_large_strike(const MarketQuote& q) {
    check_invertible_quote(q);
    const double x = std::log(q.strike / q.spot);
    if (x == 0.0) throw std::domain_error("at-the-money quote: use the ATM path");
    const double lambda = lambda_of_ratio(detail::tv_ratio(q));
    detail::require_asymptotic(lambda);
    const auto p0 = detail::short_expiry_params(x, lambda);
    const double v0 = invert_fifth_order(lambda, p0.beta, p0.gamma, p0.alpha1);
    return implied_vol_large_strike(q, std::sqrt(0.5 * x * x * std::max(v0, lambda)));
}

// sigma from C/S at the money: inverse-erf power series with n_terms eta terms.
inline double atm_sigma_from_ratio(double call_ratio, double maturity, int n_terms) {
    if (!(call_ratio > 0.0 && call_ratio < 1.0))
        throw std::domain_error("call ratio outside (0,1)");
    if (!(maturity > 0.0)) throw std::domain_error("maturity must be positive");
    if (n_terms < 1) throw std::domain_error("n_terms must be at least 1");
    const auto eta = coeff::eta_doubles(n_terms);
    const double y2 = call_ratio * call_ratio;
    double sum = 0.0, factor = 1.0; // factor = (pi/4)^k y^{2k}
    for (int k = 0; k < n_terms; ++k) {
        sum += factor * eta[k] / (2 * k + 1);
        factor *= 0.25 * std::numbers::pi * y2;
    }
    return std::sqrt(2.0 * std::numbers::pi / maturity) * call_ratio * sum;
}

inline VolSolution implied_vol_atm(const MarketQuote& q, int n_terms) {
    check_invertible_quote(q);
    if (std::abs(q.strike - q.spot) > 1e-12 * q.spot)
        throw std::domain_error("strike differs from spot: use a wing expansion");
    const double ratio = *q.call_price / q.spot;
    if (!(ratio < 1.0)) throw std::domain_error("call ratio outside (0,1)");
    VolSolution s;
    s.sigma = atm_sigma_from_ratio(ratio, q.maturity, n_terms);
    s.theta_sq = s.sigma * s.sigma * q.maturity;
    s.regime = ExpansionRegime::atm_small;
    s.lambda = lambda_of_ratio(ratio);
    s.order_used = n_terms;
    s.residual = bs_call_price(q, s.sigma) - *q.call_price;
    s.seed_sigma = s.sigma;
    return s;
}

namespace detail {

// Diagnostic labeling used by refine/auto: ATM override, else the side whose
// small parameter is smaller. Always returns a label, even out of regime.
inline std::pair<ExpansionRegime, double> route_of(const MarketQuote& q) {
    const double x = std::log(q.strike / q.spot);
    const double l_tv = safe_lambda(tv_ratio(q));
    if (std::abs(x) <= 1e-8) return {ExpansionRegime::atm_small, l_tv};
    const double l_cc = safe_lambda(cc_ratio(q));
    if (l_tv <= l_cc) return {ExpansionRegime::short_maturity, l_tv};
    return {ExpansionRegime::large_maturity, l_cc};
}

} // namespace detail

// Safeguarded Newton against exact Black-Scholes, in time-value terms so the
// objective keeps relative accuracy in the wings. A sign bracket is
// maintained throughout; steps leaving it fall back to bisection.
inline VolSolution newton_refine(const MarketQuote& q, double sigma_seed, double tol) {
    check_invertible_quote(q);
    if (!(sigma_seed > 0.0)) throw std::domain_error("sigma seed must be positive");
    if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");

    const double tv_target = *q.call_price - intrinsic_value(q);
    const auto f = [&](double sigma) { return time_value(q, sigma) - tv_target; };

    double lo = 0.0; // f(0) = -tv_target < 0
    double hi = sigma_seed;
    double f_hi = f(hi);
    int expansions = 0;
    while (f_hi < 0.0) {
        lo = hi;
        hi *= 2.0;
        f_hi = f(hi);
        if (++expansions > 200) throw std::runtime_error("bracket expansion failed");
    }

    VolSolution s;
    s.seed_sigma = sigma_seed;
    s.refined = true;

    // |f| <= tol alone cannot stop the loop: in the wings the objective is
    // exponentially flat, so a seed can satisfy any price tolerance while
    // sigma is still far off. The Newton step estimates the remaining sigma
    // error directly; convergence additionally requires it to collapse.
    double sigma = std::clamp(sigma_seed, lo, hi);
    double f_cur = (sigma == hi) ? f_hi : f(sigma);
    for (int iter = 0; iter < 100 && f_cur != 0.0; ++iter) {
        if (f_cur < 0.0) lo = sigma; else hi = sigma;
        double next = 0.0;
        const double vg = vega(q, sigma);
        bool use_newton = vg > 0.0 && std::isfinite(vg);
        if (use_newton) {
            next = sigma - f_cur / vg;
            if (std::abs(f_cur) <= tol && std::abs(next - sigma) <= 1e-15 * (1.0 + sigma)) {
                s.last_step = std::abs(next - sigma);
                break; // converged: residual within tol and sigma resolved
            }
            use_newton = std::isfinite(next) && next > lo && next < hi;
        }
        if (!use_newton) next = 0.5 * (lo + hi);
        s.last_step = std::abs(next - sigma);
        sigma = next;
        f_cur = f(sigma);
        ++s.iterations;
        if (s.last_step <= 1e-15 * (1.0 + sigma)) break; // bisection floor
    }

    s.sigma = sigma;
    s.theta_sq = sigma * sigma * q.maturity;
    s.residual = f_cur; // equals bs_call_price(sigma) - price exactly
    const auto [regime, lambda] = detail::route_of(q);
    s.regime = regime;
    s.lambda = lambda;
    return s;
}

inline VolSolution newton_refine(const MarketQuote& q, double sigma_seed) {
    check_invertible_quote(q);
    return newton_refine(q, sigma_seed, 1e-12 * q.spot);
}

// Regime dispatch: ATM series when |x| <= 1e-8 (the wing dictionaries blow up
// through ln|x| there), otherwise the side with the smaller lambda. Quotes
// where both ratios exceed e^{-1} (mid band, theta near 1) have no admissible
// wing expansion; the ATM series on C/S supplies the Newton seed instead.
// The refined solution keeps the seed's diagnostics.
inline VolSolution implied_vol_auto(const MarketQuote& q, bool refine = true) {
    check_invertible_quote(q);
    const double x = std::log(q.strike / q.spot);
    const double l_tv = detail::safe_lambda(detail::tv_ratio(q));

    VolSolution seed;
    if (std::abs(x) <= 1e-8) {
        seed.sigma = atm_sigma_from_ratio(*q.call_price / q.spot, q.maturity, 40);
        seed.regime = ExpansionRegime::atm_small;
        seed.lambda = l_tv;
        seed.order_used = 40;
    } else {
        const double l_cc = detail::safe_lambda(detail::cc_ratio(q));
        if (std::min(l_tv, l_cc) >= 1.0) {
            const double ratio = std::min(*q.call_price / q.spot, 0.95);
            seed.sigma = atm_sigma_from_ratio(ratio, q.maturity, 40);
            seed.regime = ExpansionRegime::atm_small;
            seed.lambda = std::min(l_tv, l_cc);
            seed.order_used = 40;
        } else if (l_tv <= l_cc) {
            seed = implied_vol_short_expiry(q);
        } else {
            seed = implied_vol_large_expiry(q);
        }
    }
    seed.seed_sigma = seed.sigma;
    seed.theta_sq = seed.sigma * seed.sigma * q.maturity;
    if (!refine) {
        seed.residual = bs_call_price(q, seed.sigma) - *q.call_price;
        return seed;
    }

    auto s = newton_refine(q, seed.sigma, 1e-12 * q.spot);
    s.regime = seed.regime;
    s.lambda = seed.lambda;
    s.order_used = seed.order_used;
    s.seed_sigma = seed.sigma;
    return s;
}

} // namespace asymvol

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "asymvol/quadrature.hpp"

// Black-Scholes pricing at r = 0 together with the time-value / covered-call
// decompositions and the integral representation of the time-value used as an
// expansion-free cross-check. Everything is a pure function of its arguments.

namespace asymvol {

struct MarketQuote {
    double spot = 0.0;
    double strike = 0.0;
    double maturity = 0.0;            // years
    std::optional<double> call_price; // absent when pricing forward
};

// Dimensionless coordinates: x = ln(K/S), theta = sigma*sqrt(T).
struct Moneyness {
    double x = 0.0;
    double theta = 0.0;
};

inline double intrinsic_value(const MarketQuote& q) { return std::max(q.spot - q.strike, 0.0); }

inline void check_quote_geometry(const MarketQuote& q) {
    if (!(q.spot > 0.0)) throw std::domain_error("spot must be positive");
    if (!(q.strike > 0.0)) throw std::domain_error("strike must be positive");
    if (!(q.maturity >= 0.0)) throw std::domain_error("maturity must be non-negative");
}

// Closed no-arbitrage band (S-K)_+ <= C <= S; ops that invert require the open band.
inline void check_priced_quote(const MarketQuote& q) {
    check_quote_geometry(q);
    if (!q.call_price) throw std::domain_error("quote carries no call price");
    const double p = *q.call_price;
    if (!(p >= intrinsic_value(q)) || !(p <= q.spot))
        throw std::domain_error("call price outside the no-arbitrage band");
}

// Strict interior of the band plus positive maturity: the preconditions every
// implied-volatility routine shares.
inline void check_invertible_quote(const MarketQuote& q) {
    check_priced_quote(q);
    if (!(*q.call_price > intrinsic_value(q)) || !(*q.call_price < q.spot))
        throw std::domain_error("call price outside the open no-arbitrage band");
    if (!(q.maturity > 0.0)) throw std::domain_error("inversion requires positive maturity");
}

inline Moneyness moneyness(const MarketQuote& q, double sigma) {
    return {std::log(q.strike / q.spot), sigma * std::sqrt(q.maturity)};
}

// N(u) through erfc so that both tails keep relative accuracy.
inline double std_normal_cdf(double u) {
    return 0.5 * std::erfc(-u / std::numbers::sqrt2);
}

inline double normal_pdf(double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

namespace detail {
inline double d_plus(double x, double theta) { return -x / theta + 0.5 * theta; }
inline double d_minus(double x, double theta) { return -x / theta - 0.5 * theta; }
} // namespace detail

inline double bs_call_price(const MarketQuote& q, double sigma) {
    check_quote_geometry(q);
    if (!(sigma >= 0.0)) throw std::domain_error("sigma must be non-negative");
    const auto [x, theta] = moneyness(q, sigma);
    if (theta <= 0.0) return intrinsic_value(q); // exact zero-variance limit
    return q.spot * std_normal_cdf(detail::d_plus(x, theta)) -
           q.strike * std_normal_cdf(detail::d_minus(x, theta));
}

// TV = C - (S-K)_+, evaluated without subtracting the intrinsic value: the
// out-of-the-money side is the call itself, the in-the-money side is the
// same-strike put. Keeps full relative accuracy deep in both wings.
inline double time_value(const MarketQuote& q, double sigma) {
    check_quote_geometry(q);
    if (!(sigma >= 0.0)) throw std::domain_error("sigma must be non-negative");
    const auto [x, theta] = moneyness(q, sigma);
    if (theta <= 0.0) return 0.0;
    double tv;
    if (q.strike >= q.spot) {
        tv = q.spot * std_normal_cdf(detail::d_plus(x, theta)) -
             q.strike * std_normal_cdf(detail::d_minus(x, theta));
    } else {
        tv = q.strike * std_normal_cdf(-detail::d_minus(x, theta)) -
             q.spot * std_normal_cdf(-detail::d_plus(x, theta));
    }
    return std::max(tv, 0.0);
}

// CC = S - C as a sum of positive terms (no cancellation for large theta).
inline double covered_call(const MarketQuote& q, double sigma) {
    check_quote_geometry(q);
    if (!(sigma >= 0.0)) throw std::domain_error("sigma must be non-negative");
    const auto [x, theta] = moneyness(q, sigma);
    if (theta <= 0.0) return q.spot - intrinsic_value(q);
    return q.spot * std_normal_cdf(-detail::d_plus(x, theta)) +
           q.strike * std_normal_cdf(detail::d_minus(x, theta));
}

// At the money C/S = erf(theta/(2*sqrt(2))).
inline double atm_call_closed_form(double theta) {
    if (!(theta >= 0.0)) throw std::domain_error("theta must be non-negative");
    return std::erf(theta / (2.0 * std::numbers::sqrt2));
}

inline double vega(const MarketQuote& q, double sigma) {
    check_quote_geometry(q);
    if (!(q.maturity > 0.0)) throw std::domain_error("vega requires positive maturity");
    if (!(sigma > 0.0)) throw std::domain_error("vega requires positive sigma");
    const auto [x, theta] = moneyness(q, sigma);
    return q.spot * std::sqrt(q.maturity) * normal_pdf(detail::d_plus(x, theta));
}

// I(x,theta) = integral_0^theta exp(-x^2/(2 xi^2)) exp(-xi^2/8) dxi
//            = sqrt(2*pi) * exp(-x/2) * TV/S.
// Substituting u = |x|/xi maps the essential singularity at xi=0 to a Gaussian
// tail; the integrand's peak value is factored out so the quadrature works on
// an O(1) function and the result keeps *relative* accuracy down to the
// underflow threshold.
inline double tv_integral(double x, double theta) {
    if (!(theta >= 0.0)) throw std::domain_error("theta must be non-negative");
    if (theta == 0.0) return 0.0;
    if (x == 0.0) {
        return std::sqrt(2.0 * std::numbers::pi) * std::erf(theta / (2.0 * std::numbers::sqrt2));
    }
    const double ax = std::abs(x);
    const double a = ax / theta;                       // lower limit in u
    const double u_peak = std::sqrt(0.5 * ax);         // maximum of h(u) = -u^2/2 - x^2/(8u^2)
    const double m = std::max(a, u_peak);
    const double h_max = -0.5 * m * m - x * x / (8.0 * m * m);
    // h(b) - h_max <= -(b^2-m^2)/2 + x^2/(8 m^2), so this b makes the tail < 3e-20 relative.
    const double b = std::sqrt(m * m + 90.0 + x * x / (4.0 * m * m));
    const auto scaled = [ax, x, h_max](double u) {
        const double h = -0.5 * u * u - x * x / (8.0 * u * u);
        return std::exp(h - h_max) * ax / (u * u);
    };
    const auto res = quad::integrate(scaled, a, b, 1e-13);
    if (res.value <= 0.0) return 0.0;
    return std::exp(h_max + std::log(res.value));
}

} // namespace asymvol

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "asymvol/coefficients.hpp"

// Forward asymptotic series: TV/S or CC/S from (x, theta) in each regime, to
// caller-chosen order N. These are asymptotic, not convergent, series — the
// _diag variants report the last retained term as a truncation-error
// heuristic, and remainder_scale() gives the theoretical remainder order used
// to normalize measured errors.

namespace asymvol {

enum class ExpansionRegime { short_maturity, large_strike, large_maturity, atm_small, atm_large };

inline constexpr std::string_view to_string(ExpansionRegime r) {
    switch (r) {
    case ExpansionRegime::short_maturity: return "short-maturity";
    case ExpansionRegime::large_strike: return "large-strike";
    case ExpansionRegime::large_maturity: return "large-maturity";
    case ExpansionRegime::atm_small: return "atm-small";
    case ExpansionRegime::atm_large: return "atm-large";
    }
    return "?";
}

inline std::optional<ExpansionRegime> parse_regime(std::string_view s) {
    if (s == "short" || s == "short-maturity") return ExpansionRegime::short_maturity;
    if (s == "large-k" || s == "large-strike") return ExpansionRegime::large_strike;
    if (s == "large-t" || s == "large-maturity") return ExpansionRegime::large_maturity;
    if (s == "atm-small") return ExpansionRegime::atm_small;
    if (s == "atm-large") return ExpansionRegime::atm_large;
    return std::nullopt;
}

struct SeriesEval {
    double value = 0.0;
    double last_term = 0.0; // magnitude of the last retained term
};

namespace detail {
inline void check_wing_args(double x, double theta) {
    if (x == 0.0) throw std::domain_error("x = 0: use the ATM expansion");
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
}
inline void check_order(int n) {
    if (n < 0) throw std::domain_error("order must be non-negative");
}
} // namespace detail

// theta -> 0 at fixed x != 0 (v = 2 theta^2 / x^2):
// TV/S = (|x| e^{x/2} / (4 sqrt(pi))) v^{3/2} e^{-1/v} sum_k ((-1)^k/2^k) a_k(x^2/8) v^k
inline SeriesEval tv_series_small_theta_diag(double x, double theta, int order) {
    detail::check_wing_args(x, theta);
    detail::check_order(order);
    const double v = 2.0 * theta * theta / (x * x);
    const double pref = std::abs(x) * std::exp(0.5 * x) / (4.0 * std::sqrt(std::numbers::pi));
    const double envelope = std::exp(1.5 * std::log(v) - 1.0 / v);
    const double zarg = x * x / 8.0;
    double sum = 0.0, term = 0.0, vk = 1.0, sign = 1.0;
    for (int k = 0; k <= order; ++k) {
        term = sign * coeff::a_coeff(k, zarg) * vk;
        sum += term;
        vk *= v;
        sign *= -0.5;
    }
    return {pref * envelope * sum, std::abs(pref * envelope * term)};
}

// |x| -> infinity at fixed theta (v = 2 theta^2 / x^2):
// TV/S = (theta e^{x/2} / (2 sqrt(2 pi))) v e^{-1/v} e^{-theta^2/8}
//        * sum_k ((-1)^k/2^k) b_k(theta^2/4) v^k
inline SeriesEval tv_series_large_strike_diag(double x, double theta, int order) {
    detail::check_wing_args(x, theta);
    detail::check_order(order);
    const double v = 2.0 * theta * theta / (x * x);
    const double pref = theta * std::exp(0.5 * x) / (2.0 * std::sqrt(2.0 * std::numbers::pi));
    const double envelope = std::exp(std::log(v) - 1.0 / v - theta * theta / 8.0);
    const double zarg = theta * theta / 4.0;
    double sum = 0.0, term = 0.0, vk = 1.0, sign = 1.0;
    for (int k = 0; k <= order; ++k) {
        term = sign * coeff::b_coeff(k, zarg) * vk;
        sum += term;
        vk *= v;
        sign *= -0.5;
    }
    return {pref * envelope * sum, std::abs(pref * envelope * term)};
}

// theta -> infinity at any fixed x (w = 8 / theta^2):
// CC/S = (e^{x/2} / sqrt(pi)) w^{1/2} e^{-1/w} sum_k ((-1)^k/2^k) c_k(x^2/8) w^k
inline SeriesEval cc_series_large_theta_diag(double x, double theta, int order) {
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
    detail::check_order(order);
    const double w = 8.0 / (theta * theta);
    const double pref = std::exp(0.5 * x) / std::sqrt(std::numbers::pi);
    const double envelope = std::exp(0.5 * std::log(w) - 1.0 / w);
    const double zarg = x * x / 8.0;
    double sum = 0.0, term = 0.0, wk = 1.0, sign = 1.0;
    for (int k = 0; k <= order; ++k) {
        term = sign * coeff::c_coeff(k, zarg) * wk;
        sum += term;
        wk *= w;
        sign *= -0.5;
    }
    return {pref * envelope * sum, std::abs(pref * envelope * term)};
}

// ATM, theta -> 0:
// C/S = (theta / sqrt(2 pi)) sum_k ((-1)^k/2^k) (theta^2/4)^k / ((2k+1) k!)
inline SeriesEval atm_tv_series_diag(double theta, int order) {
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
    detail::check_order(order);
    const double pref = theta / std::sqrt(2.0 * std::numbers::pi);
    double sum = 0.0, term = 0.0, mag = 1.0, sign = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) mag *= theta * theta / (8.0 * k);
        term = sign * mag / (2 * k + 1);
        sum += term;
        sign = -sign;
    }
    return {pref * sum, std::abs(pref * term)};
}

// ATM, theta -> infinity:
// CC/S = (1/sqrt(pi)) (8/theta^2)^{1/2} e^{-theta^2/8}
//        * sum_k ((-1)^k/2^k) (2k-1)!! (8/theta^2)^k
inline SeriesEval atm_cc_series_diag(double theta, int order) {
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
    detail::check_order(order);
    const double w = 8.0 / (theta * theta);
    const double pref = std::sqrt(w / std::numbers::pi) * std::exp(-theta * theta / 8.0);
    double sum = 0.0, term = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) term *= -0.5 * (2 * k - 1) * w;
        sum += term;
    }
    return {pref * sum, std::abs(pref * term)};
}

inline double tv_series_small_theta(double x, double theta, int order) {
    return tv_series_small_theta_diag(x, theta, order).value;
}
inline double tv_series_large_strike(double x, double theta, int order) {
    return tv_series_large_strike_diag(x, theta, order).value;
}
inline double cc_series_large_theta(double x, double theta, int order) {
    return cc_series_large_theta_diag(x, theta, order).value;
}
inline double atm_tv_series(double theta, int order) {
    return atm_tv_series_diag(theta, order).value;
}
inline double atm_cc_series(double theta, int order) {
    return atm_cc_series_diag(theta, order).value;
}

// Leading constant in front of each regime's normalized series; dividing a
// raw TV/S (or CC/S) error by this puts it on the scale remainder_scale()
// refers to.
inline double regime_prefactor(ExpansionRegime regime, double x, double theta) {
    switch (regime) {
    case ExpansionRegime::short_maturity:
        return std::abs(x) * std::exp(0.5 * x) / (4.0 * std::sqrt(std::numbers::pi));
    case ExpansionRegime::large_strike:
        return theta * std::exp(0.5 * x) / (2.0 * std::sqrt(2.0 * std::numbers::pi));
    case ExpansionRegime::large_maturity:
        return std::exp(0.5 * x) / std::sqrt(std::numbers::pi);
    case ExpansionRegime::atm_small:
        return 1.0 / std::sqrt(2.0 * std::numbers::pi);
    case ExpansionRegime::atm_large:
        return 1.0 / std::sqrt(std::numbers::pi);
    }
    return 1.0;
}

// Theoretical size of the first dropped term at order N (up to constants):
// the truncation error of each expansion is O(remainder_scale).
inline double remainder_scale(ExpansionRegime regime, double x, double theta, int order) {
    const double z = x * x / (2.0 * theta * theta);
    switch (regime) {
    case ExpansionRegime::short_maturity:
        return std::pow(theta, 2 * order + 5) * std::exp(-z);
    case ExpansionRegime::large_strike:
        return std::pow(std::abs(x), -2 * order - 4) * std::exp(-z);
    case ExpansionRegime::large_maturity:
        return std::pow(theta, -2 * order - 3) * std::exp(-theta * theta / 8.0);
    case ExpansionRegime::atm_small:
        return std::pow(theta, 2 * order + 3);
    case ExpansionRegime::atm_large:
        return std::pow(theta, -2 * order - 3) * std::exp(-theta * theta / 8.0);
    }
    return 1.0;
}

} // namespace asymvol

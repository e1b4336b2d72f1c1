#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "asymvol/black_scholes.hpp"

// Expansion-free implied-volatility solver: bracket the root of the monotone
// time-value objective, then run Newton guarded by the bracket. Serves as
// ground truth for every approximation in the library, so it shares nothing
// with them beyond the forward pricing model.

namespace asymvol {

struct BracketState {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0; // <= 0 at every step
    double f_hi = 0.0; // >= 0 at every step
};

namespace detail {

// Geometric expansion from sigma = 0.5 until the objective changes sign.
template <class F>
BracketState init_bracket(F&& f) {
    BracketState b;
    double s = 0.5;
    double fs = f(s);
    if (fs >= 0.0) {
        b.hi = s;
        b.f_hi = fs;
        for (int i = 0; i < 200; ++i) {
            s *= 0.5;
            fs = f(s);
            if (fs <= 0.0) {
                b.lo = s;
                b.f_lo = fs;
                return b;
            }
            b.hi = s;
            b.f_hi = fs;
        }
        b.lo = 0.0;
        b.f_lo = f(0.0); // = -target time value < 0
        return b;
    }
    b.lo = s;
    b.f_lo = fs;
    for (int i = 0; i < 200; ++i) {
        s *= 2.0;
        fs = f(s);
        if (fs >= 0.0) {
            b.hi = s;
            b.f_hi = fs;
            return b;
        }
        b.lo = s;
        b.f_lo = fs;
    }
    // Unreachable for prices strictly inside the band: C(sigma) -> S.
    throw std::runtime_error("bracket expansion failed after 200 doublings");
}

} // namespace detail

// The unique sigma repricing the quote to within tol. The iteration runs all
// the way to bracket collapse, not just |f| <= tol: near the wings the
// objective is exponentially flat in sigma, and stopping on the price
// residual alone would leave sigma orders of magnitude less accurate than
// the doubles can represent.
inline double implied_vol_exact(const MarketQuote& q, double tol) {
    check_invertible_quote(q);
    if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");

    const double target = *q.call_price - intrinsic_value(q);
    const auto f = [&](double sigma) { return time_value(q, sigma) - target; };

    auto b = detail::init_bracket(f);
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double sigma = 0.5 * (b.lo + b.hi);
    for (int iter = 0; iter < 400; ++iter) {
        if (b.hi - b.lo <= 4.0 * eps * b.hi) break;
        const double f_cur = f(sigma);
        if (f_cur == 0.0) return sigma;
        if (f_cur < 0.0) {
            b.lo = sigma;
            b.f_lo = f_cur;
        } else {
            b.hi = sigma;
            b.f_hi = f_cur;
        }
        double next = 0.0;
        const double vg = vega(q, sigma);
        bool newton_ok = vg > 0.0 && std::isfinite(vg);
        if (newton_ok) {
            next = sigma - f_cur / vg;
            newton_ok = std::isfinite(next) && next > b.lo && next < b.hi;
            // The Newton step estimates the remaining error; once it is below
            // one ulp the iterate is as good as the bracket will ever get,
            // even if convergence was one-sided and the bracket never shrank.
            if (newton_ok && std::abs(next - sigma) <= eps * sigma) return next;
        }
        sigma = newton_ok ? next : 0.5 * (b.lo + b.hi);
    }
    return 0.5 * (b.lo + b.hi);
}

inline double implied_vol_exact(const MarketQuote& q) {
    check_invertible_quote(q);
    return implied_vol_exact(q, 1e-12 * q.spot);
}

} // namespace asymvol

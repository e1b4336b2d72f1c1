#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "asymvol/rational.hpp"

// Truncated series in the two generators (lambda, ln lambda):
//   sum_{i,j} coeff[i][j] * lambda^i * ln^j(lambda),  i <= trunc.
// Plus the order-by-order solver for the master inversion equation
//   beta*ln(v) - 1/v + ln(sum_k alpha_k v^k) = gamma - 1/lambda,
// whose solution v(lambda) carries one coefficient a_{i,j} per grid point
// j < i, solved in dominance order lambda > lambda^2 ln(lambda) > lambda^2 > ...
//
// T is double for numeric work or Rational for exact coefficient generation.

namespace asymvol::ts {

// Dominance-order position of the (i,j) grid point; bijective on j < i.
// position(1,0)=1, (2,1)=2, (2,0)=3, (3,2)=4, ...
inline constexpr long position(int i, int j) {
    return static_cast<long>(i) * (i + 1) / 2 - j;
}

template <class T>
struct LogPowerSeries {
    int trunc = 0;                     // powers of lambda above this are dropped
    std::vector<std::map<int, T>> rows; // rows[i]: ln-power j -> coefficient

    LogPowerSeries() : rows(1) {}
    explicit LogPowerSeries(int trunc_order) : trunc(trunc_order), rows(trunc_order + 1) {
        if (trunc_order < 0) throw std::invalid_argument("trunc_order must be non-negative");
    }

    T coeff(int i, int j) const {
        if (i < 0 || i > trunc || j < 0) return T(0);
        const auto it = rows[i].find(j);
        return it == rows[i].end() ? T(0) : it->second;
    }

    void add_coeff(int i, int j, const T& c) {
        if (i < 0 || j < 0) throw std::invalid_argument("series indices must be non-negative");
        if (i > trunc || c == T(0)) return;
        T& slot = rows[i][j];
        slot += c;
        if (slot == T(0)) rows[i].erase(j);
    }

    bool is_zero() const {
        for (const auto& row : rows)
            if (!row.empty()) return false;
        return true;
    }
};

template <class T>
LogPowerSeries<T> series_const(int trunc_order, const T& c) {
    LogPowerSeries<T> s(trunc_order);
    s.add_coeff(0, 0, c);
    return s;
}

template <class T>
LogPowerSeries<T> series_monomial(int trunc_order, int i, int j, const T& c) {
    LogPowerSeries<T> s(trunc_order);
    s.add_coeff(i, j, c);
    return s;
}

namespace detail {
template <class T>
void check_same_trunc(const LogPowerSeries<T>& a, const LogPowerSeries<T>& b) {
    if (a.trunc != b.trunc) throw std::invalid_argument("trunc_order mismatch");
}
} // namespace detail

template <class T>
LogPowerSeries<T> operator+(const LogPowerSeries<T>& a, const LogPowerSeries<T>& b) {
    detail::check_same_trunc(a, b);
    LogPowerSeries<T> out = a;
    for (int i = 0; i <= b.trunc; ++i)
        for (const auto& [j, c] : b.rows[i]) out.add_coeff(i, j, c);
    return out;
}

template <class T>
LogPowerSeries<T> operator-(const LogPowerSeries<T>& a, const LogPowerSeries<T>& b) {
    detail::check_same_trunc(a, b);
    LogPowerSeries<T> out = a;
    for (int i = 0; i <= b.trunc; ++i)
        for (const auto& [j, c] : b.rows[i]) out.add_coeff(i, j, -c);
    return out;
}

template <class T>
LogPowerSeries<T> series_scale(const T& s, const LogPowerSeries<T>& a) {
    LogPowerSeries<T> out(a.trunc);
    for (int i = 0; i <= a.trunc; ++i)
        for (const auto& [j, c] : a.rows[i]) out.add_coeff(i, j, s * c);
    return out;
}

template <class T>
LogPowerSeries<T> series_mul(const LogPowerSeries<T>& a, const LogPowerSeries<T>& b) {
    detail::check_same_trunc(a, b);
    LogPowerSeries<T> out(a.trunc);
    for (int ia = 0; ia <= a.trunc; ++ia) {
        if (a.rows[ia].empty()) continue;
        for (int ib = 0; ib + ia <= b.trunc; ++ib) {
            if (b.rows[ib].empty()) continue;
            for (const auto& [ja, ca] : a.rows[ia])
                for (const auto& [jb, cb] : b.rows[ib]) out.add_coeff(ia + ib, ja + jb, ca * cb);
        }
    }
    return out;
}

template <class T>
LogPowerSeries<T> series_truncate(const LogPowerSeries<T>& a, int new_trunc) {
    if (new_trunc > a.trunc) throw std::invalid_argument("cannot extend a truncated series");
    LogPowerSeries<T> out(new_trunc);
    for (int i = 0; i <= new_trunc; ++i) out.rows[i] = a.rows[i];
    return out;
}

// Divide by lambda^k; defined only when the low-order rows are empty.
template <class T>
LogPowerSeries<T> series_shift_down(const LogPowerSeries<T>& a, int k) {
    if (k < 0 || k > a.trunc) throw std::invalid_argument("bad shift");
    for (int i = 0; i < k; ++i)
        if (!a.rows[i].empty()) throw std::domain_error("series not divisible by lambda^k");
    LogPowerSeries<T> out(a.trunc - k);
    for (int i = k; i <= a.trunc; ++i) out.rows[i - k] = a.rows[i];
    return out;
}

// 1/a, requiring a plain nonzero constant term: a leading ln(lambda) never
// becomes small, so a grade-0 ln-polynomial has no inverse on this grid.
template <class T>
LogPowerSeries<T> series_recip(const LogPowerSeries<T>& a) {
    const T c0 = a.coeff(0, 0);
    if (c0 == T(0) || a.rows[0].size() != 1)
        throw std::domain_error("not invertible at this grading");
    LogPowerSeries<T> out(a.trunc);
    const T inv_c0 = T(1) / c0;
    out.add_coeff(0, 0, inv_c0);
    for (int i = 1; i <= a.trunc; ++i) {
        std::map<int, T> conv; // sum_{k=1..i} a_k * out_{i-k}, a polynomial in ln
        for (int k = 1; k <= i; ++k) {
            for (const auto& [ja, ca] : a.rows[k])
                for (const auto& [jb, cb] : out.rows[i - k]) {
                    T& slot = conv[ja + jb];
                    slot += ca * cb;
                    if (slot == T(0)) conv.erase(ja + jb);
                }
        }
        for (const auto& [j, c] : conv) out.add_coeff(i, j, -inv_c0 * c);
    }
    return out;
}

// ln(1+u) for u with zero constant row.
template <class T>
LogPowerSeries<T> series_log1p(const LogPowerSeries<T>& u) {
    if (!u.rows[0].empty()) throw std::domain_error("series_log1p requires zero constant term");
    LogPowerSeries<T> acc(u.trunc);
    LogPowerSeries<T> pw = u;
    for (int n = 1; n <= u.trunc; ++n) {
        const T coef = (n % 2 == 1) ? T(1) / T(n) : T(-1) / T(n);
        acc = acc + series_scale(coef, pw);
        if (n < u.trunc) pw = series_mul(pw, u);
    }
    return acc;
}

// exp(u) for u with zero constant row.
template <class T>
LogPowerSeries<T> series_exp(const LogPowerSeries<T>& u) {
    if (!u.rows[0].empty()) throw std::domain_error("series_exp requires zero constant term");
    LogPowerSeries<T> acc = series_const(u.trunc, T(1));
    LogPowerSeries<T> pw = u;
    T fact(1);
    for (int n = 1; n <= u.trunc; ++n) {
        fact *= T(n);
        acc = acc + series_scale(T(1) / fact, pw);
        if (n < u.trunc) pw = series_mul(pw, u);
    }
    return acc;
}

namespace detail {
inline double int_pow(double base, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= base;
    return out;
}
} // namespace detail

// Numeric evaluation at lambda in (0,1); Horner in lambda over the rows.
template <class T>
double eval_series(const LogPowerSeries<T>& s, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("lambda must lie in (0,1)");
    const double log_lambda = std::log(lambda);
    double acc = 0.0;
    for (int i = s.trunc; i >= 0; --i) {
        double row_val = 0.0;
        for (const auto& [j, c] : s.rows[i]) row_val += to_double(c) * detail::int_pow(log_lambda, j);
        acc = acc * lambda + row_val;
    }
    return acc;
}

namespace detail {

// Residual of the master equation for a candidate v (rows >= 1 only):
//   r = beta*ln(lambda) + beta*ln(1+w) - (recip(1+w)-1)/lambda
//       + ln(1 + sum_{k>=1} alpha_k v^k) - gamma
// with w = v/lambda - 1; the 1/v and 1/lambda poles cancel exactly.
// Returned at trunc v.trunc - 2, the deepest grade the next solve step reads.
template <class T>
LogPowerSeries<T> master_residual(const LogPowerSeries<T>& v, const T& beta, const T& gamma,
                                  const std::vector<T>& alphas) {
    const int order = v.trunc;
    if (order < 2) throw std::invalid_argument("residual needs trunc_order >= 2");
    const int rt = order - 2;

    const auto w = series_shift_down(v - series_monomial(order, 1, 0, T(1)), 1); // trunc order-1
    const auto log_term = series_scale(beta, series_log1p(w));

    const auto one = series_const(order - 1, T(1));
    const auto recip_excess = series_recip(one + w) - one;
    const auto inv_term = series_scale(T(-1), series_shift_down(recip_excess, 1)); // trunc order-2

    LogPowerSeries<T> p(order);
    LogPowerSeries<T> vk = v;
    const int k_max = std::min<int>(static_cast<int>(alphas.size()) - 1, rt);
    for (int k = 1; k <= k_max; ++k) {
        p = p + series_scale(alphas[k], vk);
        if (k < k_max) vk = series_mul(vk, v);
    }
    const auto alpha_term = series_log1p(series_truncate(p, rt));

    auto r = series_truncate(log_term, rt) + inv_term + alpha_term;
    r.add_coeff(0, 1, beta);
    r.add_coeff(0, 0, -gamma);
    return r;
}

} // namespace detail

// Solve the master equation for v = lambda + sum_{i>=2, j<i} a_{i,j} lambda^i ln^j(lambda).
// alphas supplies alpha_0 = 1, alpha_1, ...; entries beyond alpha_{M-2} cannot
// influence the solved grades and missing ones are treated as zero.
// Each level m reads coefficient a_{m,n} off the residual's lambda^{m-2} ln^n row.
template <class T>
LogPowerSeries<T> solve_inversion(const T& beta, const T& gamma, const std::vector<T>& alphas,
                                  int trunc_order) {
    if (trunc_order < 1) throw std::invalid_argument("trunc_order must be at least 1");
    if (!(beta > T(0))) throw std::domain_error("beta must be positive");
    if (alphas.empty() || !(alphas[0] == T(1)))
        throw std::invalid_argument("alpha_0 must equal 1");

    auto v = series_monomial(trunc_order, 1, 0, T(1));
    for (int m = 2; m <= trunc_order; ++m) {
        const auto r = detail::master_residual(v, beta, gamma, alphas);
        for (int n = m - 1; n >= 0; --n) {
            const T c = r.coeff(m - 2, n);
            if (!(c == T(0))) v.add_coeff(m, n, -c);
        }
    }
    return v;
}

} // namespace asymvol::ts

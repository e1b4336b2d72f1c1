#pragma once

#include <stdexcept>
#include <vector>

#include "asymvol/rational.hpp"

// Coefficient families of the forward expansions and of the ATM inverse
// series. Polynomials are generated in exact rational arithmetic; floating
// evaluation converts the exact coefficients and runs Horner.

namespace asymvol::coeff {

// (2j+1)!! with the empty-product convention: j = -1 and j = 0 both give 1.
inline Rational odd_double_factorial(int j) {
    if (j < -1) throw std::domain_error("(2j+1)!! undefined for j < -1");
    Rational out = 1;
    for (int l = 1; l <= j; ++l) out *= 2 * l + 1;
    return out;
}

inline Rational factorial(int n) {
    if (n < 0) throw std::domain_error("factorial of negative integer");
    Rational out = 1;
    for (int l = 2; l <= n; ++l) out *= l;
    return out;
}

inline Rational binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    Rational out = 1;
    for (int l = 1; l <= r; ++l) out = out * (n - l + 1) / l;
    return out;
}

// f_k(z) = sum_{j=0}^{k} z^j / (j! (2j+1)!!), ascending coefficients.
inline std::vector<Rational> f_poly(int k) {
    if (k < 0) throw std::domain_error("order must be non-negative");
    std::vector<Rational> c(k + 1);
    for (int j = 0; j <= k; ++j) c[j] = Rational(1) / (factorial(j) * odd_double_factorial(j));
    return c;
}

// g_k(z) = sum_{j=0}^{k} z^j / (j! (2j-1)!!).
inline std::vector<Rational> g_poly(int k) {
    if (k < 0) throw std::domain_error("order must be non-negative");
    std::vector<Rational> c(k + 1);
    for (int j = 0; j <= k; ++j) c[j] = Rational(1) / (factorial(j) * odd_double_factorial(j - 1));
    return c;
}

// a_k(z) = (2k+1)!! f_k(z)
inline std::vector<Rational> a_poly(int k) {
    auto c = f_poly(k);
    const Rational scale = odd_double_factorial(k);
    for (auto& v : c) v *= scale;
    return c;
}

// b_k(z) = (2k+1)!! sum_{j=0}^{k} (-1)^j C(k,j) z^j / (2j+1)!!
inline std::vector<Rational> b_poly(int k) {
    if (k < 0) throw std::domain_error("order must be non-negative");
    std::vector<Rational> c(k + 1);
    const Rational scale = odd_double_factorial(k);
    for (int j = 0; j <= k; ++j) {
        c[j] = scale * binomial(k, j) / odd_double_factorial(j);
        if (j % 2 == 1) c[j] = -c[j];
    }
    return c;
}

// c_k(z) = (2k-1)!! g_k(z)
inline std::vector<Rational> c_poly(int k) {
    auto c = g_poly(k);
    const Rational scale = odd_double_factorial(k - 1);
    for (auto& v : c) v *= scale;
    return c;
}

namespace detail {

inline Rational horner(const std::vector<Rational>& poly, const Rational& z) {
    Rational acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
    return acc;
}

inline double horner(const std::vector<Rational>& poly, double z) {
    double acc = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + to_double(*it);
    return acc;
}

} // namespace detail

inline double a_coeff(int k, double z) { return detail::horner(a_poly(k), z); }
inline double b_coeff(int k, double z) { return detail::horner(b_poly(k), z); }
inline double c_coeff(int k, double z) { return detail::horner(c_poly(k), z); }

inline Rational a_coeff_exact(int k, const Rational& z) { return detail::horner(a_poly(k), z); }
inline Rational b_coeff_exact(int k, const Rational& z) { return detail::horner(b_poly(k), z); }
inline Rational c_coeff_exact(int k, const Rational& z) { return detail::horner(c_poly(k), z); }

// Coefficients of the inverse error function: erfinv(y) expanded around 0
// equals (sqrt(pi)/2) y sum_k eta_k u^{2k}/(2k+1) with u = (sqrt(pi)/2) y.
// Quadratic convolution recursion; exact rationals.
inline std::vector<Rational> eta_sequence(int n_terms) {
    if (n_terms < 1) throw std::domain_error("n_terms must be at least 1");
    std::vector<Rational> eta(n_terms);
    eta[0] = 1;
    for (int k = 1; k < n_terms; ++k) {
        Rational sum = 0;
        for (int j = 0; j <= k - 1; ++j)
            sum += eta[j] * eta[k - 1 - j] / Rational((j + 1) * (2 * j + 1));
        eta[k] = sum;
    }
    return eta;
}

inline std::vector<double> eta_doubles(int n_terms) {
    const auto exact = eta_sequence(n_terms);
    std::vector<double> out(exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i) out[i] = to_double(exact[i]);
    return out;
}

enum class Family { a, b, c, eta };

struct CoefficientTable {
    Family kind = Family::a;
    int order = 0;                // highest index included
    std::vector<Rational> values; // length order+1
};

inline CoefficientTable make_coefficient_table(Family kind, int order, const Rational& z = 0) {
    if (order < 0) throw std::domain_error("order must be non-negative");
    CoefficientTable t{kind, order, {}};
    t.values.reserve(order + 1);
    switch (kind) {
    case Family::a:
        for (int k = 0; k <= order; ++k) t.values.push_back(a_coeff_exact(k, z));
        break;
    case Family::b:
        for (int k = 0; k <= order; ++k) t.values.push_back(b_coeff_exact(k, z));
        break;
    case Family::c:
        for (int k = 0; k <= order; ++k) t.values.push_back(c_coeff_exact(k, z));
        break;
    case Family::eta:
        t.values = eta_sequence(order + 1);
        break;
    }
    return t;
}

} // namespace asymvol::coeff

#pragma once

// Shared oracles and fixtures for the test suites. Everything here is
// deliberately independent of the expansion code paths it is used to check:
// quadrature for the normal CDF, Newton on std::erf for the inverse error
// function, and exact-rational series reversion for the eta coefficients.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "asymvol/black_scholes.hpp"
#include "asymvol/rational.hpp"

namespace support {

template <class F>
double adaptive_simpson(F&& f, double a, double m, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-15) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

// Normal CDF by direct quadrature of the density; no erf/erfc anywhere.
inline double normal_cdf_by_quadrature(double u) {
    if (u == 0.0)
        return 0.5;
    const auto density = [](double t) {
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
    };
    const double hi = std::min(std::abs(u), 40.0);
    const double tail = integrate(density, 0.0, hi);
    return u > 0.0 ? 0.5 + tail : 0.5 - tail;
}

// Solves erf(t) = y for |y| < 1 with plain Newton on std::erf.
inline double newton_inverse_erf(double y) {
    const double half_sqrt_pi = 0.5 * std::sqrt(std::numbers::pi);
    double t = half_sqrt_pi * y;
    if (std::abs(y) > 0.8)
        t = std::copysign(std::sqrt(-std::log1p(-std::abs(y))), y);
    for (int i = 0; i < 100; ++i) {
        const double deriv = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-t * t);
        const double step = (std::erf(t) - y) / deriv;
        t -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(t)))
            break;
    }
    return t;
}

// Coefficients of the inverse of s(t) = sum_m (-1)^m t^(2m+1) / (m! (2m+1)),
// i.e. the odd Taylor coefficients of erf^{-1} with the 2/sqrt(pi) scale
// stripped, obtained by fixed-point reversion t <- u + (t - s(t)) in exact
// rational arithmetic. Returns eta_k = (2k+1) * [u^{2k+1}] t(u).
inline std::vector<asymvol::Rational> eta_by_series_reversion(int n_terms) {
    using asymvol::Rational;
    using Poly = std::vector<Rational>;
    const int deg = 2 * n_terms - 1;

    const auto mul = [deg](const Poly& a, const Poly& b) {
        Poly r(deg + 1, Rational(0));
        for (int i = 0; i <= deg; ++i) {
            if (a[i] == 0)
                continue;
            for (int j = 0; i + j <= deg; ++j)
                if (b[j] != 0)
                    r[i + j] += a[i] * b[j];
        }
        return r;
    };

    Poly u(deg + 1, Rational(0));
    u[1] = 1;
    Poly t = u;
    for (int round = 0; round < n_terms; ++round) {
        const Poly t_sq = mul(t, t);
        Poly s(deg + 1, Rational(0));
        Poly t_pow = t;
        Rational m_factorial(1);
        for (int m = 0; 2 * m + 1 <= deg; ++m) {
            if (m > 0) {
                t_pow = mul(t_pow, t_sq);
                m_factorial *= m;
            }
            const Rational c = Rational(m % 2 == 0 ? 1 : -1) / (m_factorial * Rational(2 * m + 1));
            for (int p = 2 * m + 1; p <= deg; ++p)
                s[p] += c * t_pow[p];
        }
        for (int p = 0; p <= deg; ++p)
            t[p] = u[p] + t[p] - s[p];
    }

    std::vector<Rational> eta(n_terms);
    for (int k = 0; k < n_terms; ++k)
        eta[k] = Rational(2 * k + 1) * t[2 * k + 1];
    return eta;
}

inline asymvol::MarketQuote quote_from(double sigma, double x, double maturity, double spot = 1.0) {
    asymvol::MarketQuote q{spot, spot * std::exp(x), maturity, {}};
    q.call_price = asymvol::bs_call_price(q, sigma);
    return q;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::filesystem::path scratch_path(const std::string& stem) {
    static std::atomic<int> counter{0};
    const auto name = "asymvol_test_" + std::to_string(::getpid()) + "_"
                    + std::to_string(counter++) + "_" + stem;
    return std::filesystem::temp_directory_path() / name;
}

#ifdef ASYMVOL_CLI_PATH
struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::string& args) {
    const auto out_path = scratch_path("stdout");
    const auto err_path = scratch_path("stderr");
    const std::string cmd = std::string(ASYMVOL_CLI_PATH) + " " + args
                          + " >" + out_path.string() + " 2>" + err_path.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}
#endif

} // namespace support

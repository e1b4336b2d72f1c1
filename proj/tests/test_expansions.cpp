#include <catch2/catch_amalgamated.hpp>

#include "asymvol/black_scholes.hpp"
#include "asymvol/expansions.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace asymvol;

namespace {

// Exact TV/S through the integral identity; independent of the series code.
double exact_tv_ratio(double x, double theta) {
    return std::exp(x / 2.0) / std::sqrt(2.0 * std::numbers::pi) * tv_integral(x, theta);
}

double exact_cc_ratio(double x, double theta) {
    const MarketQuote q{1.0, std::exp(x), 1.0, {}};
    return 1.0 - bs_call_price(q, theta);
}

} // namespace

TEST_CASE("Leading terms match their closed forms", "[expansions]") {
    const double x = 0.7;
    const double theta = 0.21;
    const double v = 2.0 * theta * theta / (x * x);

    const double lead_small = std::abs(x) * std::exp(x / 2.0) / (4.0 * std::sqrt(std::numbers::pi))
                            * std::pow(v, 1.5) * std::exp(-1.0 / v);
    REQUIRE(tv_series_small_theta(x, theta, 0) == Catch::Approx(lead_small).epsilon(1e-14));

    const double lead_strike = theta * std::exp(x / 2.0) / (2.0 * std::sqrt(2.0 * std::numbers::pi))
                             * v * std::exp(-1.0 / v - theta * theta / 8.0);
    REQUIRE(tv_series_large_strike(x, theta, 0) == Catch::Approx(lead_strike).epsilon(1e-14));

    const double w = 8.0 / (theta * theta);
    const double lead_cc = std::exp(x / 2.0) / std::sqrt(std::numbers::pi)
                         * std::sqrt(w) * std::exp(-1.0 / w);
    REQUIRE(cc_series_large_theta(x, theta, 0) == Catch::Approx(lead_cc).epsilon(1e-14));

    REQUIRE(atm_tv_series(theta, 0) ==
            Catch::Approx(theta / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));

    const double lead_atm_cc = std::sqrt(w / std::numbers::pi) * std::exp(-theta * theta / 8.0);
    REQUIRE(atm_cc_series(theta, 0) == Catch::Approx(lead_atm_cc).epsilon(1e-14));
}

TEST_CASE("Short-maturity series converges to the integral oracle", "[expansions]") {
    const double x = 0.2;
    std::vector<double> gaps;
    for (const double theta : {0.1, 0.05, 0.025}) {
        const double ratio = tv_series_small_theta(x, theta, 2) / exact_tv_ratio(x, theta);
        gaps.push_back(std::abs(ratio - 1.0));
    }
    REQUIRE(gaps[1] < gaps[0]);
    REQUIRE(gaps[2] < gaps[1]);
    REQUIRE(gaps[2] < 5e-4);

    // The series sees x only through x^2 and the e^{x/2} prefactor.
    const double plus = tv_series_small_theta(0.3, 0.05, 2) * std::exp(-0.15);
    const double minus = tv_series_small_theta(-0.3, 0.05, 2) * std::exp(0.15);
    REQUIRE(plus == Catch::Approx(minus).epsilon(1e-15));

    REQUIRE_THROWS_AS(tv_series_small_theta(0.0, 0.1, 2), std::domain_error);
    REQUIRE_THROWS_AS(tv_series_small_theta(0.5, -0.1, 2), std::domain_error);
    REQUIRE_THROWS_AS(tv_series_small_theta(0.5, 0.1, -1), std::domain_error);
}

TEST_CASE("Wing series converges as strikes move out", "[expansions]") {
    const double theta = 0.5;
    std::vector<double> gaps;
    for (const double x : {3.0, 6.0, 12.0}) {
        const double ratio = tv_series_large_strike(x, theta, 2) / exact_tv_ratio(x, theta);
        gaps.push_back(std::abs(ratio - 1.0));
    }
    REQUIRE(gaps[0] < 5e-3);
    REQUIRE(gaps[1] < gaps[0]);
    REQUIRE(gaps[2] < gaps[1]);
    REQUIRE(gaps[2] < 1e-6);

    // Remainder scaling: |series - exact| * x^{2N+4} e^{x^2/(2 theta^2)} stays
    // bounded as |x| doubles.
    const int order = 1;
    std::vector<double> normalized;
    for (const double x : {3.0, 6.0}) {
        const double err = std::abs(tv_series_large_strike(x, theta, order) - exact_tv_ratio(x, theta));
        normalized.push_back(err * std::pow(x, 2.0 * order + 4.0)
                             * std::exp(x * x / (2.0 * theta * theta)));
    }
    REQUIRE(normalized[1] < 10.0 * normalized[0]);
    REQUIRE(normalized[0] < 10.0 * normalized[1]);

    REQUIRE_THROWS_AS(tv_series_large_strike(0.0, 0.5, 1), std::domain_error);
}

TEST_CASE("Covered-call series converges as total vol grows", "[expansions]") {
    // Relative error collapses with theta; measured bounds, N = 3.
    REQUIRE(std::abs(cc_series_large_theta(0.5, 6.0, 3) / exact_cc_ratio(0.5, 6.0) - 1.0) < 2e-2);
    REQUIRE(std::abs(cc_series_large_theta(0.5, 8.0, 3) / exact_cc_ratio(0.5, 8.0) - 1.0) < 2e-3);
    REQUIRE(std::abs(cc_series_large_theta(0.5, 12.0, 3) / exact_cc_ratio(0.5, 12.0) - 1.0) < 1e-4);

    REQUIRE_THROWS_AS(cc_series_large_theta(0.5, 0.0, 2), std::domain_error);
}

TEST_CASE("ATM small-vol series matches the closed form", "[expansions]") {
    const double theta = 0.2;
    REQUIRE(atm_tv_series(theta, 4) == Catch::Approx(atm_call_closed_form(theta)).margin(1e-12));

    // Remainder shrinks like theta^{2N+3}: normalized error stays bounded
    // while theta halves.
    const int order = 2;
    std::vector<double> normalized;
    for (const double t : {0.4, 0.2, 0.1, 0.05}) {
        const double err = std::abs(atm_tv_series(t, order) - atm_call_closed_form(t));
        normalized.push_back(err / std::pow(t, 2.0 * order + 3.0));
    }
    for (std::size_t i = 1; i < normalized.size(); ++i) {
        REQUIRE(normalized[i] < 10.0 * normalized[0]);
        REQUIRE(normalized[0] < 10.0 * normalized[i]);
    }
}

TEST_CASE("ATM large-vol series matches erfc", "[expansions]") {
    const auto exact = [](double theta) { return std::erfc(theta / (2.0 * std::sqrt(2.0))); };
    // Measured truncation error at N = 3; the first dropped term dominates.
    REQUIRE(std::abs(atm_cc_series(8.0, 3) / exact(8.0) - 1.0) < 2e-3);
    REQUIRE(std::abs(atm_cc_series(12.0, 3) / exact(12.0) - 1.0) < 1e-4);
    REQUIRE(std::abs(atm_cc_series(16.0, 3) / exact(16.0) - 1.0) < 1e-5);

    // x = 0 wing series and the ATM series are the same expansion.
    for (int order = 0; order <= 6; ++order) {
        const double wing = cc_series_large_theta(0.0, 3.0, order);
        const double atm = atm_cc_series(3.0, order);
        REQUIRE(wing == Catch::Approx(atm).epsilon(1e-15));
    }
}

TEST_CASE("Truncation order has a finite sweet spot", "[expansions]") {
    const double x = 0.5;
    const double theta = 0.19;
    const double exact = exact_tv_ratio(x, theta);

    int best_order = -1;
    double best_err = 1e300;
    std::vector<double> errs;
    for (int order = 0; order <= 20; ++order) {
        const double err = std::abs(tv_series_small_theta(x, theta, order) - exact);
        errs.push_back(err);
        if (err < best_err) {
            best_err = err;
            best_order = order;
        }
    }
    // Divergent tail: far past the optimum the error blows up.
    REQUIRE(best_order == 2);
    REQUIRE(best_err < 1e-4);
    REQUIRE(errs[20] > 1e3 * best_err);
    REQUIRE(errs[20] > errs[15]);
}

TEST_CASE("Series values stay positive inside their validity range", "[expansions]") {
    // Points chosen so the regime's small parameter is below one half.
    REQUIRE(tv_series_small_theta(0.5, 0.1, 3) > 0.0);
    REQUIRE(tv_series_small_theta(-1.0, 0.2, 3) > 0.0);
    REQUIRE(tv_series_large_strike(5.0, 0.8, 2) > 0.0);
    REQUIRE(cc_series_large_theta(0.3, 6.0, 3) > 0.0);
    REQUIRE(atm_tv_series(0.3, 5) > 0.0);
    REQUIRE(atm_cc_series(7.0, 4) > 0.0);
}

TEST_CASE("Diagnostics report the last retained term", "[expansions]") {
    const double x = 0.5;
    const double theta = 0.1;
    for (int order = 1; order <= 4; ++order) {
        const auto diag = tv_series_small_theta_diag(x, theta, order);
        const double prev = tv_series_small_theta(x, theta, order - 1);
        REQUIRE(diag.value == Catch::Approx(tv_series_small_theta(x, theta, order)).epsilon(1e-15));
        REQUIRE(std::abs(diag.last_term) ==
                Catch::Approx(std::abs(diag.value - prev)).epsilon(1e-12));
    }

    const auto atm_diag = atm_cc_series_diag(8.0, 2);
    REQUIRE(std::abs(atm_diag.last_term) ==
            Catch::Approx(std::abs(atm_diag.value - atm_cc_series(8.0, 1))).epsilon(1e-12));
}

TEST_CASE("Regime names round-trip through parsing", "[expansions]") {
    for (const auto regime : {ExpansionRegime::short_maturity, ExpansionRegime::large_strike,
                              ExpansionRegime::large_maturity, ExpansionRegime::atm_small,
                              ExpansionRegime::atm_large}) {
        const auto parsed = parse_regime(to_string(regime));
        REQUIRE(parsed.has_value());
        REQUIRE(*parsed == regime);
    }
    REQUIRE_FALSE(parse_regime("nonsense").has_value());
}

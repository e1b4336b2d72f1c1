#include <catch2/catch_amalgamated.hpp>

#include "asymvol/coefficients.hpp"
#include "asymvol/rational.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace asymvol;
using namespace asymvol::coeff;

namespace {

// d/dz of a polynomial given by ascending coefficients.
std::vector<Rational> differentiate(const std::vector<Rational>& poly) {
    std::vector<Rational> out;
    for (std::size_t n = 1; n < poly.size(); ++n)
        out.push_back(Rational(static_cast<int>(n)) * poly[n]);
    if (out.empty())
        out.push_back(0);
    return out;
}

} // namespace

TEST_CASE("Odd double factorial follows the empty-product convention", "[coefficients]") {
    REQUIRE(odd_double_factorial(-1) == 1);
    REQUIRE(odd_double_factorial(0) == 1);
    REQUIRE(odd_double_factorial(1) == 3);
    REQUIRE(odd_double_factorial(2) == 15);
    REQUIRE(odd_double_factorial(3) == 105);
    REQUIRE(odd_double_factorial(5) == 10395);
    REQUIRE_THROWS_AS(odd_double_factorial(-2), std::domain_error);

    REQUIRE(factorial(0) == 1);
    REQUIRE(factorial(5) == 120);
    REQUIRE(binomial(6, 2) == 15);
    REQUIRE(binomial(4, 0) == 1);
    REQUIRE(binomial(4, 4) == 1);
}

TEST_CASE("Coefficient families at small order", "[coefficients]") {
    for (const double z : {-3.0, 0.0, 0.7, 10.0}) {
        REQUIRE(a_coeff(0, z) == 1.0);
        REQUIRE(b_coeff(0, z) == 1.0);
        REQUIRE(c_coeff(0, z) == 1.0);
        REQUIRE(a_coeff(1, z) == Catch::Approx(3.0 + z).margin(1e-14));
        REQUIRE(b_coeff(1, z) == Catch::Approx(3.0 - z).margin(1e-14));
        REQUIRE(c_coeff(1, z) == Catch::Approx(1.0 + z).margin(1e-14));
    }

    for (int k = 0; k <= 8; ++k) {
        REQUIRE(a_coeff_exact(k, 0) == odd_double_factorial(k));
        REQUIRE(b_coeff_exact(k, 0) == odd_double_factorial(k));
        REQUIRE(c_coeff_exact(k, 0) == odd_double_factorial(k - 1));
    }
}

TEST_CASE("Floating evaluation agrees with exact rationals", "[coefficients]") {
    for (int k = 0; k <= 10; ++k) {
        for (const auto& z : {Rational(3, 10), Rational(5, 2), Rational(10)}) {
            const double zd = to_double(z);
            REQUIRE(a_coeff(k, zd) ==
                    Catch::Approx(to_double(a_coeff_exact(k, z))).epsilon(1e-14));
            REQUIRE(b_coeff(k, zd) ==
                    Catch::Approx(to_double(b_coeff_exact(k, z))).epsilon(1e-13));
            REQUIRE(c_coeff(k, zd) ==
                    Catch::Approx(to_double(c_coeff_exact(k, z))).epsilon(1e-14));
        }
    }
}

TEST_CASE("Derivative linkage between the polynomial families", "[coefficients]") {
    // d/dz g_k = f_{k-1} and d/dz c_k = a_{k-1}, as exact polynomials.
    for (int k = 1; k <= 8; ++k) {
        const auto dg = differentiate(g_poly(k));
        const auto f = f_poly(k - 1);
        REQUIRE(dg.size() == f.size());
        for (std::size_t n = 0; n < f.size(); ++n)
            REQUIRE(dg[n] == f[n]);

        const auto dc = differentiate(c_poly(k));
        const auto a = a_poly(k - 1);
        REQUIRE(dc.size() == a.size());
        for (std::size_t n = 0; n < a.size(); ++n)
            REQUIRE(dc[n] == a[n]);
    }
}

TEST_CASE("Eta recursion reproduces the series reversion exactly", "[coefficients]") {
    const auto eta = eta_sequence(13);
    REQUIRE(eta[0] == 1);
    REQUIRE(eta[1] == 1);
    REQUIRE(eta[2] == Rational(7, 6));
    REQUIRE(eta[3] == Rational(127, 90));

    // Independent oracle: revert the scaled erf Taylor series in exact
    // rational arithmetic and compare coefficient by coefficient.
    const auto reverted = support::eta_by_series_reversion(13);
    REQUIRE(reverted.size() == eta.size());
    for (std::size_t k = 0; k < eta.size(); ++k)
        REQUIRE(eta[k] == reverted[k]);
}

TEST_CASE("Eta series round-trips the error function", "[coefficients]") {
    const auto eval_inverse_erf = [](double y, int terms) {
        const auto eta = eta_doubles(terms);
        const double w = std::numbers::pi * y * y / 4.0;
        double sum = 0.0;
        double w_pow = 1.0;
        for (int k = 0; k < terms; ++k) {
            sum += eta[k] / (2.0 * k + 1.0) * w_pow;
            w_pow *= w;
        }
        return 0.5 * std::sqrt(std::numbers::pi) * y * sum;
    };

    const double y = 0.3;
    REQUIRE(std::erf(eval_inverse_erf(y, 25)) == Catch::Approx(y).margin(1e-12));

    // Agreement with Newton inversion of std::erf directly.
    REQUIRE(eval_inverse_erf(y, 25) ==
            Catch::Approx(support::newton_inverse_erf(y)).margin(1e-13));
    REQUIRE(eval_inverse_erf(0.7, 40) ==
            Catch::Approx(support::newton_inverse_erf(0.7)).margin(1e-12));
}

TEST_CASE("Coefficient tables carry order+1 values", "[coefficients]") {
    const auto table_a = make_coefficient_table(Family::a, 6, Rational(1, 2));
    REQUIRE(table_a.values.size() == 7);
    REQUIRE(table_a.values[0] == 1);
    REQUIRE(table_a.values[1] == Rational(7, 2));

    const auto table_eta = make_coefficient_table(Family::eta, 3);
    REQUIRE(table_eta.values.size() == 4);
    REQUIRE(table_eta.values[3] == Rational(127, 90));

    REQUIRE_THROWS_AS(make_coefficient_table(Family::a, -1), std::domain_error);
}

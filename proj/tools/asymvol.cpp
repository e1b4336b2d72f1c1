// asymvol: implied-volatility toolkit on the Black-Scholes (r = 0) model.
//
// Subcommands:
//   implied  invert a call price (or a whole quote file) to implied vol
//   forward  evaluate one asymptotic series against the exact price
//   table    sweep a (x, theta, order) grid and report series accuracy
//   coeffs   dump expansion / inversion coefficient families exactly
//
// All data output is deterministic: numbers carry 17 significant digits,
// there are no timestamps, and --verbose writes its banner to stderr only.
// Exit codes: 0 ok, 1 usage error, 2 domain error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymvol/black_scholes.hpp"
#include "asymvol/coefficients.hpp"
#include "asymvol/exact_solver.hpp"
#include "asymvol/expansions.hpp"
#include "asymvol/implied_vol.hpp"
#include "asymvol/log_power_series.hpp"
#include "asymvol/rational.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// JSON has no inf/nan literals; emit null for non-finite diagnostics.
std::string json_num(double v) { return std::isfinite(v) ? fmt(v) : "null"; }

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

// A table row or a JSON object rendered from (key, already-formatted value)
// pairs, so CSV and JSON stay column-for-column identical.
struct Field {
    std::string key;
    std::string value;  // CSV cell
    std::string jvalue; // JSON value (quoted if string)
};

Field num_field(const std::string& key, double v) { return {key, fmt(v), json_num(v)}; }
Field int_field(const std::string& key, long v) {
    return {key, std::to_string(v), std::to_string(v)};
}
Field str_field(const std::string& key, const std::string& v) { return {key, v, "\"" + v + "\""}; }

void write_csv_header(std::ostream& os, const std::vector<Field>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].key;
    os << "\n";
}

void write_csv_row(std::ostream& os, const std::vector<Field>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].value;
    os << "\n";
}

void write_json_object(std::ostream& os, const std::vector<Field>& row) {
    os << "{";
    for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << "\"" << row[i].key << "\":" << row[i].jvalue;
    os << "}";
}

void write_rows(std::ostream& os, const std::string& format,
                const std::vector<std::vector<Field>>& rows) {
    if (format == "json") {
        os << "[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << (i ? ",\n " : "\n ");
            write_json_object(os, rows[i]);
        }
        os << (rows.empty() ? "]" : "\n]") << "\n";
        return;
    }
    if (!rows.empty()) write_csv_header(os, rows.front());
    for (const auto& r : rows) write_csv_row(os, r);
}

asymvol::ExpansionRegime parse_regime_or_fail(const std::string& token) {
    const auto r = asymvol::parse_regime(token);
    if (!r)
        throw std::invalid_argument("unknown regime '" + token +
                                    "' (choose short|large-k|large-t|atm-small|atm-large)");
    return *r;
}

// ---------------------------------------------------------------- implied --

struct ImpliedArgs {
    double spot = 0.0, strike = 0.0, maturity = 0.0, price = 0.0;
    bool have_spot = false, have_strike = false, have_maturity = false, have_price = false;
    std::string quotes_path;
    std::string regime = "auto";
    int order = 25;
    bool no_refine = false;
    std::string format = "json";
    std::string output;
    bool verbose = false;
};

struct LabeledSolution {
    asymvol::VolSolution sol;
    std::string regime_label;
};

LabeledSolution solve_quote(const asymvol::MarketQuote& q, const ImpliedArgs& a) {
    using namespace asymvol;
    const bool refine = !a.no_refine;
    if (a.regime == "exact") {
        VolSolution s;
        s.sigma = implied_vol_exact(q);
        s.theta_sq = s.sigma * s.sigma * q.maturity;
        s.lambda = detail::route_of(q).second;
        s.refined = true;
        s.residual = bs_call_price(q, s.sigma) - *q.call_price;
        s.seed_sigma = s.sigma;
        return {s, "exact"};
    }
    if (a.regime == "auto") {
        const auto s = implied_vol_auto(q, refine);
        return {s, std::string(to_string(s.regime))};
    }
    VolSolution seed;
    if (a.regime == "short") {
        seed = implied_vol_short_expiry(q);
    } else if (a.regime == "large-t") {
        seed = implied_vol_large_expiry(q);
    } else if (a.regime == "large-k") {
        seed = implied_vol_large_strike(q);
    } else if (a.regime == "atm") {
        seed = implied_vol_atm(q, a.order);
    } else {
        throw std::invalid_argument("unknown regime '" + a.regime +
                                    "' (choose auto|short|large-t|large-k|atm|exact)");
    }
    if (!refine) return {seed, std::string(to_string(seed.regime))};
    auto s = newton_refine(q, seed.sigma, 1e-12 * q.spot);
    s.regime = seed.regime;
    s.lambda = seed.lambda;
    s.order_used = seed.order_used;
    s.seed_sigma = seed.sigma;
    return {s, std::string(to_string(seed.regime))};
}

std::vector<Field> solution_fields(const LabeledSolution& ls) {
    return {num_field("sigma", ls.sol.sigma),     str_field("regime", ls.regime_label),
            num_field("lambda", ls.sol.lambda),   num_field("seed_sigma", ls.sol.seed_sigma),
            int_field("iterations", ls.sol.iterations), num_field("residual", ls.sol.residual)};
}

struct QuoteRow {
    long line = 0; // source line (CSV) or 1-based element index (JSON)
    asymvol::MarketQuote q;
};

void read_quotes_csv(const std::string& path, std::vector<QuoteRow>& rows,
                     std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open quote file: " + path);
    std::string line;
    long lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        auto cells = split(t, ',');
        for (auto& c : cells) c = trim(c);
        if (!header_seen) {
            if (cells != std::vector<std::string>{"spot", "strike", "maturity", "price"})
                throw std::invalid_argument(path +
                                            ": expected header 'spot,strike,maturity,price'");
            header_seen = true;
            continue;
        }
        if (cells.size() != 4) {
            errors.push_back(path + ":" + std::to_string(lineno) + ": expected 4 fields, got " +
                             std::to_string(cells.size()));
            continue;
        }
        double v[4];
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) {
            try {
                std::size_t used = 0;
                v[i] = std::stod(cells[i], &used);
                if (used != cells[i].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                errors.push_back(path + ":" + std::to_string(lineno) + ": cannot parse '" +
                                 cells[i] + "' as a number");
                ok = false;
            }
        }
        if (ok) rows.push_back({lineno, asymvol::MarketQuote{v[0], v[1], v[2], v[3]}});
    }
    if (!header_seen) throw std::invalid_argument(path + ": empty quote file");
}

void read_quotes_json(const std::string& path, std::vector<QuoteRow>& rows,
                      std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open quote file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    if (!doc.is_array()) throw std::invalid_argument(path + ": expected a JSON array of quotes");
    long idx = 0;
    for (const auto& el : doc) {
        ++idx;
        try {
            if (!el.is_object()) throw std::invalid_argument("element is not an object");
            asymvol::MarketQuote q{el.at("spot").get<double>(), el.at("strike").get<double>(),
                                   el.at("maturity").get<double>(), el.at("price").get<double>()};
            rows.push_back({idx, q});
        } catch (const std::exception& e) {
            errors.push_back(path + ":" + std::to_string(idx) + ": " + e.what());
        }
    }
}

int run_implied(const ImpliedArgs& a) {
    std::ofstream file;
    std::ostream& os = open_output(a.output, file);

    if (a.quotes_path.empty()) {
        if (!a.have_spot || !a.have_strike || !a.have_maturity || !a.have_price)
            throw std::invalid_argument(
                "single-quote mode requires --spot, --strike, --maturity and --price "
                "(or use --quotes FILE)");
        const asymvol::MarketQuote q{a.spot, a.strike, a.maturity, a.price};
        const auto ls = solve_quote(q, a);
        const auto fields = solution_fields(ls);
        if (a.format == "json") {
            write_json_object(os, fields);
            os << "\n";
        } else {
            write_csv_header(os, fields);
            write_csv_row(os, fields);
        }
        return 0;
    }

    std::vector<QuoteRow> quotes;
    std::vector<std::string> errors;
    const auto dot = a.quotes_path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : a.quotes_path.substr(dot + 1);
    if (ext == "json")
        read_quotes_json(a.quotes_path, quotes, errors);
    else
        read_quotes_csv(a.quotes_path, quotes, errors);

    std::vector<std::vector<Field>> rows;
    for (const auto& qr : quotes) {
        try {
            const auto ls = solve_quote(qr.q, a);
            auto fields = solution_fields(ls);
            fields.insert(fields.begin(), int_field("row", qr.line));
            rows.push_back(std::move(fields));
        } catch (const std::exception& e) {
            errors.push_back(a.quotes_path + ":" + std::to_string(qr.line) + ": " + e.what());
        }
    }
    write_rows(os, a.format, rows);
    for (const auto& e : errors) std::cerr << e << "\n";
    return errors.empty() ? 0 : 2;
}

// ---------------------------------------------------------------- forward --

struct ForwardArgs {
    double x = 0.0;
    double theta = 0.0;
    std::string regime;
    int order = 2;
    std::string format = "csv";
    std::string output;
    bool verbose = false;
};

// Exact counterpart of each regime's series at S=1, T=1, K=e^x, sigma=theta.
double exact_ratio(asymvol::ExpansionRegime r, double x, double theta) {
    using namespace asymvol;
    const MarketQuote q{1.0, std::exp(x), 1.0, {}};
    switch (r) {
    case ExpansionRegime::short_maturity:
    case ExpansionRegime::large_strike: return time_value(q, theta);
    case ExpansionRegime::large_maturity: return covered_call(q, theta);
    case ExpansionRegime::atm_small: return atm_call_closed_form(theta);
    case ExpansionRegime::atm_large: return covered_call(MarketQuote{1.0, 1.0, 1.0, {}}, theta);
    }
    throw std::logic_error("unhandled regime");
}

asymvol::SeriesEval series_eval(asymvol::ExpansionRegime r, double x, double theta, int order) {
    using namespace asymvol;
    switch (r) {
    case ExpansionRegime::short_maturity: return tv_series_small_theta_diag(x, theta, order);
    case ExpansionRegime::large_strike: return tv_series_large_strike_diag(x, theta, order);
    case ExpansionRegime::large_maturity: return cc_series_large_theta_diag(x, theta, order);
    case ExpansionRegime::atm_small: return atm_tv_series_diag(theta, order);
    case ExpansionRegime::atm_large: return atm_cc_series_diag(theta, order);
    }
    throw std::logic_error("unhandled regime");
}

bool is_atm(asymvol::ExpansionRegime r) {
    return r == asymvol::ExpansionRegime::atm_small || r == asymvol::ExpansionRegime::atm_large;
}

int run_forward(const ForwardArgs& a) {
    using namespace asymvol;
    const auto regime = parse_regime_or_fail(a.regime);
    if (is_atm(regime) && a.x != 0.0)
        throw std::invalid_argument("--x must be omitted (or 0) for at-the-money regimes");

    const auto se = series_eval(regime, a.x, a.theta, a.order);
    const double exact = exact_ratio(regime, a.x, a.theta);
    const std::vector<Field> row = {
        num_field("x", a.x),
        num_field("theta", a.theta),
        str_field("regime", std::string(to_string(regime))),
        int_field("N", a.order),
        num_field("series_value", se.value),
        num_field("exact_value", exact),
        num_field("abs_error", std::abs(se.value - exact)),
        num_field("last_term", se.last_term),
    };
    std::ofstream file;
    std::ostream& os = open_output(a.output, file);
    write_rows(os, a.format, {row});
    return 0;
}

// ------------------------------------------------------------------ table --

struct AxisArgs {
    std::optional<double> fixed;
    std::optional<double> min, max;
    int count = 0;
    std::string spacing = "linear";
    bool has_grid_flag() const { return min || max || count > 0; }
};

struct TableArgs {
    std::string regime;
    AxisArgs x, theta;
    std::string orders = "0,1,2,3";
    std::string format = "csv";
    std::string output;
    bool verbose = false;
};

std::vector<double> build_axis(const AxisArgs& a, const char* name) {
    if (a.fixed) {
        if (a.has_grid_flag())
            throw std::invalid_argument(std::string("--") + name +
                                        " conflicts with its grid flags");
        return {*a.fixed};
    }
    if (!a.min || !a.max || a.count == 0)
        throw std::invalid_argument(std::string(name) + " grid requires --" + name + "-min, --" +
                                    name + "-max and --" + name + "-count");
    if (a.count < 2) throw std::invalid_argument(std::string(name) + " grid count must be >= 2");
    std::vector<double> pts(a.count);
    if (a.spacing == "geometric") {
        if (!(*a.min > 0.0) || !(*a.max > 0.0))
            throw std::invalid_argument("geometric spacing requires positive endpoints");
        const double la = std::log(*a.min), lb = std::log(*a.max);
        for (int i = 0; i < a.count; ++i)
            pts[i] = std::exp(la + (lb - la) * i / (a.count - 1));
    } else {
        for (int i = 0; i < a.count; ++i)
            pts[i] = *a.min + (*a.max - *a.min) * i / (a.count - 1);
    }
    return pts;
}

std::vector<int> parse_orders(const std::string& s) {
    std::vector<int> out;
    for (const auto& tok : split(s, ',')) {
        const std::string t = trim(tok);
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(t, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad order list entry '" + t + "'");
        }
        if (used != t.size() || n < 0)
            throw std::invalid_argument("bad order list entry '" + t + "'");
        out.push_back(n);
    }
    if (out.empty()) throw std::invalid_argument("order list is empty");
    return out;
}

int run_table(const TableArgs& a) {
    using namespace asymvol;
    const auto regime = parse_regime_or_fail(a.regime);
    const bool atm = is_atm(regime);
    if (atm && (a.x.fixed || a.x.has_grid_flag()))
        throw std::invalid_argument("at-the-money regimes have no x axis");

    AxisArgs xaxis = a.x;
    if (atm) xaxis.fixed = 0.0;
    const auto xs = build_axis(xaxis, "x");
    const auto thetas = build_axis(a.theta, "theta");
    for (const double t : thetas)
        if (!(t > 0.0)) throw std::invalid_argument("theta grid must be positive");
    const auto orders = parse_orders(a.orders);

    std::vector<std::vector<Field>> rows;
    for (const double x : xs) {
        for (const double theta : thetas) {
            const double exact = exact_ratio(regime, x, theta);
            const double lambda = (exact > 0.0 && exact < 1.0)
                                      ? -1.0 / std::log(exact)
                                      : std::numeric_limits<double>::quiet_NaN();
            const bool outside = !(exact > 0.0 && exact < 1.0) || lambda >= 1.0;
            for (const int n : orders) {
                const auto se = series_eval(regime, x, theta, n);
                const double abs_err = std::abs(se.value - exact);
                const double norm =
                    abs_err / (regime_prefactor(regime, x, theta) *
                               remainder_scale(regime, x, theta, n));
                rows.push_back({
                    num_field("x", x),
                    num_field("theta", theta),
                    str_field("regime", std::string(to_string(regime))),
                    int_field("N", n),
                    num_field("lambda", lambda),
                    num_field("series_value", se.value),
                    num_field("exact_value", exact),
                    num_field("abs_error", abs_err),
                    num_field("rel_error", exact > 0.0
                                               ? abs_err / exact
                                               : std::numeric_limits<double>::quiet_NaN()),
                    num_field("normalized_remainder", norm),
                    str_field("flag",
                              outside ? "outside-regime" : (lambda > 0.5 ? "warn" : "ok")),
                });
            }
        }
    }
    std::ofstream file;
    std::ostream& os = open_output(a.output, file);
    write_rows(os, a.format, rows);
    return 0;
}

// ----------------------------------------------------------------- coeffs --

struct CoeffArgs {
    std::string family;
    int order = -1;
    std::string z = "0";
    double beta = 0.0;
    bool have_beta = false;
    double gamma = 0.0;
    double alpha1 = 0.0;
    std::string alpha; // comma list a_1,a_2,...
    std::string format = "csv";
    std::string output;
    bool verbose = false;
};

std::vector<Field> rational_row(long k, const asymvol::Rational& v) {
    return {int_field("k", k),
            {"numerator", boost::multiprecision::numerator(v).str(),
             "\"" + boost::multiprecision::numerator(v).str() + "\""},
            {"denominator", boost::multiprecision::denominator(v).str(),
             "\"" + boost::multiprecision::denominator(v).str() + "\""},
            num_field("value", asymvol::to_double(v))};
}

int run_coeffs(const CoeffArgs& a) {
    using namespace asymvol;
    if (a.order < 0) throw std::invalid_argument("--order is required and must be >= 0");
    if (a.order > 30) throw std::invalid_argument("--order is capped at 30");

    std::vector<std::vector<Field>> rows;
    if (a.family == "a" || a.family == "b" || a.family == "c") {
        const Rational z = parse_rational(a.z);
        for (int k = 0; k <= a.order; ++k) {
            const Rational v = a.family == "a"   ? coeff::a_coeff_exact(k, z)
                               : a.family == "b" ? coeff::b_coeff_exact(k, z)
                                                 : coeff::c_coeff_exact(k, z);
            rows.push_back(rational_row(k, v));
        }
    } else if (a.family == "eta") {
        if (a.order < 1) throw std::invalid_argument("eta needs --order >= 1");
        const auto eta = coeff::eta_sequence(a.order);
        for (int k = 0; k < a.order; ++k) rows.push_back(rational_row(k, eta[k]));
    } else if (a.family == "inversion") {
        if (a.order < 1) throw std::invalid_argument("inversion needs --order >= 1");
        if (!a.have_beta) throw std::invalid_argument("inversion needs --beta");
        std::vector<double> alphas = {1.0, a.alpha1};
        if (!a.alpha.empty()) {
            alphas.resize(1);
            for (const auto& tok : split(a.alpha, ','))
                alphas.push_back(std::stod(trim(tok)));
        }
        const auto v = ts::solve_inversion(a.beta, a.gamma, alphas, a.order);
        for (int i = 1; i <= a.order; ++i) {
            for (int j = i - 1; j >= 0; --j) {
                rows.push_back({int_field("i", i), int_field("j", j),
                                int_field("position", ts::position(i, j)),
                                num_field("value", v.coeff(i, j))});
            }
        }
    } else {
        throw std::invalid_argument("unknown family '" + a.family +
                                    "' (choose a|b|c|eta|inversion)");
    }
    std::ofstream file;
    std::ostream& os = open_output(a.output, file);
    write_rows(os, a.format, rows);
    return 0;
}

void add_common_flags(CLI::App* cmd, std::string& format, std::string& output, bool& verbose,
                      const std::string& default_format) {
    format = default_format;
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", output, "Write to file instead of stdout");
    cmd->add_flag("--verbose", verbose, "Banner on stderr");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Implied lognormal volatility via asymptotic expansions"};
    app.require_subcommand(1);

    ImpliedArgs ia;
    auto* implied = app.add_subcommand("implied", "Invert call prices to implied volatility");
    implied->add_option("--spot", ia.spot, "Spot price")->each([&](const std::string&) {
        ia.have_spot = true;
    });
    implied->add_option("--strike", ia.strike, "Strike")->each([&](const std::string&) {
        ia.have_strike = true;
    });
    implied->add_option("--maturity", ia.maturity, "Maturity in years")
        ->each([&](const std::string&) { ia.have_maturity = true; });
    implied->add_option("--price", ia.price, "Observed call price")
        ->each([&](const std::string&) { ia.have_price = true; });
    implied->add_option("--quotes", ia.quotes_path,
                        "Quote file (CSV with header spot,strike,maturity,price, or JSON array)");
    implied->add_option("--regime", ia.regime, "auto|short|large-t|large-k|atm|exact");
    implied->add_option("--order", ia.order, "ATM series terms (regime atm)");
    implied->add_flag("--no-refine", ia.no_refine, "Return the raw expansion seed");
    add_common_flags(implied, ia.format, ia.output, ia.verbose, "json");

    ForwardArgs fa;
    auto* forward = app.add_subcommand("forward", "Evaluate a forward series vs the exact price");
    forward->add_option("--x", fa.x, "Log-moneyness ln(K/S)");
    forward->add_option("--theta", fa.theta, "Total volatility sigma*sqrt(T)")->required();
    forward->add_option("--regime", fa.regime, "short|large-k|large-t|atm-small|atm-large")
        ->required();
    forward->add_option("--order", fa.order, "Truncation order N");
    add_common_flags(forward, fa.format, fa.output, fa.verbose, "csv");

    TableArgs ta;
    auto* table = app.add_subcommand("table", "Series-accuracy sweep over a (x, theta) grid");
    table->add_option("--regime", ta.regime, "short|large-k|large-t|atm-small|atm-large")
        ->required();
    table->add_option("--x", ta.x.fixed, "Single x value (instead of an x grid)");
    table->add_option("--x-min", ta.x.min, "x grid start");
    table->add_option("--x-max", ta.x.max, "x grid end");
    table->add_option("--x-count", ta.x.count, "x grid size (>= 2)");
    table->add_option("--x-spacing", ta.x.spacing, "linear|geometric")
        ->check(CLI::IsMember({"linear", "geometric"}));
    table->add_option("--theta", ta.theta.fixed, "Single theta value");
    table->add_option("--theta-min", ta.theta.min, "theta grid start");
    table->add_option("--theta-max", ta.theta.max, "theta grid end");
    table->add_option("--theta-count", ta.theta.count, "theta grid size (>= 2)");
    table->add_option("--theta-spacing", ta.theta.spacing, "linear|geometric")
        ->check(CLI::IsMember({"linear", "geometric"}));
    table->add_option("--orders", ta.orders, "Comma list of truncation orders");
    add_common_flags(table, ta.format, ta.output, ta.verbose, "csv");

    CoeffArgs ca;
    auto* coeffs = app.add_subcommand("coeffs", "Dump a coefficient family exactly");
    coeffs->add_option("--family", ca.family, "a|b|c|eta|inversion")->required();
    coeffs->add_option("--order", ca.order, "Highest order (<= 30)")->required();
    coeffs->add_option("--z", ca.z, "Evaluation point for a|b|c (rational, e.g. 1/8)");
    coeffs->add_option("--beta", ca.beta, "Master-equation beta (inversion)")
        ->each([&](const std::string&) { ca.have_beta = true; });
    coeffs->add_option("--gamma", ca.gamma, "Master-equation gamma (inversion)");
    coeffs->add_option("--alpha1", ca.alpha1, "First series coefficient alpha_1 (inversion)");
    coeffs->add_option("--alpha", ca.alpha, "Comma list alpha_1,alpha_2,... (inversion)");
    add_common_flags(coeffs, ca.format, ca.output, ca.verbose, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (implied->parsed()) {
            if (ia.verbose) std::cerr << "asymvol implied\n";
            return run_implied(ia);
        }
        if (forward->parsed()) {
            if (fa.verbose) std::cerr << "asymvol forward\n";
            return run_forward(fa);
        }
        if (table->parsed()) {
            if (ta.verbose) std::cerr << "asymvol table\n";
            return run_table(ta);
        }
        if (coeffs->parsed()) {
            if (ca.verbose) std::cerr << "asymvol coeffs\n";
            return run_coeffs(ca);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

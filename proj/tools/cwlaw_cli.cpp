// Command-line surface: exact tail tables, the limiting law, samplers, and
// the verification suite. All numeric CSV output uses 17 significant digits
// so regression baselines round-trip bit-exactly.
//
// Exit codes: 0 success (verify: all checks passed), 1 verification failure,
// 2 usage error.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwlaw/asymptotics.hpp"
#include "cwlaw/model.hpp"
#include "cwlaw/report_json.hpp"
#include "cwlaw/sampling.hpp"
#include "cwlaw/special_functions.hpp"
#include "cwlaw/verification.hpp"

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::int64_t count = 1;

    std::vector<double> points() const {
        std::vector<double> xs;
        xs.reserve(static_cast<std::size_t>(count));
        if (count == 1) {
            xs.push_back(min);
            return xs;
        }
        for (std::int64_t i = 0; i < count; ++i) {
            xs.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
        return xs;
    }
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw CLI::ValidationError("--out", "cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

GridSpec parse_grid(const std::vector<double>& raw) {
    GridSpec grid;
    grid.min = raw[0];
    grid.max = raw[1];
    grid.count = static_cast<std::int64_t>(raw[2]);
    if (grid.count < 1) throw CLI::ValidationError("--x", "count must be >= 1");
    if (grid.min > grid.max) throw CLI::ValidationError("--x", "min must be <= max");
    return grid;
}

int cmd_exact_tail(std::int64_t n, const GridSpec& grid, const std::string& format, Output& out) {
    const cwlaw::LimitLaw law;
    const auto table = cwlaw::build_log_weight_table({n, 1.0, 0.0});
    const cwlaw::CriticalTailCache cache(table);
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    int excluded = 0;
    nlohmann::json rows = nlohmann::json::array();
    if (format == "csv") out.stream() << "x,exact_tail,limit_tail,ratio,corrected_ratio,envelope\n";
    for (double x : grid.points()) {
        const double exact = cache.tail(x);
        const double limit = 1.0 - law.cdf_F(x);
        const double ratio = exact / limit;
        const double corrected = exact / (limit * (1.0 + law.correction_G(x) / sqrt_n));
        double envelope = std::numeric_limits<double>::quiet_NaN();
        try {
            envelope = law.error_envelope(n, x);
        } catch (const std::domain_error&) {
            ++excluded;  // outside [0, n^{1/12}]: reported as nan/null
        }
        if (format == "csv") {
            out.stream() << num(x) << ',' << num(exact) << ',' << num(limit) << ',' << num(ratio) << ','
                         << num(corrected) << ',' << num(envelope) << '\n';
        } else {
            rows.push_back({{"x", x},
                            {"exact_tail", cwlaw::finite_or_null(exact)},
                            {"limit_tail", cwlaw::finite_or_null(limit)},
                            {"ratio", cwlaw::finite_or_null(ratio)},
                            {"corrected_ratio", cwlaw::finite_or_null(corrected)},
                            {"envelope", cwlaw::finite_or_null(envelope)}});
        }
    }
    if (format == "json") {
        out.stream() << nlohmann::json{{"n", n}, {"excluded", excluded}, {"rows", rows}}.dump(2) << '\n';
    }
    return 0;
}

int cmd_limit_law(const GridSpec& grid, const std::string& format, Output& out) {
    const cwlaw::LimitLaw law;
    int excluded = 0;
    nlohmann::json rows = nlohmann::json::array();
    if (format == "csv") out.stream() << "x,F,G,p1,p2\n";
    for (double x : grid.points()) {
        const double F = law.cdf_F(x);
        const double G = law.correction_G(x);
        if (!std::isfinite(G)) ++excluded;
        if (format == "csv") {
            out.stream() << num(x) << ',' << num(F) << ',' << num(G) << ',' << num(law.p1(x)) << ','
                         << num(law.p2(x)) << '\n';
        } else {
            rows.push_back({{"x", x},
                            {"F", cwlaw::finite_or_null(F)},
                            {"G", cwlaw::finite_or_null(G)},
                            {"p1", cwlaw::finite_or_null(law.p1(x))},
                            {"p2", cwlaw::finite_or_null(law.p2(x))}});
        }
    }
    if (format == "json") {
        out.stream() << nlohmann::json{{"excluded", excluded}, {"rows", rows}}.dump(2) << '\n';
    }
    return 0;
}

int cmd_sample(const cwlaw::ModelParams& params, bool glauber, bool emit_pmf, std::int64_t draws,
               std::int64_t sweeps, std::int64_t burn_in, std::uint64_t seed, const std::string& format,
               Output& out) {
    const auto table = cwlaw::build_log_weight_table(params);
    if (glauber) {
        cwlaw::GlauberChain chain(params, seed);
        const auto empirical = chain.run(sweeps, burn_in);
        std::vector<double> exact(static_cast<std::size_t>(params.n) + 1);
        for (std::int64_t k = 0; k <= params.n; ++k) exact[static_cast<std::size_t>(k)] = table.pmf(k);
        const double tv = cwlaw::tv_distance(empirical, exact);
        if (format == "csv") {
            out.stream() << "s,probability\n";
            for (std::int64_t k = 0; k <= params.n; ++k) {
                out.stream() << (2 * k - params.n) << ',' << num(empirical[static_cast<std::size_t>(k)]) << '\n';
            }
            out.stream() << "# tv_vs_exact=" << num(tv) << '\n';
        } else {
            nlohmann::json rows = nlohmann::json::array();
            for (std::int64_t k = 0; k <= params.n; ++k) {
                rows.push_back({{"s", 2 * k - params.n}, {"probability", empirical[static_cast<std::size_t>(k)]}});
            }
            out.stream() << nlohmann::json{{"tv_vs_exact", tv}, {"rows", rows}}.dump(2) << '\n';
        }
        return 0;
    }

    cwlaw::ExactSampler sampler(table, seed);
    const auto sampled = sampler.sample(draws);
    if (emit_pmf) {
        std::map<std::int64_t, std::int64_t> counts;
        for (std::int64_t s : sampled) counts[s] += 1;
        if (format == "csv") {
            out.stream() << "s,probability\n";
            for (const auto& [s, c] : counts) {
                out.stream() << s << ',' << num(static_cast<double>(c) / static_cast<double>(draws)) << '\n';
            }
        } else {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& [s, c] : counts) {
                rows.push_back({{"s", s}, {"probability", static_cast<double>(c) / static_cast<double>(draws)}});
            }
            out.stream() << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
        }
    } else {
        if (format == "csv") {
            out.stream() << "draw,s\n";
            for (std::size_t i = 0; i < sampled.size(); ++i) {
                out.stream() << i << ',' << sampled[i] << '\n';
            }
        } else {
            out.stream() << nlohmann::json{{"draws", sampled}}.dump(2) << '\n';
        }
    }
    return 0;
}

int cmd_verify(const std::string& check, bool all, const std::vector<std::int64_t>& n_values,
               const std::vector<double>& x_values, Output& out) {
    using cwlaw::LatticeParity;
    const cwlaw::LimitLaw law;
    std::vector<cwlaw::VerificationReport> reports;

    auto n_or = [&](std::vector<std::int64_t> fallback) { return n_values.empty() ? fallback : n_values; };
    auto x_or = [&](std::vector<double> fallback) { return x_values.empty() ? fallback : x_values; };

    if (all) {
        reports = cwlaw::run_default_suite(n_values, x_values);
    } else if (check == "j-lemma") {
        reports.push_back(cwlaw::check_J_lemma());
    } else if (check == "stirling") {
        reports.push_back(cwlaw::check_stirling());
    } else if (check == "oracle") {
        reports.push_back(cwlaw::check_exact_law_oracle());
    } else if (check == "integral-approx-decreasing") {
        reports.push_back(cwlaw::check_integral_approx_decreasing(
            [&law](double t) { return law.p1(t); }, 10.0, 50.0, std::pow(100.0, 0.75), LatticeParity::even));
    } else if (check == "integral-approx-lipschitz") {
        reports.push_back(cwlaw::check_integral_approx_lipschitz(
            [&law](double t) { return law.p2(t); }, [&law](double t) { return law.p2_prime(t); }, -50.0, 50.0,
            std::pow(100.0, 0.75), 1.5, LatticeParity::even));
    } else if (check == "tail-sum-bound") {
        reports.push_back(cwlaw::check_tail_sum_bound(n_or({2000, 5000})));
    } else if (check == "eq12-identity") {
        reports.push_back(cwlaw::check_eq12_identity(n_or({1000, 10000}), x_or({0.0, 0.5, 1.0})));
    } else if (check == "bn-estimate") {
        reports.push_back(cwlaw::check_bn_estimate(n_or({1000, 10000})));
    } else if (check == "bnx-estimate") {
        reports.push_back(cwlaw::check_bnx_estimate(n_or({1000, 10000}), x_or({0.0, 0.5, 1.0, 1.5, 2.0, 2.5})));
    } else if (check == "deep-tail-terms") {
        reports.push_back(cwlaw::check_deep_tail_terms(n_or({1000, 10000, 100000})));
    } else if (check == "bounded-densities") {
        reports.push_back(cwlaw::check_bounded_densities());
    } else if (check == "monotone-densities") {
        reports.push_back(cwlaw::check_monotone_densities());
    } else if (check == "weight-expansion") {
        reports.push_back(cwlaw::check_weight_expansion(n_or({1000}).front()));
    } else if (check == "tail-ratio-critical") {
        std::vector<cwlaw::ModelParams> params;
        for (std::int64_t n : n_or({1000, 10000})) params.push_back({n, 1.0, 0.0});
        reports.push_back(cwlaw::scan_tail_ratio(cwlaw::Regime::critical, params, x_values));
    } else if (check == "tail-ratio-unique") {
        std::vector<cwlaw::ModelParams> params;
        for (std::int64_t n : n_or({1000, 10000})) params.push_back({n, 0.5, 0.0});
        reports.push_back(cwlaw::scan_tail_ratio(cwlaw::Regime::unique, params, x_values));
    } else if (check == "tail-ratio-pair") {
        std::vector<cwlaw::ModelParams> params;
        for (std::int64_t n : n_or({1000, 10000})) params.push_back({n, 2.0, 0.0});
        reports.push_back(cwlaw::scan_tail_ratio(cwlaw::Regime::pair, params, x_values));
    } else if (check == "berry-esseen") {
        reports.push_back(cwlaw::check_berry_esseen(n_or({10000})));
    } else if (check == "corollary") {
        auto ns = n_or({10000, 100000, 1000000});
        while (ns.size() < 3) ns.push_back(ns.back() * 10);
        reports.push_back(cwlaw::check_corollary_limit(x_or({0.0, 0.5, 1.0}), ns));
    } else {
        throw CLI::ValidationError("--check", "unknown check id '" + check + "'");
    }

    const auto bundle = cwlaw::report_bundle(reports);
    out.stream() << bundle.dump(2) << '\n';
    return bundle["all_passed"].get<bool>() ? 0 : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and limiting laws of the Curie-Weiss magnetization"};
    app.require_subcommand(1);

    std::int64_t n = 100;
    double beta = 1.0;
    double h = 0.0;
    std::vector<double> x_raw;
    std::vector<std::int64_t> n_list;
    std::vector<double> x_list;
    std::string format = "csv";
    std::string out_path;
    std::string check_id;
    bool all_checks = false;
    bool glauber = false;
    bool emit_pmf = false;
    std::int64_t draws = 1000;
    std::int64_t sweeps = 10000;
    std::int64_t burn_in = 0;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output path (default stdout)");
    };

    auto* exact_tail = app.add_subcommand("exact-tail", "exact critical tail vs the limit prediction");
    exact_tail->add_option("--n", n, "number of spins")->required()->check(CLI::PositiveNumber);
    exact_tail->add_option("--x", x_raw, "grid: min max count")->expected(3)->required();
    add_common(exact_tail);

    auto* limit_law = app.add_subcommand("limit-law", "tabulate F, G, p1, p2 (independent of n)");
    limit_law->add_option("--x", x_raw, "grid: min max count")->expected(3)->required();
    add_common(limit_law);

    auto* sample = app.add_subcommand("sample", "draw from the exact law or run Glauber dynamics");
    sample->set_help_flag("--help", "print help");  // frees -h for the field option
    sample->add_option("--n", n, "number of spins")->required()->check(CLI::PositiveNumber);
    sample->add_option("--beta", beta)->check(CLI::PositiveNumber);
    sample->add_option("--h", h, "external field");
    sample->add_flag("--glauber", glauber, "heat-bath chain instead of the exact sampler");
    sample->add_flag("--pmf", emit_pmf, "emit the empirical pmf instead of raw draws");
    sample->add_option("--draws", draws)->check(CLI::PositiveNumber);
    sample->add_option("--sweeps", sweeps)->check(CLI::PositiveNumber);
    sample->add_option("--burn-in", burn_in)->check(CLI::NonNegativeNumber);
    sample->add_option("--seed", seed);
    add_common(sample);

    std::vector<double> n_raw;  // accepts 1e4-style values
    auto* verify = app.add_subcommand("verify", "run verification checks, emit a JSON report bundle");
    verify->add_option("--check", check_id, "check id (see README)");
    verify->add_flag("--all", all_checks, "run the whole suite");
    verify->add_option("--n", n_raw, "n values for n-parameterised checks");
    verify->add_option("--x", x_list, "x values for x-parameterised checks");
    verify->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
        Output out(out_path);
        if (exact_tail->parsed()) return cmd_exact_tail(n, parse_grid(x_raw), format, out);
        if (limit_law->parsed()) return cmd_limit_law(parse_grid(x_raw), format, out);
        if (sample->parsed()) {
            return cmd_sample({n, beta, h}, glauber, emit_pmf, draws, sweeps, burn_in, seed, format, out);
        }
        if (verify->parsed()) {
            if (!all_checks && check_id.empty()) {
                throw CLI::ValidationError("verify", "either --check <id> or --all is required");
            }
            for (double v : n_raw) {
                if (!(v >= 1.0) || v != std::floor(v) || v > 9e15) {
                    throw CLI::ValidationError("--n", "values must be positive integers");
                }
                n_list.push_back(static_cast<std::int64_t>(v));
            }
            for (char& c : check_id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            return cmd_verify(check_id, all_checks, n_list, x_list, out);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

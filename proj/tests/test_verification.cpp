#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <json.hpp>

#include "cwlaw/report_json.hpp"
#include "cwlaw/verification.hpp"

using Catch::Approx;
using namespace cwlaw;

namespace {
const LimitLaw law;
}

TEST_CASE("J lemma check passes with exact zero margin") {
    const auto report = check_J_lemma();
    REQUIRE(report.passed);
    REQUIRE(report.worst_case == 0.0);  // the stated derivative values are hit exactly
    REQUIRE_FALSE(report.precondition_violation);
}

TEST_CASE("integral approximation bound for a decreasing integrand") {
    const double p = std::pow(100.0, 0.75);
    for (auto parity : {LatticeParity::even, LatticeParity::odd}) {
        const auto report = check_integral_approx_decreasing(
            [](double t) { return law.p1(t); }, 10.0, 50.0, p, parity);
        REQUIRE(report.passed);
        REQUIRE(report.worst_case <= 0.0);
    }

    // constant integrand: lattice sum and integral agree to the 2-epsilon bound
    const auto flat = check_integral_approx_decreasing([](double) { return 1e-3; }, 4.0, 20.0, 7.0,
                                                       LatticeParity::even);
    REQUIRE(flat.passed);

    // degenerate range with at most one lattice point
    const auto tiny = check_integral_approx_decreasing([](double t) { return law.p1(t); }, 10.0, 12.0, p,
                                                       LatticeParity::odd);
    REQUIRE(tiny.passed);

    // increasing integrand violates the hypothesis, reported as such
    const auto bad = check_integral_approx_decreasing([](double t) { return t * t; }, 10.0, 50.0, p,
                                                      LatticeParity::even);
    REQUIRE(bad.precondition_violation);
    REQUIRE_FALSE(bad.passed);
}

TEST_CASE("integral approximation bound under a Lipschitz envelope") {
    // sup |p2| + |p2'| is about 1.45, attained near t = 1.8
    const double p = std::pow(10000.0, 0.75);
    const auto report = check_integral_approx_lipschitz(
        [](double t) { return law.p2(t); }, [](double t) { return law.p2_prime(t); },
        -5000.0, 5000.0, p, 1.5, LatticeParity::even);
    REQUIRE(report.passed);
    REQUIRE(report.worst_case <= 0.0);

    const auto zero = check_integral_approx_lipschitz([](double) { return 0.0; }, [](double) { return 0.0; },
                                                      0.0, 100.0, 10.0, 1.0, LatticeParity::odd);
    REQUIRE(zero.passed);

    // claimed K below the actual sup of |f| + |f'|
    const auto bad = check_integral_approx_lipschitz(
        [](double t) { return law.p2(t); }, [](double t) { return law.p2_prime(t); },
        -5000.0, 5000.0, p, 0.5, LatticeParity::even);
    REQUIRE(bad.precondition_violation);
}

TEST_CASE("wing bound check: rate holds from a couple thousand spins on") {
    const auto report = check_tail_sum_bound({2000, 5000});
    REQUIRE(report.passed);
    REQUIRE(report.worst_case <= 0.0);
    REQUIRE(report.estimated_constant.has_value());
    // smallest n where exp(-0.004 n) dominates, from the built-in scan
    REQUIRE(*report.estimated_constant >= 1000.0);
    REQUIRE(*report.estimated_constant <= 1800.0);

    // the stated rate genuinely fails at n = 1000: reported honestly
    const auto early = check_tail_sum_bound({1000});
    REQUIRE_FALSE(early.passed);
    REQUIRE(early.worst_case > 0.0);
}

TEST_CASE("bounded densities: measured sup is grid-stable") {
    const auto report = check_bounded_densities();
    REQUIRE(report.passed);
    REQUIRE(report.estimated_constant.has_value());
    REQUIRE(*report.estimated_constant >= 1.0);  // p1 alone contributes 1 at t = 0
    REQUIRE(std::isfinite(*report.estimated_constant));
}

TEST_CASE("monotone decay of the densities beyond t = 9") {
    const auto report = check_monotone_densities();
    REQUIRE(report.passed);
}

TEST_CASE("weight expansion constant is about one quarter and n-stable") {
    const auto r1 = check_weight_expansion(1000);
    REQUIRE(r1.passed);
    REQUIRE(*r1.estimated_constant == Approx(0.25).epsilon(0.01));
    const auto r2 = check_weight_expansion(10000);
    const double ratio = *r1.estimated_constant / *r2.estimated_constant;
    REQUIRE(ratio >= 0.5);
    REQUIRE(ratio <= 2.0);
    REQUIRE_THROWS_AS(check_weight_expansion(99), std::invalid_argument);
}

TEST_CASE("bulk estimate checks report finite scaled errors") {
    const auto bn = check_bn_estimate({1000, 10000});
    REQUIRE(bn.passed);
    REQUIRE(bn.worst_case == Approx(0.0381652).epsilon(1e-3));  // dominated by n = 1000

    const auto bnx = check_bnx_estimate({1000, 10000}, {0.0, 0.5, 1.0, 1.5, 2.0, 2.5});
    REQUIRE(bnx.passed);
    REQUIRE(bnx.worst_case < 0.5);

    const auto deep = check_deep_tail_terms({1000, 10000, 100000});
    REQUIRE(deep.passed);
}

TEST_CASE("tail ratio scans") {
    const auto critical = scan_tail_ratio(Regime::critical, {{1000, 1.0, 0.0}}, {});
    REQUIRE(critical.passed);
    REQUIRE(*critical.estimated_constant == Approx(0.609890).epsilon(1e-3));
    REQUIRE(critical.excluded_points == 0);

    const auto unique = scan_tail_ratio(Regime::unique, {{10000, 0.5, 0.0}}, {});
    REQUIRE(unique.passed);
    REQUIRE(*unique.estimated_constant == Approx(0.564190).epsilon(1e-3));

    const auto pair = scan_tail_ratio(Regime::pair, {{10000, 2.0, 0.0}}, {});
    REQUIRE(pair.passed);
    REQUIRE(*pair.estimated_constant == Approx(3.235404).epsilon(1e-2));

    REQUIRE_THROWS_AS(scan_tail_ratio(Regime::critical, {{1000, 2.0, 0.0}}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(scan_tail_ratio(Regime::critical, {{1000, 1.0, 0.0}}, {99.0}), std::invalid_argument);
}

TEST_CASE("corollary convergence check reports the measured gap honestly") {
    const auto report = check_corollary_limit({0.5}, {1000, 10000, 100000});
    // |d_n - L| is still an order of magnitude above the 5%-relative target at
    // these n (the gap closes like n^{-1/6}); the check must say so
    REQUIRE_FALSE(report.passed);
    REQUIRE(report.worst_case > 1.0);
    REQUIRE_THROWS_AS(check_corollary_limit({0.5}, {1000, 10000}), std::invalid_argument);
}

TEST_CASE("berry-esseen sup measurement") {
    const auto report = check_berry_esseen({10000});
    REQUIRE(report.passed);
    REQUIRE(*report.estimated_constant == Approx(0.057703).epsilon(1e-3));
}

TEST_CASE("oracle gate and stirling sweep") {
    const auto oracle = check_exact_law_oracle();
    REQUIRE(oracle.passed);
    REQUIRE(oracle.worst_case <= 1e-12);

    const auto stirling = check_stirling();
    REQUIRE(stirling.passed);
    REQUIRE(stirling.worst_case <= 0.0);
}

TEST_CASE("eq12 identity check inside and outside its validity range") {
    const auto ok = check_eq12_identity({100, 10000}, {0.0, 0.5, 1.0});
    REQUIRE(ok.passed);
    REQUIRE(ok.worst_case <= 1e-12);

    // x = 1.9 at n = 100 puts the cut n^{3/4} x = 60.1 above n/2 = 50: the
    // wing term then covers k >= 75 while the tail starts at k = 81
    const auto outside = check_eq12_identity({100}, {1.9});
    REQUIRE_FALSE(outside.passed);
    REQUIRE(outside.worst_case > 1.0);
}

TEST_CASE("report json shape") {
    auto report = check_J_lemma();
    report.excluded_points = 2;
    const nlohmann::json j = report;
    REQUIRE(j.at("check_id").is_string());
    REQUIRE(j.at("passed").is_boolean());
    REQUIRE(j.at("precondition_violation").is_boolean());
    REQUIRE(j.at("grid").is_string());
    REQUIRE(j.at("worst_case").is_number());
    REQUIRE(j.at("excluded_points").get<int>() == 2);
    REQUIRE(j.at("notes").is_string());

    VerificationReport nan_report;
    nan_report.check_id = "x";
    nan_report.worst_case = std::nan("");
    const nlohmann::json jn = nan_report;
    REQUIRE(jn.at("worst_case").is_null());          // no NaN in serialized output
    REQUIRE(jn.at("estimated_constant").is_null());

    const auto bundle = report_bundle({report});
    REQUIRE(bundle.at("schema") == "cwlaw-verify-report/1");
    REQUIRE(bundle.at("reports").size() == 1);
    REQUIRE(bundle.at("all_passed").is_boolean());
    REQUIRE_FALSE(bundle.dump().find("nan") != std::string::npos);
}

#pragma once

#include <cmath>

#include <json.hpp>

#include "cwlaw/verification.hpp"

// JSON form of verification reports. Non-finite numbers are emitted as null
// (the schema forbids NaN/Inf); excluded grid points are carried as a count.

namespace cwlaw {

inline nlohmann::json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline void to_json(nlohmann::json& j, const VerificationReport& report) {
    j = nlohmann::json{
        {"check_id", report.check_id},
        {"passed", report.passed},
        {"precondition_violation", report.precondition_violation},
        {"grid", report.grid},
        {"worst_case", finite_or_null(report.worst_case)},
        {"estimated_constant",
         report.estimated_constant ? finite_or_null(*report.estimated_constant) : nlohmann::json(nullptr)},
        {"excluded_points", report.excluded_points},
        {"notes", report.notes},
    };
}

inline nlohmann::json report_bundle(const std::vector<VerificationReport>& reports) {
    bool all_passed = true;
    int excluded_total = 0;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& report : reports) {
        all_passed = all_passed && report.passed;
        excluded_total += report.excluded_points;
        entries.push_back(report);
    }
    return nlohmann::json{
        {"schema", "cwlaw-verify-report/1"},
        {"all_passed", all_passed},
        {"excluded_total", excluded_total},
        {"reports", entries},
    };
}

}  // namespace cwlaw

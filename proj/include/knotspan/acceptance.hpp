#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace knotspan::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit = 0.0;  // seconds; part of the pass condition
};

/// Criteria are numbered 1..9. An exception inside a criterion is reported
/// as a failure with its message.
CriterionResult run_criterion(int id, std::uint64_t seed = 0);
std::vector<CriterionResult> run_all(std::uint64_t seed = 0);

/// "PASS [3] lipschitz (2.41 s): ..." style line.
std::string format_line(const CriterionResult& r);

nlohmann::json to_json(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& rs);

}  // namespace knotspan::acceptance

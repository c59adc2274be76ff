#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace orderk {

struct ValidationConfig {
    std::uint64_t seed = 20240601;
    unsigned threads = 2;
    double scale = 1.0;          // multiplies every Monte Carlo budget
    double sim_rate_bias = 1.0;  // test hook: scales the rate fed to simulators only
};

struct ValidationCheck {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string oracle;  // what produced the expected value
};

struct ValidationReport {
    std::string suite;
    std::vector<ValidationCheck> checks;

    [[nodiscard]] bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Suites: combinatorics | ppok | subordinators | timechange | dde | ruin | all.
ValidationReport run_suite(const std::string& suite, const ValidationConfig& config);

std::vector<std::string> suite_names();

/// Acceptance criteria 1..10 as individually runnable check groups
/// (criterion 11, thread determinism, is orchestrated by the caller).
ValidationReport run_criterion(int criterion, const ValidationConfig& config);

nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace orderk

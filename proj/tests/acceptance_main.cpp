// Acceptance suite: runs every acceptance criterion at full budget and
// prints one pass/fail line per criterion. Exits with the number of failed
// criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "orderk/validation.hpp"

namespace {

struct CriterionResult {
    std::string label;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

std::string worst_check(const orderk::ValidationReport& report) {
    std::string worst;
    for (const auto& c : report.checks) {
        if (!c.pass) {
            std::ostringstream os;
            os << c.name << " stat=" << c.statistic << " thr=" << c.threshold;
            if (!worst.empty()) worst += "; ";
            worst += os.str();
        }
    }
    return worst.empty() ? "all checks ok" : worst;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    orderk::ValidationConfig cfg;
    cfg.seed = 20240601;
    cfg.threads = 4;
    cfg.scale = 1.0;

    const struct {
        int index;
        const char* label;
        double time_limit;  // seconds; 0 = unlimited
    } criteria[] = {
        {1, "combinatorics oracle equivalence", 10.0},
        {2, "PPoK moments by simulation", 60.0},
        {3, "PPoK correlation decay", 0.0},
        {4, "subordinator Laplace identity", 0.0},
        {5, "TCPPoK-I pmf triple agreement", 0.0},
        {6, "TCPPoK-I moments and overdispersion", 0.0},
        {7, "governing-equation residuals", 120.0},
        {8, "TCPPoK-II asymptotic slopes", 0.0},
        {9, "ruin classical oracle", 120.0},
        {10, "ruin ODE consistency", 0.0},
    };

    std::vector<CriterionResult> results;
    for (const auto& c : criteria) {
        CriterionResult r;
        r.label = c.label;
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto report = orderk::run_criterion(c.index, cfg);
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
            r.pass = report.pass();
            r.detail = worst_check(report);
            if (c.time_limit > 0.0 && r.seconds > c.time_limit) {
                r.pass = false;
                std::ostringstream os;
                os << "runtime " << r.seconds << "s exceeded the " << c.time_limit << "s limit";
                r.detail = os.str();
            }
        } catch (const std::exception& e) {
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] C%-2d %-40s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", c.index, r.label.c_str(),
                    r.seconds, r.pass ? "" : r.detail.c_str());
        std::fflush(stdout);
        results.push_back(r);
    }

    // Criterion 11: repeated `validate all` runs with a fixed seed must be
    // byte-identical across 1, 4 and 8 worker threads.
    {
        CriterionResult r;
        r.label = "determinism across worker threads";
        const auto start = std::chrono::steady_clock::now();
        const char* bin = std::getenv("ORDERK_CLI_BIN");
        if (bin == nullptr) {
            r.pass = false;
            r.detail = "ORDERK_CLI_BIN not set";
        } else {
            r.pass = true;
            std::vector<std::string> outputs;
            for (int threads : {1, 4, 8}) {
                std::ostringstream cmd;
                const std::string out = "/tmp/orderk_accept_t" + std::to_string(threads) + ".json";
                cmd << bin << " validate all --seed 777 --scale 0.05 --threads " << threads
                    << " --out " << out << " 2>/dev/null";
                const int status = std::system(cmd.str().c_str());
                if (WEXITSTATUS(status) != 0) {
                    r.pass = false;
                    r.detail = "validate all failed with threads=" + std::to_string(threads);
                    break;
                }
                outputs.push_back(slurp(out));
            }
            if (r.pass) {
                for (std::size_t i = 1; i < outputs.size(); ++i) {
                    if (outputs[i] != outputs[0] || outputs[i].empty()) {
                        r.pass = false;
                        r.detail = "reports differ across thread counts";
                    }
                }
            }
        }
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] C11 %-40s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.label.c_str(),
                    r.seconds, r.pass ? "" : r.detail.c_str());
        results.push_back(r);
    }

    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}

// End-to-end checks of the command-line surface: schemas, determinism,
// exit codes, and the validation canary hook. The binary path arrives via
// ORDERK_CLI_BIN.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_bin() {
    const char* env = std::getenv("ORDERK_CLI_BIN");
    REQUIRE_MESSAGE(env != nullptr, "ORDERK_CLI_BIN must point at the CLI binary");
    return env;
}

int run(const std::string& args) {
    const std::string cmd = cli_bin() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("simulate: csv schema and byte-identical reruns") {
    CHECK(run("simulate --process ppok --k 3 --lambda 1.2 --t-max 10 --n-paths 5 --seed 42 "
              "--out /tmp/orderk_a.csv") == 0);
    CHECK(run("simulate --process ppok --k 3 --lambda 1.2 --t-max 10 --n-paths 5 --seed 42 "
              "--out /tmp/orderk_b.csv") == 0);
    const std::string a = slurp("/tmp/orderk_a.csv");
    CHECK(a == slurp("/tmp/orderk_b.csv"));
    CHECK(a.rfind("t,value,path_id\n", 0) == 0);
    CHECK(a.find(",4\n") != std::string::npos);  // five path ids 0..4

    // A different seed gives different content.
    CHECK(run("simulate --process ppok --k 3 --lambda 1.2 --t-max 10 --n-paths 5 --seed 43 "
              "--out /tmp/orderk_c.csv") == 0);
    CHECK(a != slurp("/tmp/orderk_c.csv"));
}

TEST_CASE("simulate: larger batch order raises the terminal counts") {
    auto mean_terminal = [](const std::string& path) {
        std::ifstream is(path);
        std::string line;
        std::getline(is, line);  // header
        double last_value = 0.0;
        double last_id = -1.0;
        double sum = 0.0;
        int paths = 0;
        while (std::getline(is, line)) {
            double t, v, id;
            REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &v, &id) == 3);
            if (id != last_id && last_id >= 0.0) {
                sum += last_value;
                ++paths;
            }
            last_id = id;
            last_value = v;
        }
        sum += last_value;
        ++paths;
        return sum / paths;
    };
    CHECK(run("simulate --process ppok --k 3 --lambda 1.2 --t-max 10 --n-paths 40 --seed 99 "
              "--out /tmp/orderk_k3.csv") == 0);
    CHECK(run("simulate --process ppok --k 5 --lambda 1.2 --t-max 10 --n-paths 40 --seed 99 "
              "--out /tmp/orderk_k5.csv") == 0);
    CHECK(mean_terminal("/tmp/orderk_k5.csv") > mean_terminal("/tmp/orderk_k3.csv"));
}

TEST_CASE("simulate: time-changed paths in both modes") {
    CHECK(run("simulate --process tcppok1 --sub gamma --sub-params 3,4 --k 3 --lambda 1.2 "
              "--t-max 5 --n-paths 2 --step 0.05 --seed 7 --out /tmp/orderk_tc1.csv") == 0);
    CHECK(run("simulate --process tcppok2 --sub ig --sub-params 1,1 --k 3 --lambda 1.2 "
              "--t-max 5 --n-paths 2 --step 0.05 --seed 7 --format json --out "
              "/tmp/orderk_tc2.json") == 0);
    CHECK(slurp("/tmp/orderk_tc2.json").find("\"paths\"") != std::string::npos);
}

TEST_CASE("pmf: totals accompany the table") {
    CHECK(run("pmf --process tcppok1 --sub gamma --sub-params 1,1 --k 2 --lambda 1 --t 1 "
              "--n-max 25 --method closed --out /tmp/orderk_pmf.csv") == 0);
    const std::string table = slurp("/tmp/orderk_pmf.csv");
    CHECK(table.rfind("n,pmf,stderr\n", 0) == 0);
    const auto pos = table.find("total,");
    REQUIRE(pos != std::string::npos);
    const double total = std::strtod(table.c_str() + pos + 6, nullptr);
    CHECK(total > 0.97);
    CHECK(total <= 1.0 + 1e-9);

    // n-max 0 emits just the zero row plus the total.
    CHECK(run("pmf --process ppok --k 2 --lambda 1 --t 1 --n-max 0 "
              "--out /tmp/orderk_pmf0.csv") == 0);
    const std::string zero = slurp("/tmp/orderk_pmf0.csv");
    CHECK(zero.find("\n0,") != std::string::npos);
    CHECK(zero.find("\n1,") == std::string::npos);
}

TEST_CASE("ruin: schema, monotone deficit columns, solver surface") {
    CHECK(run("ruin --process tcppok1 --sub drift --k 1 --lambda 1 --premium 2 --claim exp "
              "--claim-mean 1 --u-max 1 --u-step 0.5 --y-max 2 --y-step 0.5 --horizon 80 "
              "--reps 4000 --seed 11 --out /tmp/orderk_ruin.csv "
              "--solver-out /tmp/orderk_ruin_solver.csv") == 0);
    std::ifstream is("/tmp/orderk_ruin.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "u,y,G,stderr");
    double last_u = -1.0, last_g = 0.0;
    std::string line;
    while (std::getline(is, line)) {
        double u, y, g, se;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &u, &y, &g, &se) == 4);
        if (u == last_u) CHECK(g >= last_g);  // non-decreasing in y within a u block
        last_u = u;
        last_g = g;
    }

    // Solver surface shares the schema and starts from the explicit
    // boundary value (lambda/c) integral_0^y (1-F) = 0.5 (1 - e^{-0.5}).
    std::ifstream sv("/tmp/orderk_ruin_solver.csv");
    std::getline(sv, header);
    CHECK(header == "u,y,G,stderr");
    std::getline(sv, line);
    double u, y, g, se;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &u, &y, &g, &se) == 4);
    CHECK(u == 0.0);
    CHECK(y == 0.5);
    CHECK(std::abs(g - 0.5 * (1.0 - std::exp(-0.5))) < 1e-10);
}

TEST_CASE("exit codes: configuration errors are 2") {
    CHECK(run("") == 2);
    CHECK(run("simulate --process bogus") == 2);
    CHECK(run("simulate --sub bogus --process tcppok1") == 2);
    CHECK(run("simulate --process tcppok1 --sub gamma --sub-params 1") == 2);
    CHECK(run("pmf --process tcppok1 --sub ig --sub-params 1,1 --method closed") == 2);
    CHECK(run("ruin --process tcppok2 --sub ig --sub-params 1,1") == 2);
    CHECK(run("validate nosuchsuite") == 2);
    CHECK(run("simulate --k 0") == 2);
}

TEST_CASE("validate: pass, canary failure, and thread determinism" * doctest::timeout(600)) {
    CHECK(run("validate combinatorics --seed 42 --out /tmp/orderk_val.json") == 0);
    CHECK(slurp("/tmp/orderk_val.json").find("\"pass\": true") != std::string::npos);

    // The rate canary must trip the moment checks.
    CHECK(run("validate ppok --seed 42 --scale 0.02 --canary-rate-scale 2.0") == 1);

    // Identical reports across thread counts.
    CHECK(run("validate ppok --seed 42 --scale 0.02 --threads 1 --out /tmp/orderk_t1.json") == 0);
    CHECK(run("validate ppok --seed 42 --scale 0.02 --threads 4 --out /tmp/orderk_t4.json") == 0);
    const std::string t1 = slurp("/tmp/orderk_t1.json");
    CHECK(t1 == slurp("/tmp/orderk_t4.json"));
    CHECK(t1.find("\"oracle\"") != std::string::npos);
}

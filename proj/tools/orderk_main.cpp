// Command-line surface: simulate sample paths, tabulate pmfs, run the ruin
// engine, and drive the analytic-vs-Monte-Carlo validation suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orderk/serialize.hpp"
#include "orderk/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ORDERK_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("ORDERK_SEED must be a 64-bit unsigned integer");
        }
    }
    return 20240601;
}

struct ProcessOptions {
    std::string process = "ppok";
    std::string sub = "drift";
    int k = 3;
    double lambda = 1.2;
    std::vector<double> sub_params;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string format = "csv";
    std::string out;

    void add_flags(CLI::App* cmd, bool allow_inverse) {
        std::vector<std::string> processes{"ppok", "tcppok1"};
        if (allow_inverse) processes.push_back("tcppok2");
        cmd->add_option("--process", process,
                        allow_inverse ? "ppok | tcppok1 | tcppok2" : "ppok | tcppok1")
            ->check(CLI::IsMember(processes));
        cmd->add_option("--sub", sub, "drift | gamma | tempered | ig")
            ->check(CLI::IsMember({"drift", "gamma", "tempered", "ig"}));
        cmd->add_option("--k", k, "group-size order");
        cmd->add_option("--lambda", lambda, "rate per unit time");
        cmd->add_option("--sub-params", sub_params,
                        "subordinator parameters, e.g. --sub-params 3,4")
            ->delimiter(',');
        cmd->add_option("--seed", seed, "rng seed (default from ORDERK_SEED)")
            ->each([this](const std::string&) { seed_given = true; });
        cmd->add_option("--format", format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out, "output path (default stdout)");
    }

    [[nodiscard]] std::uint64_t effective_seed() const {
        return seed_given ? seed : default_seed();
    }
};

orderk::SubordinatorSpec make_subordinator(const ProcessOptions& opt) {
    auto need = [&](std::size_t n) {
        if (opt.sub_params.size() != n)
            throw std::invalid_argument("--sub-params: family '" + opt.sub + "' takes " +
                                        std::to_string(n) + " parameter(s)");
    };
    if (opt.sub == "drift") {
        if (opt.sub_params.empty()) return orderk::SubordinatorSpec::drift(1.0);
        need(1);
        return orderk::SubordinatorSpec::drift(opt.sub_params[0]);
    }
    if (opt.sub == "gamma") {
        need(2);
        return orderk::SubordinatorSpec::gamma_process(opt.sub_params[0], opt.sub_params[1]);
    }
    if (opt.sub == "tempered") {
        need(2);
        return orderk::SubordinatorSpec::tempered_stable(opt.sub_params[0], opt.sub_params[1]);
    }
    if (opt.sub == "ig") {
        need(2);
        return orderk::SubordinatorSpec::inverse_gaussian(opt.sub_params[0], opt.sub_params[1]);
    }
    throw std::invalid_argument("--sub: unknown family '" + opt.sub + "'");
}

orderk::TimeChangedSpec make_spec(const ProcessOptions& opt) {
    orderk::TimeChangedSpec spec{orderk::PoKParams(opt.k, opt.lambda), make_subordinator(opt),
                                 orderk::TimeChangeMode::Direct};
    if (opt.process == "tcppok2") spec.mode = orderk::TimeChangeMode::Inverse;
    return spec;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("--out: cannot open '" + path + "' for writing");
    os << text;
}

struct SimulateCmd {
    ProcessOptions proc;
    double t_max = 10.0;
    int n_paths = 10;
    double step = 0.01;

    int run() const {
        if (!(t_max > 0.0) || n_paths < 1 || !(step > 0.0))
            throw std::invalid_argument("simulate: t-max, n-paths and step must be positive");
        std::vector<orderk::StepSeries> series;
        series.reserve(static_cast<std::size_t>(n_paths));
        const orderk::RngStream root{proc.effective_seed(), 0};
        if (proc.process == "ppok") {
            const orderk::PoKParams params(proc.k, proc.lambda);
            for (int p = 0; p < n_paths; ++p)
                series.push_back(orderk::to_series(
                    orderk::simulate_ppok(params, t_max,
                                          root.child(static_cast<std::uint64_t>(p))),
                    p));
        } else if (proc.process == "tcppok1" || proc.process == "tcppok2") {
            const auto spec = make_spec(proc);
            for (int p = 0; p < n_paths; ++p)
                series.push_back(orderk::to_series(
                    orderk::simulate(spec, t_max, step,
                                     root.child(static_cast<std::uint64_t>(p))),
                    p));
        } else {
            throw std::invalid_argument("--process: unknown process '" + proc.process + "'");
        }
        if (proc.format == "csv") {
            std::ostringstream os;
            orderk::write_paths_csv(os, series);
            write_text(proc.out, os.str());
        } else {
            write_text(proc.out, orderk::paths_to_json(series).dump(2) + "\n");
        }
        return kExitOk;
    }
};

struct PmfCmd {
    ProcessOptions proc;
    double t = 1.0;
    long long n_max = 20;
    std::string method = "closed";
    std::size_t reps = 100000;
    double step = 0.001;
    unsigned threads = 2;

    int run() const {
        std::vector<orderk::McEstimate> table;
        const orderk::RngStream root{proc.effective_seed(), 1};
        if (proc.process == "ppok") {
            const orderk::PoKParams params(proc.k, proc.lambda);
            for (long long n = 0; n <= n_max; ++n)
                table.push_back({orderk::pok_pmf(params, t, n), 0.0, 0});
        } else if (proc.process == "tcppok1") {
            orderk::PmfMethod m = orderk::PmfMethod::Closed;
            if (method == "quadrature")
                m = orderk::PmfMethod::Quadrature;
            else if (method == "mc")
                m = orderk::PmfMethod::MonteCarlo;
            else if (method != "closed")
                throw std::invalid_argument("--method: expected closed|quadrature|mc");
            table = orderk::tcppok1_pmf_table(make_spec(proc), t, n_max, m, reps, root, threads);
        } else if (proc.process == "tcppok2") {
            table = orderk::tcppok2_pmf_table(make_spec(proc), t, n_max, reps, step, root,
                                              threads);
        } else {
            throw std::invalid_argument("--process: unknown process '" + proc.process + "'");
        }
        double total = 0.0;
        for (const auto& e : table) total += e.value;
        if (proc.format == "csv") {
            std::ostringstream os;
            os << "n,pmf,stderr\n";
            for (std::size_t n = 0; n < table.size(); ++n)
                os << n << ',' << orderk::format_double(table[n].value) << ','
                   << orderk::format_double(table[n].stderr_) << '\n';
            os << "total," << orderk::format_double(total) << ",\n";
            write_text(proc.out, os.str());
        } else {
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t n = 0; n < table.size(); ++n)
                rows.push_back(
                    {{"n", n}, {"pmf", table[n].value}, {"stderr", table[n].stderr_}});
            write_text(proc.out, nlohmann::json{{"rows", rows}, {"total", total}}.dump(2) + "\n");
        }
        return kExitOk;
    }
};

struct RuinCmd {
    RuinCmd() { proc.process = "tcppok1"; }

    ProcessOptions proc;
    std::string claim = "exp";
    double claim_mean = 1.0;
    int erlang_shape = 2;
    double erlang_rate = 2.0;
    double premium = 2.0;
    double u_max = 5.0;
    double u_step = 0.5;
    double y_max = 4.0;
    double y_step = 0.5;
    double horizon = 200.0;
    std::size_t reps = 100000;
    double step = 0.01;
    unsigned threads = 2;
    std::string solver_out;

    int run() const {
        orderk::RiskModel model;
        model.premium_rate = premium;
        model.claims = claim == "erlang" ? orderk::ClaimDist::erlang(erlang_shape, erlang_rate)
                                         : orderk::ClaimDist::exponential(claim_mean);
        model.arrivals = make_spec(proc);
        if (model.arrivals.mode != orderk::TimeChangeMode::Direct)
            throw std::invalid_argument("--process: the risk model uses direct-mode arrivals");
        std::vector<double> u_grid;
        for (double u = 0.0; u <= u_max + 1e-12; u += u_step) u_grid.push_back(u);
        std::vector<double> y_grid;
        for (double y = y_step; y <= y_max + 1e-12; y += y_step) y_grid.push_back(y);
        const auto est = orderk::simulate_ruin(model, horizon, reps, u_grid, y_grid, step,
                                               orderk::RngStream{proc.effective_seed(), 2},
                                               threads);
        if (est.horizon_warning)
            std::cerr << "warning: " << orderk::format_double(100.0 * est.late_ruin_fraction)
                      << "% of ruin times fall in the last 10% of the horizon; psi is likely "
                         "understated\n";
        if (proc.format == "csv") {
            std::ostringstream os;
            orderk::write_ruin_csv(os, est);
            write_text(proc.out, os.str());
        } else {
            write_text(proc.out, orderk::ruin_to_json(est).dump(2) + "\n");
        }
        if (!solver_out.empty()) {
            // Governing-equation solution on the same grids, for direct
            // comparison against the Monte Carlo surface.
            std::ostringstream os;
            os << "u,y,G,stderr\n";
            for (double y : y_grid) {
                const auto fp = orderk::solve_g_fixed_point(model, y, u_max, 1e-3 * u_max);
                for (double u : u_grid)
                    os << orderk::format_double(u) << ',' << orderk::format_double(y) << ','
                       << orderk::format_double(fp.curve.at(u)) << ",0\n";
            }
            write_text(solver_out, os.str());
        }
        return kExitOk;
    }
};

struct ValidateCmd {
    std::string suite = "all";
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 2;
    double scale = 1.0;
    double canary_rate_scale = 1.0;
    std::string format = "json";
    std::string out;

    int run() const {
        orderk::ValidationConfig cfg;
        cfg.seed = seed_given ? seed : default_seed();
        cfg.threads = threads;
        cfg.scale = scale;
        cfg.sim_rate_bias = canary_rate_scale;
        const auto report = orderk::run_suite(suite, cfg);
        if (format == "csv") {
            std::ostringstream os;
            os << "name,statistic,threshold,pass,oracle\n";
            for (const auto& c : report.checks)
                os << c.name << ',' << orderk::format_double(c.statistic) << ','
                   << orderk::format_double(c.threshold) << ','
                   << (c.pass ? "true" : "false") << ',' << c.oracle << '\n';
            write_text(out, os.str());
        } else {
            write_text(out, orderk::report_to_json(report).dump(2) + "\n");
        }
        std::cerr << (report.pass() ? "PASS" : "FAIL") << " suite '" << suite << "' ("
                  << report.checks.size() << " checks)\n";
        return report.pass() ? kExitOk : kExitValidationFailure;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order-k counting process toolkit: simulation, pmf tables, ruin engine, "
                 "validation harness"};
    app.require_subcommand(1);

    SimulateCmd sim_cmd;
    auto* sim = app.add_subcommand("simulate", "emit step-function sample paths");
    sim_cmd.proc.add_flags(sim, true);
    sim->add_option("--t-max", sim_cmd.t_max, "horizon");
    sim->add_option("--n-paths", sim_cmd.n_paths, "number of paths");
    sim->add_option("--step", sim_cmd.step, "grid step for time-changed paths");

    PmfCmd pmf_cmd;
    auto* pmf = app.add_subcommand("pmf", "tabulate the pmf with a normalization total");
    pmf_cmd.proc.add_flags(pmf, true);
    pmf->add_option("--t", pmf_cmd.t, "evaluation time");
    pmf->add_option("--n-max", pmf_cmd.n_max, "last pmf row");
    pmf->add_option("--method", pmf_cmd.method, "closed | quadrature | mc (tcppok1)")
        ->check(CLI::IsMember({"closed", "quadrature", "mc"}));
    pmf->add_option("--reps", pmf_cmd.reps, "MC replications");
    pmf->add_option("--step", pmf_cmd.step, "inverse-path grid step (tcppok2)");
    pmf->add_option("--threads", pmf_cmd.threads, "worker threads");

    RuinCmd ruin_cmd;
    auto* ruin = app.add_subcommand("ruin", "Monte Carlo ruin probability and deficit surface");
    ruin_cmd.proc.add_flags(ruin, false);
    ruin->add_option("--claim", ruin_cmd.claim, "exp | erlang");
    ruin->add_option("--claim-mean", ruin_cmd.claim_mean, "mean of exponential claims");
    ruin->add_option("--erlang-shape", ruin_cmd.erlang_shape, "Erlang claim shape");
    ruin->add_option("--erlang-rate", ruin_cmd.erlang_rate, "Erlang claim rate");
    ruin->add_option("--premium", ruin_cmd.premium, "premium rate c");
    ruin->add_option("--u-max", ruin_cmd.u_max);
    ruin->add_option("--u-step", ruin_cmd.u_step);
    ruin->add_option("--y-max", ruin_cmd.y_max);
    ruin->add_option("--y-step", ruin_cmd.y_step);
    ruin->add_option("--horizon", ruin_cmd.horizon);
    ruin->add_option("--reps", ruin_cmd.reps, "MC replications");
    ruin->add_option("--step", ruin_cmd.step, "time-change grid step");
    ruin->add_option("--threads", ruin_cmd.threads, "worker threads");
    ruin->add_option("--solver-out", ruin_cmd.solver_out,
                     "also write the governing-equation solution for the same grids");

    ValidateCmd val_cmd;
    auto* validate = app.add_subcommand("validate", "run a validation suite");
    validate
        ->add_option("suite", val_cmd.suite,
                     "combinatorics | ppok | subordinators | timechange | dde | ruin | all")
        ->check(CLI::IsMember(orderk::suite_names()));
    validate->add_option("--seed", val_cmd.seed, "rng seed (default from ORDERK_SEED)")
        ->each([&val_cmd](const std::string&) { val_cmd.seed_given = true; });
    validate->add_option("--threads", val_cmd.threads, "worker threads");
    validate->add_option("--scale", val_cmd.scale, "MC budget multiplier");
    validate
        ->add_option("--canary-rate-scale", val_cmd.canary_rate_scale,
                     "test hook: bias the simulated rate by this factor")
        ->group("");  // hidden
    validate->add_option("--format", val_cmd.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    validate->add_option("--out", val_cmd.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (sim->parsed()) return sim_cmd.run();
        if (pmf->parsed()) return pmf_cmd.run();
        if (ruin->parsed()) return ruin_cmd.run();
        if (validate->parsed()) return val_cmd.run();
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidationFailure;
    }
    return kExitConfigError;
}

#include "orderk/serialize.hpp"

#include <cstdio>

namespace orderk {

StepSeries to_series(const CountPath& path, int path_id) {
    StepSeries s;
    s.path_id = path_id;
    s.t.reserve(path.jump_times.size() + 2);
    s.value.reserve(path.jump_times.size() + 2);
    s.t.push_back(0.0);
    s.value.push_back(0.0);
    for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
        s.t.push_back(path.jump_times[i]);
        s.value.push_back(static_cast<double>(path.cumulative[i]));
    }
    s.t.push_back(path.horizon);
    s.value.push_back(static_cast<double>(path.terminal_count()));
    return s;
}

StepSeries to_series(const CountGridPath& path, int path_id) {
    StepSeries s;
    s.path_id = path_id;
    s.t = path.grid();
    s.value.reserve(path.counts.size());
    for (auto c : path.counts) s.value.push_back(static_cast<double>(c));
    return s;
}

StepSeries to_series(const SamplePath& path, int path_id) {
    StepSeries s;
    s.path_id = path_id;
    s.t = path.grid();
    s.value = path.values;
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Use the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

void write_paths_csv(std::ostream& os, const std::vector<StepSeries>& series) {
    os << "t,value,path_id\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            os << format_double(s.t[i]) << ',' << format_double(s.value[i]) << ',' << s.path_id
               << '\n';
        }
    }
}

nlohmann::json paths_to_json(const std::vector<StepSeries>& series) {
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& s : series) {
        paths.push_back({{"path_id", s.path_id}, {"t", s.t}, {"value", s.value}});
    }
    return nlohmann::json{{"paths", paths}};
}

void write_ruin_csv(std::ostream& os, const RuinEstimate& estimate) {
    os << "u,y,G,stderr\n";
    for (std::size_t i = 0; i < estimate.u_grid.size(); ++i) {
        for (std::size_t j = 0; j < estimate.y_grid.size(); ++j) {
            const auto& e = estimate.deficit_cdf[i][j];
            os << format_double(estimate.u_grid[i]) << ',' << format_double(estimate.y_grid[j])
               << ',' << format_double(e.value) << ',' << format_double(e.stderr_) << '\n';
        }
    }
}

nlohmann::json ruin_to_json(const RuinEstimate& estimate) {
    nlohmann::json surface = nlohmann::json::array();
    for (std::size_t i = 0; i < estimate.u_grid.size(); ++i) {
        for (std::size_t j = 0; j < estimate.y_grid.size(); ++j) {
            const auto& e = estimate.deficit_cdf[i][j];
            surface.push_back({{"u", estimate.u_grid[i]},
                               {"y", estimate.y_grid[j]},
                               {"G", e.value},
                               {"stderr", e.stderr_}});
        }
    }
    nlohmann::json psi = nlohmann::json::array();
    for (std::size_t i = 0; i < estimate.u_grid.size(); ++i) {
        psi.push_back({{"u", estimate.u_grid[i]},
                       {"psi", estimate.psi[i].value},
                       {"stderr", estimate.psi[i].stderr_}});
    }
    return nlohmann::json{{"horizon", estimate.horizon},
                          {"n_reps", estimate.n_reps},
                          {"late_ruin_fraction", estimate.late_ruin_fraction},
                          {"horizon_warning", estimate.horizon_warning},
                          {"psi", psi},
                          {"surface", surface}};
}

nlohmann::json residual_report_to_json(const ResidualReport& report) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : report.samples) {
        samples.push_back(
            {{"m", s.m}, {"t", s.t}, {"step", s.step}, {"residual", s.residual}});
    }
    nlohmann::json j{{"equation", report.equation},
                     {"steps", report.steps},
                     {"samples", samples}};
    if (report.observed_order) j["observed_order"] = *report.observed_order;
    return j;
}

}  // namespace orderk

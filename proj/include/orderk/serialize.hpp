#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orderk/governing.hpp"
#include "orderk/ppok.hpp"
#include "orderk/ruin.hpp"
#include "orderk/subordinator.hpp"
#include "orderk/time_change.hpp"

namespace orderk {

/// A plottable step-function series; the common denominator of exact jump
/// paths, grid-sampled counting paths and subordinator trajectories.
struct StepSeries {
    int path_id = 0;
    std::vector<double> t;
    std::vector<double> value;
};

StepSeries to_series(const CountPath& path, int path_id);
StepSeries to_series(const CountGridPath& path, int path_id);
StepSeries to_series(const SamplePath& path, int path_id);

/// Shortest-exact decimal rendering (printf %.17g trimmed) so repeated runs
/// emit byte-identical files.
std::string format_double(double v);

/// CSV schema: header "t,value,path_id", one row per step point.
void write_paths_csv(std::ostream& os, const std::vector<StepSeries>& series);

nlohmann::json paths_to_json(const std::vector<StepSeries>& series);

/// CSV schema: header "u,y,G,stderr".
void write_ruin_csv(std::ostream& os, const RuinEstimate& estimate);

nlohmann::json ruin_to_json(const RuinEstimate& estimate);

nlohmann::json residual_report_to_json(const ResidualReport& report);

}  // namespace orderk

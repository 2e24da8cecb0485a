#pragma once

#include "nslab/config.hpp"
#include "nslab/front.hpp"

#include <string>
#include <vector>

namespace nslab {

inline constexpr const char* kToolName = "ns-lab";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunOutcome {
    ShiftResult result;
    ConservationReport conservation;
    std::vector<std::string> notes;
};

// Builds the front, solves nu (symbol sources), and shifts the front. Errors
// name the failing stage.
RunOutcome run(const SimConfig& cfg);

// fronts.csv / fronts.dat / trajectories.csv / report.json under dir.
void export_outputs(const SimConfig& cfg, const RunOutcome& outcome, const std::string& dir);

// One row per front sample: sample_index, q..., x..., N..., nu, Omega.
std::string nu_table(const SimConfig& cfg);

// Axis spec "x1=lo:hi:N,...,u1=lo:hi:N" covering every x and u component.
struct GridAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};
std::vector<GridAxis> parse_state_grid(const std::string& spec, int dim);

// Wave-front and normal-shift force values on the state grid.
std::string force_table(const SimConfig& cfg, const std::vector<GridAxis>& grid);

// "%.17g"
std::string format_real(double v);

} // namespace nslab

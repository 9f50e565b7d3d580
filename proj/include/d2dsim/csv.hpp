#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "d2dsim/experiment.hpp"

namespace d2dsim {

inline constexpr const char* kSweepCsvHeader =
    "scenario,label,n_cu,m_d2d,mean_bpshz,std_bpshz,min,max,mean_served";
inline constexpr const char* kTrialsCsvHeader =
    "scenario,m_d2d,drop_index,seed,sum_bpshz,served,unserved";
inline constexpr const char* kTopologyCsvHeader = "role,index,x_m,y_m";

/// Shortest round-trip decimal form; identical doubles print identically.
std::string format_number(double value);

void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& sweeps);
void write_trials_csv(std::ostream& out, const std::vector<SweepResult>& sweeps);
void write_topology_csv(std::ostream& out, const CellLayout& layout, const Topology& topo);

}  // namespace d2dsim

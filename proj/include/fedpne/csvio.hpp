#pragma once
#include <string>
#include <vector>

#include "fedpne/harness.hpp"

namespace fedpne {

// All floats are written with 17 significant digits so emit -> parse is
// bit-exact. Errors carry the file path and 1-based line number.

// columns: client,round,phase,depth,node_index,x0..x{D-1},reward,regret_increment
void emit_trace(const RunTrace& trace, const std::string& path);
std::vector<PullRecord> parse_trace(const std::string& path);

// columns: round,mean_avg_regret,std_avg_regret,n_seeds
void emit_summary(const AggregatedRegret& agg, const std::string& path);
AggregatedRegret parse_summary(const std::string& path);

// columns: phase,depth,active_nodes,eliminated,events
// `eliminated` counts nodes dropped in that phase; a truncated phase drops none.
void emit_communication(const RunTrace& trace, const std::string& path);

std::string format_double(double v);  // %.17g

} // namespace fedpne

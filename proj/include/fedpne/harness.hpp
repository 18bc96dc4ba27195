#pragma once
#include <cstdint>
#include <numbers>
#include <vector>

#include "fedpne/objectives.hpp"
#include "fedpne/partition.hpp"
#include "fedpne/protocol.hpp"

namespace fedpne {

struct PullRecord {
  int client = 0;
  long long round = 0;  // the client's own pull counter, 1-based
  int phase = 0;
  int depth = 0;
  uint64_t node_index = 0;
  std::vector<double> x;
  double reward = 0;
  double regret_inc = 0;  // fstar - f_global(x)
};

struct PhaseRecord {
  int phase = 0;
  int depth = 0;
  std::vector<NodeId> active;    // set at phase start
  std::vector<char> eliminated;  // per active node; empty when truncated
  bool truncated = false;
  long long events = 0;  // communication events in this phase
};

struct RunTrace {
  std::vector<PullRecord> pulls;
  std::vector<PhaseRecord> phases;
  int completed_phases = 0;  // P (truncated final phase not counted)
  long long comm_events = 0;
  double fstar = 0;
  uint64_t seed = 0;
  int M = 0;
  long long T = 0;
  std::vector<NodeId> final_active;
};

struct FstarEstimate {
  double value = 0;
  std::vector<double> argmax;
};
FstarEstimate estimate_fstar(const Objective& obj, long resolution);

struct RunSetup {
  ServerConfig server;
  ObjectiveEnsemble ensemble;  // M() must match server.M
  double fstar = 1.0;
  double dp_sigma2 = 0.0;  // > 0: independent gaussian added to every reward
};

// One full federated run; a pure function of (setup, seed). Clients are
// simulated sequentially with per-(client, phase) random substreams, so any
// evaluation order would produce the same trace.
RunTrace run_experiment(const RunSetup& setup, uint64_t seed);

struct RegretSummary {
  std::vector<std::vector<double>> per_client;  // cumulative, [client][round-1]
  std::vector<double> average;                  // average over clients per round
  int completed_phases = 0;
  long long comm_events = 0;
  double fstar = 0;
  uint64_t seed = 0;
  int M = 0;
  long long T = 0;
};
RegretSummary cumulative_regret(const RunTrace& trace);

struct CommCheck {
  int P = 0;
  double bound = 0;        // (ln rho^-2)^-1 * ln(M*T*nu1^2/(k*c^2))
  bool applicable = false; // bound argument > 1
  bool pass = false;       // P <= ceil(bound) whenever applicable
};
CommCheck communication_check(const RunTrace& trace, const ServerConfig& cfg);

// Fixed-arm comparison: a jittered uniform mesh of K arms per axis run through
// federated phased elimination (doubling pulls per phase, no smoothness term).
// The radius keeps the same formula but defaults to the Hoeffding constant for
// range-1 rewards since a fixed-arm eliminator has no tuned width parameter.
struct GridBaselineSetup {
  ServerConfig server;  // M, T, c1, delta feed the radius; k is unused
  ObjectiveEnsemble ensemble;
  double fstar = 1.0;
  int K = 100;  // arms per axis
  double radius_c = std::numbers::sqrt2;
};
RunTrace run_grid_baseline(const GridBaselineSetup& setup, uint64_t seed);

struct AggregatedRegret {
  std::vector<double> mean, stddev;  // per round, over seeds
  int n_seeds = 0;
};
AggregatedRegret aggregate_runs(const std::vector<RegretSummary>& runs);

} // namespace fedpne

#pragma once
#include <vector>

#include "fedpne/partition.hpp"

namespace fedpne {

struct ServerConfig {
  int M = 10;           // clients
  long long T = 2000;   // per-client pull budget
  int k = 2;            // partition arity
  double nu1 = 1.0;     // smoothness envelope at the root
  double rho = 0.5;     // per-depth envelope decay
  double c = 0.1;       // confidence radius constant
  double c1 = 1.0;      // confidence log constant
  double delta = 0.1;   // failure probability (defaulted to 1/M upstream)
};

// throws std::invalid_argument naming the violated constraint
void validate(const ServerConfig& cfg);

double log_term(const ServerConfig& cfg);  // ln(c1*T/delta), >= 0 after validation

// per-node sample requirement at depth h: ceil(c^2*ln(c1 T/delta)/nu1^2 * rho^(-2h)).
// Returned as a ceil'd double: at large depths the value exceeds any integer
// type (rho=0.1, h=40 gives ~1e80); callers convert only when it fits a budget.
double threshold_tau(int h, const ServerConfig& cfg);

// per-client share oftau: ceil(tau_h / M), floored at 1 so a phase always advances
double per_client_pulls(int h, const ServerConfig& cfg);

// b = c * sqrt(ln(c1*T/delta) / T_hi)
double confidence_radius(double T_hi, const ServerConfig& cfg);

struct ActiveSet {
  std::vector<NodeId> nodes;  // ascending index, all at `depth`
  int depth = 0;
};

// The server never samples the root (a single node cannot be eliminated), so
// it is expanded once unconditionally. After that the set descends while the
// next level's full sample requirement still fits into one round from the M
// clients (|K|*tau(h+1) <= M) or is trivial (tau(h+1) <= 1). An extra guard
// stops descending once the set would outgrow the remaining total budget,
// which also bounds the degenerate ln(c1*T/delta) = 0 corner where tau == 0.
ActiveSet expand_until_ready(ActiveSet a, const ServerConfig& cfg,
                             long long per_client_budget_left, int depth_cap);

struct PhasePlan {
  int phase = 0;  // 1-based
  int depth = 0;
  std::vector<NodeId> active;
  std::vector<long long> pulls;  // per node, per client
  bool truncated = false;        // budget ran out: sweep-filled, no elimination after
  long long per_client_total() const;
};

// Distributes the phase work. When the full requirement does not fit into the
// remaining budget the plan is marked truncated and pulls are dealt out in
// ascending-index sweeps until the budget is exactly used up.
PhasePlan plan_phase(int phase, const ActiveSet& a, const ServerConfig& cfg,
                     long long per_client_budget_left);

struct ClientReport {
  int client = 0;
  std::vector<double> mean;  // aligned with plan.active
};

// global estimates: plain average of the client means, fixed summation order
std::vector<double> aggregate_reports(const std::vector<ClientReport>& reports);

struct EliminationResult {
  int best = 0;                  // index into plan.active (max estimate, ties -> smallest node)
  std::vector<char> eliminated;  // flag per node
  std::vector<NodeId> survivors;
};

// drop node i iff mu_i + b_i + nu1*rho^h < mu_best - b_best (strict)
EliminationResult eliminate(const PhasePlan& plan, const std::vector<double>& mu,
                            const ServerConfig& cfg);

// children of all survivors, ascending index
std::vector<NodeId> next_active_set(const std::vector<NodeId>& survivors, int k);

} // namespace fedpne

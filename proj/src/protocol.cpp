#include "fedpne/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedpne {

void validate(const ServerConfig& cfg) {
  if (cfg.M < 1) throw std::invalid_argument("M must be >= 1");
  if (cfg.T < 1) throw std::invalid_argument("T must be >= 1");
  if (cfg.T > 1000000000000LL) throw std::invalid_argument("T too large to simulate");
  if (cfg.k < 2) throw std::invalid_argument("k must be >= 2");
  if (!(cfg.nu1 > 0.0)) throw std::invalid_argument("nu1 must be > 0");
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
  if (!(cfg.c > 0.0)) throw std::invalid_argument("c must be > 0");
  if (!(cfg.c1 > 0.0)) throw std::invalid_argument("c1 must be > 0");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
  if (cfg.c1 * (double)cfg.T / cfg.delta < 1.0)
    throw std::invalid_argument("c1*T/delta must be >= 1 (confidence log term would be negative)");
}

double log_term(const ServerConfig& cfg) {
  return std::log(cfg.c1 * (double)cfg.T / cfg.delta);
}

double threshold_tau(int h, const ServerConfig& cfg) {
  if (h < 0) throw std::invalid_argument("depth must be >= 0");
  double raw = cfg.c * cfg.c / (cfg.nu1 * cfg.nu1) * log_term(cfg) * std::pow(cfg.rho, -2.0 * h);
  return std::ceil(raw);
}

double per_client_pulls(int h, const ServerConfig& cfg) {
  double t = std::ceil(threshold_tau(h, cfg) / (double)cfg.M);
  return t < 1.0 ? 1.0 : t;
}

double confidence_radius(double T_hi, const ServerConfig& cfg) {
  if (!(T_hi > 0.0)) throw std::invalid_argument("confidence radius needs T_hi > 0");
  return cfg.c * std::sqrt(log_term(cfg) / T_hi);
}

ActiveSet expand_until_ready(ActiveSet a, const ServerConfig& cfg,
                             long long per_client_budget_left, int depth_cap) {
  auto expand = [&](ActiveSet& s) {
    std::vector<NodeId> next;
    next.reserve(s.nodes.size() * cfg.k);
    for (const NodeId& n : s.nodes)
      for (const NodeId& ch : children(n, cfg.k)) next.push_back(ch);
    s.nodes = std::move(next);
    s.depth += 1;
  };

  double total_budget = (double)cfg.M * (double)per_client_budget_left;
  if (a.depth == 0) {
    if (a.nodes.size() != 1) throw std::invalid_argument("depth-0 active set must be the root alone");
    expand(a);
  }
  while (a.depth < depth_cap) {
    double tau_next = threshold_tau(a.depth + 1, cfg);
    bool ready = (double)a.nodes.size() * tau_next <= (double)cfg.M || tau_next <= 1.0;
    if (!ready) break;
    if ((double)a.nodes.size() * (double)cfg.k > total_budget) break;
    expand(a);
  }
  return a;
}

long long PhasePlan::per_client_total() const {
  return std::accumulate(pulls.begin(), pulls.end(), 0LL);
}

PhasePlan plan_phase(int phase, const ActiveSet& a, const ServerConfig& cfg,
                     long long per_client_budget_left) {
  if (a.nodes.empty()) throw std::invalid_argument("cannot plan a phase for an empty active set");
  if (per_client_budget_left < 1) throw std::invalid_argument("no budget left to plan a phase");
  PhasePlan plan;
  plan.phase = phase;
  plan.depth = a.depth;
  plan.active = a.nodes;
  size_t n = a.nodes.size();
  double t = per_client_pulls(a.depth, cfg);
  if (t * (double)n <= (double)per_client_budget_left) {
    plan.pulls.assign(n, (long long)t);
    plan.truncated = false;
  } else {
    plan.truncated = true;
    long long base = per_client_budget_left / (long long)n;
    long long extra = per_client_budget_left % (long long)n;
    plan.pulls.resize(n);
    for (size_t i = 0; i < n; ++i) plan.pulls[i] = base + ((long long)i < extra ? 1 : 0);
  }
  return plan;
}

std::vector<double> aggregate_reports(const std::vector<ClientReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("cannot aggregate zero reports");
  size_t n = reports.front().mean.size();
  std::vector<double> mu(n, 0.0);
  for (const ClientReport& r : reports) {
    if (r.mean.size() != n) throw std::invalid_argument("client reports disagree on node count");
    for (size_t i = 0; i < n; ++i) mu[i] += r.mean[i];
  }
  for (size_t i = 0; i < n; ++i) mu[i] /= (double)reports.size();
  return mu;
}

EliminationResult eliminate(const PhasePlan& plan, const std::vector<double>& mu,
                            const ServerConfig& cfg) {
  size_t n = plan.active.size();
  if (mu.size() != n) throw std::invalid_argument("estimate count does not match the plan");
  if (plan.truncated) throw std::invalid_argument("truncated phases are not eliminated");
  EliminationResult res;
  res.best = 0;
  for (size_t i = 1; i < n; ++i)
    if (mu[i] > mu[res.best]) res.best = (int)i;  // ties keep the smaller index
  double smooth = cfg.nu1 * std::pow(cfg.rho, plan.depth);
  double b_best = confidence_radius((double)cfg.M * (double)plan.pulls[res.best], cfg);
  double cut = mu[res.best] - b_best;
  res.eliminated.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    double b_i = confidence_radius((double)cfg.M * (double)plan.pulls[i], cfg);
    if (mu[i] + b_i + smooth < cut) res.eliminated[i] = 1;
  }
  for (size_t i = 0; i < n; ++i)
    if (!res.eliminated[i]) res.survivors.push_back(plan.active[i]);
  return res;
}

std::vector<NodeId> next_active_set(const std::vector<NodeId>& survivors, int k) {
  std::vector<NodeId> next;
  next.reserve(survivors.size() * k);
  for (const NodeId& n : survivors)
    for (const NodeId& ch : children(n, k)) next.push_back(ch);
  std::sort(next.begin(), next.end());
  return next;
}

} // namespace fedpne

#include "fedpne/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedpne/privacy.hpp"
#include "fedpne/rng.hpp"

namespace fedpne {

namespace {
// substream purpose tags; tag 1 is taken by ensemble construction
constexpr uint64_t kNoiseTag = 2;
constexpr uint64_t kDpTag = 3;
constexpr uint64_t kGridTag = 4;
} // namespace

FstarEstimate estimate_fstar(const Objective& obj, long resolution) {
  GridScan scan = scan_grid(obj, resolution);
  return {scan.max_value, scan.argmax};
}

RunTrace run_experiment(const RunSetup& setup, uint64_t seed) {
  const ServerConfig& cfg = setup.server;
  validate(cfg);
  if (setup.ensemble.M() != cfg.M)
    throw std::invalid_argument("ensemble size does not match the client count M");
  if (setup.dp_sigma2 < 0.0) throw std::invalid_argument("dp sigma^2 must be >= 0");

  PartitionSpec pspec{cfg.k, setup.ensemble.base.domain};
  int depth_cap = pspec.max_depth();

  RunTrace trace;
  trace.fstar = setup.fstar;
  trace.seed = seed;
  trace.M = cfg.M;
  trace.T = cfg.T;

  ActiveSet act{{NodeId{0, 1}}, 0};
  std::vector<long long> rounds(cfg.M, 0);
  long long used = 0;
  int p = 0;
  while (used < cfg.T) {
    ++p;
    act = expand_until_ready(act, cfg, cfg.T - used, depth_cap);
    PhasePlan plan = plan_phase(p, act, cfg, cfg.T - used);
    size_t n = plan.active.size();

    std::vector<std::vector<double>> centers(n);
    std::vector<double> regret(n);
    for (size_t i = 0; i < n; ++i) {
      centers[i] = representative_point(plan.active[i], pspec);
      regret[i] = setup.fstar - setup.ensemble.global_value(centers[i]);
    }

    std::vector<ClientReport> reports(cfg.M);
    for (int m = 0; m < cfg.M; ++m) {
      auto stream = substream(seed, kNoiseTag, (uint64_t)m, (uint64_t)p);
      auto dp_stream = substream(seed, kDpTag, (uint64_t)m, (uint64_t)p);
      ClientReport rep;
      rep.client = m;
      rep.mean.assign(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        long long cnt = plan.pulls[i];
        double sum = 0.0;
        for (long long t = 0; t < cnt; ++t) {
          double r = setup.ensemble.sample_reward(m, centers[i], stream);
          if (setup.dp_sigma2 > 0.0) r = privatize_reward(r, setup.dp_sigma2, dp_stream);
          sum += r;
          ++rounds[m];
          trace.pulls.push_back({m, rounds[m], p, plan.depth, plan.active[i].index,
                                 centers[i], r, regret[i]});
        }
        if (cnt > 0) rep.mean[i] = sum / (double)cnt;
      }
      reports[m] = std::move(rep);
    }

    used += plan.per_client_total();
    long long events = 2LL * cfg.M;  // one broadcast receipt + one report per client
    trace.comm_events += events;

    PhaseRecord rec{p, plan.depth, plan.active, {}, plan.truncated, events};
    if (plan.truncated) {
      trace.phases.push_back(std::move(rec));
      break;
    }
    std::vector<double> mu = aggregate_reports(reports);
    EliminationResult res = eliminate(plan, mu, cfg);
    rec.eliminated = res.eliminated;
    trace.phases.push_back(std::move(rec));
    ++trace.completed_phases;
    act = ActiveSet{next_active_set(res.survivors, cfg.k), plan.depth + 1};
  }
  trace.final_active = act.nodes;
  return trace;
}

RegretSummary cumulative_regret(const RunTrace& trace) {
  RegretSummary s;
  s.completed_phases = trace.completed_phases;
  s.comm_events = trace.comm_events;
  s.fstar = trace.fstar;
  s.seed = trace.seed;
  s.M = trace.M;
  s.T = trace.T;
  s.per_client.assign(trace.M, {});
  for (const PullRecord& rec : trace.pulls) {
    auto& series = s.per_client[rec.client];
    if ((long long)series.size() + 1 != rec.round)
      throw std::invalid_argument("trace rounds are not consecutive per client");
    double prev = series.empty() ? 0.0 : series.back();
    series.push_back(prev + rec.regret_inc);
  }
  size_t len = s.per_client.empty() ? 0 : s.per_client.front().size();
  for (const auto& series : s.per_client)
    if (series.size() != len)
      throw std::invalid_argument("clients have unequal round counts");
  s.average.assign(len, 0.0);
  for (const auto& series : s.per_client)
    for (size_t t = 0; t < len; ++t) s.average[t] += series[t];
  for (size_t t = 0; t < len; ++t) s.average[t] /= (double)trace.M;
  return s;
}

CommCheck communication_check(const RunTrace& trace, const ServerConfig& cfg) {
  CommCheck chk;
  chk.P = trace.completed_phases;
  double arg = (double)cfg.M * (double)cfg.T * cfg.nu1 * cfg.nu1 / ((double)cfg.k * cfg.c * cfg.c);
  chk.applicable = arg > 1.0;
  chk.bound = chk.applicable ? std::log(arg) / std::log(1.0 / (cfg.rho * cfg.rho)) : 0.0;
  chk.pass = !chk.applicable || (double)chk.P <= std::ceil(chk.bound);
  return chk;
}

RunTrace run_grid_baseline(const GridBaselineSetup& setup, uint64_t seed) {
  const ServerConfig& cfg = setup.server;
  validate(cfg);
  if (setup.ensemble.M() != cfg.M)
    throw std::invalid_argument("ensemble size does not match the client count M");
  if (setup.K < 1) throw std::invalid_argument("grid baseline needs K >= 1");
  if (!(setup.radius_c > 0.0)) throw std::invalid_argument("grid radius constant must be > 0");

  const Box& dom = setup.ensemble.base.domain;
  int D = dom.dim();
  double narms_d = std::pow((double)setup.K, D);
  if (narms_d > (double)cfg.T)
    throw std::invalid_argument("grid baseline infeasible: K^D arms exceed the per-client budget T");
  long long narms = (long long)narms_d;

  // jittered mesh: one uniform start offset per axis inside the first 1/K slab
  auto jitter_stream = substream(seed, kGridTag);
  std::vector<double> start(D), step(D);
  for (int d = 0; d < D; ++d) {
    double width = dom.hi[d] - dom.lo[d];
    step[d] = width / (double)setup.K;
    start[d] = dom.lo[d] + uniform01(jitter_stream) * step[d];
  }
  std::vector<std::vector<double>> arms((size_t)narms);
  {
    std::vector<long> idx(D, 0);
    for (long long a = 0; a < narms; ++a) {
      std::vector<double> x(D);
      for (int d = 0; d < D; ++d) x[d] = start[d] + (double)idx[d] * step[d];
      arms[(size_t)a] = std::move(x);
      int d = 0;
      while (d < D && ++idx[d] == setup.K) {
        idx[d] = 0;
        ++d;
      }
    }
  }
  std::vector<double> regret((size_t)narms);
  for (long long a = 0; a < narms; ++a)
    regret[(size_t)a] = setup.fstar - setup.ensemble.global_value(arms[(size_t)a]);

  RunTrace trace;
  trace.fstar = setup.fstar;
  trace.seed = seed;
  trace.M = cfg.M;
  trace.T = cfg.T;

  double logt = log_term(cfg);
  std::vector<long long> active(narms);
  for (long long a = 0; a < narms; ++a) active[a] = a;
  std::vector<double> sums((size_t)narms, 0.0);
  std::vector<long long> totals((size_t)narms, 0);
  std::vector<long long> rounds(cfg.M, 0);
  long long used = 0;
  int p = 0;
  while (used < cfg.T) {
    ++p;
    long long budget = cfg.T - used;
    long long r = p < 40 ? (1LL << p) : budget;  // doubling pulls per arm per client
    size_t n = active.size();
    std::vector<long long> counts(n, r);
    bool truncated = (double)r * (double)n > (double)budget;
    if (truncated) {
      long long base = budget / (long long)n, extra = budget % (long long)n;
      for (size_t i = 0; i < n; ++i) counts[i] = base + ((long long)i < extra ? 1 : 0);
    }

    for (int m = 0; m < cfg.M; ++m) {
      auto stream = substream(seed, kNoiseTag, (uint64_t)m, (uint64_t)p);
      for (size_t i = 0; i < n; ++i) {
        long long a = active[i];
        for (long long t = 0; t < counts[i]; ++t) {
          double rew = setup.ensemble.sample_reward(m, arms[(size_t)a], stream);
          sums[(size_t)a] += rew;
          ++totals[(size_t)a];
          ++rounds[m];
          trace.pulls.push_back({m, rounds[m], p, 0, (uint64_t)(a + 1),
                                 arms[(size_t)a], rew, regret[(size_t)a]});
        }
      }
    }
    long long phase_per_client = 0;
    for (long long ctot : counts) phase_per_client += ctot;
    used += phase_per_client;
    long long events = 2LL * cfg.M;
    trace.comm_events += events;

    PhaseRecord rec;
    rec.phase = p;
    rec.depth = 0;
    rec.active.reserve(n);
    for (long long a : active) rec.active.push_back(NodeId{0, (uint64_t)(a + 1)});
    rec.truncated = truncated;
    rec.events = events;
    if (truncated) {
      trace.phases.push_back(std::move(rec));
      break;
    }

    size_t best = 0;
    auto mu = [&](size_t i) { return sums[(size_t)active[i]] / (double)totals[(size_t)active[i]]; };
    for (size_t i = 1; i < n; ++i)
      if (mu(i) > mu(best)) best = i;
    double b_best = setup.radius_c * std::sqrt(logt / (double)totals[(size_t)active[best]]);
    double cut = mu(best) - b_best;
    rec.eliminated.assign(n, 0);
    std::vector<long long> survivors;
    for (size_t i = 0; i < n; ++i) {
      double b_i = setup.radius_c * std::sqrt(logt / (double)totals[(size_t)active[i]]);
      if (mu(i) + b_i < cut)
        rec.eliminated[i] = 1;
      else
        survivors.push_back(active[i]);
    }
    trace.phases.push_back(std::move(rec));
    ++trace.completed_phases;
    active = std::move(survivors);
  }
  trace.final_active.clear();
  for (long long a : active) trace.final_active.push_back(NodeId{0, (uint64_t)(a + 1)});
  return trace;
}

AggregatedRegret aggregate_runs(const std::vector<RegretSummary>& runs) {
  if (runs.empty()) throw std::invalid_argument("cannot aggregate zero runs");
  size_t len = runs.front().average.size();
  for (const RegretSummary& r : runs) {
    if (r.M != runs.front().M || r.T != runs.front().T || r.average.size() != len)
      throw std::invalid_argument("aggregated runs must share the same configuration");
  }
  AggregatedRegret agg;
  agg.n_seeds = (int)runs.size();
  agg.mean.assign(len, 0.0);
  agg.stddev.assign(len, 0.0);
  for (const RegretSummary& r : runs)
    for (size_t t = 0; t < len; ++t) agg.mean[t] += r.average[t];
  for (size_t t = 0; t < len; ++t) agg.mean[t] /= (double)runs.size();
  if (runs.size() > 1) {
    for (const RegretSummary& r : runs)
      for (size_t t = 0; t < len; ++t) {
        double d = r.average[t] - agg.mean[t];
        agg.stddev[t] += d * d;
      }
    for (size_t t = 0; t < len; ++t)
      agg.stddev[t] = std::sqrt(agg.stddev[t] / (double)(runs.size() - 1));
  }
  return agg;
}

} // namespace fedpne

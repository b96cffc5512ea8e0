#include "mts/admission.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mts {

std::vector<double> weight_v(const std::vector<std::vector<int>>& types_per_sts,
                             std::span<const TaskType> catalog, double lts_length_s) {
  if (types_per_sts.empty()) throw std::invalid_argument("weight_v: empty task history");
  if (!(lts_length_s > 0.0)) throw std::invalid_argument("weight_v: LTS length must be positive");
  const std::size_t U = types_per_sts.front().size();
  std::vector<double> v(U, 0.0);
  for (const auto& row : types_per_sts) {
    if (row.size() != U) throw std::invalid_argument("weight_v: ragged task history");
    for (std::size_t u = 0; u < U; ++u) v[u] += catalog[row[u]].delay_limit_s;
  }
  for (auto& x : v) x /= lts_length_s;
  return v;
}

double revenue(std::span<const int> y, std::span<const double> v) {
  if (y.size() != v.size()) throw std::invalid_argument("revenue: size mismatch");
  double g = 0.0;
  for (std::size_t u = 0; u < y.size(); ++u) g += y[u] * v[u];
  return g;
}

double cost(std::span<const double> power_trace) {
  return std::accumulate(power_trace.begin(), power_trace.end(), 0.0);
}

double utility(double revenue, double cost, double eta) { return revenue - eta * cost; }

double average_utility(std::span<const double> utilities) {
  if (utilities.empty()) return 0.0;
  return std::accumulate(utilities.begin(), utilities.end(), 0.0) /
         static_cast<double>(utilities.size());
}

std::vector<int> solve_admission(std::span<const double> v, std::span<const int> feasible,
                                 std::span<const double> user_cost, double eta) {
  if (v.size() != feasible.size() || v.size() != user_cost.size()) {
    throw std::invalid_argument("solve_admission: size mismatch");
  }
  std::vector<int> y(v.size(), 0);
  for (std::size_t u = 0; u < v.size(); ++u) {
    y[u] = (feasible[u] != 0 && v[u] - eta * user_cost[u] > 0.0) ? 1 : 0;
  }
  return y;
}

int LtsPlan::total_violations() const { return std::accumulate(violations.begin(), violations.end(), 0); }

bool LtsPlan::any_flagged() const {
  return std::any_of(flagged.begin(), flagged.end(), [](int f) { return f != 0; });
}

ComplexityModel planning_model(const ScenarioConfig& cfg) {
  return cfg.baseline == Baseline::TraditionalComputing ? ComplexityModel::traditional(cfg)
                                                        : ComplexityModel::semantic(cfg);
}

ComplexityModel true_model(const ScenarioConfig& cfg) { return ComplexityModel::semantic(cfg); }

std::vector<double> drop_rank(const LtsContext& ctx) {
  std::vector<double> rank(ctx.num_users(), 0.0);
  for (const auto& ch : ctx.channels) {
    for (std::size_t u = 0; u < rank.size(); ++u) {
      double best = 0.0;
      for (std::size_t k = 0; k < ch.num_sbs(); ++k) best = std::max(best, ch.spectral_efficiency(u, k));
      rank[u] += ctx.v[u] * best;
    }
  }
  return rank;
}

LtsPlan plan_lts(const LtsContext& ctx, const QueueState& start, std::span<const int> y,
                 const ScenarioConfig& cfg) {
  const std::size_t U = ctx.num_users();
  if (y.size() != U) throw std::invalid_argument("plan_lts: admission vector size mismatch");
  if (ctx.demands.size() != ctx.channels.size()) {
    throw std::invalid_argument("plan_lts: channel/demand count mismatch");
  }
  const auto params = AllocationParams::from_config(cfg);
  const auto plan_work = planning_model(cfg);
  const auto real_work = true_model(cfg);

  LtsPlan plan;
  plan.trace.tau = cfg.sts_length_s;
  plan.trace.bus_bps = cfg.bus_bandwidth_bps;
  plan.trace.states.push_back(start);
  plan.user_cost.assign(U, 0.0);
  plan.flagged.assign(U, 0);

  const auto rank = drop_rank(ctx);

  QueueState q = start;
  for (std::size_t t = 0; t < ctx.num_sts(); ++t) {
    const auto& ch = ctx.channels[t];
    const auto& dem = ctx.demands[t];

    StsProblem sts;
    sts.channel = &ch;
    sts.bits.resize(U);
    sts.work_gc.resize(U);
    sts.delay_limit.resize(U);
    sts.priority = rank;
    std::vector<double> model_param(U), real_gc(U);
    for (std::size_t u = 0; u < U; ++u) {
      const auto& type = cfg.task_types[dem.task_type[u]];
      sts.bits[u] = dem.raw_bits(u);
      sts.work_gc[u] = plan_work.gigacycles(dem.raw_bytes[u], type.model_param);
      real_gc[u] = real_work.gigacycles(dem.raw_bytes[u], type.model_param);
      sts.delay_limit[u] = type.delay_limit_s;
      model_param[u] = type.model_param;
    }

    auto d = allocate_sts(q, y, sts, params);

    SlotFlows flows;
    flows.admitted.assign(y.begin(), y.end());
    flows.rate_bps.resize(U);
    flows.compute_gcps.resize(U);
    flows.arrivals_bits = dem.arrivals_bits;
    flows.model_param = model_param;
    int violations = 0;
    for (std::size_t u = 0; u < U; ++u) {
      flows.rate_bps[u] = d.rate(u, ch);
      flows.compute_gcps[u] = d.compute(u);
      if (y[u] == 0) continue;
      plan.user_cost[u] += power(flows.compute_gcps[u], cfg.kappa_esc);
      const double limit = sts.delay_limit[u] * (1.0 + 1e-9);
      const auto planned = delay(sts.bits[u], flows.rate_bps[u], flows.compute_gcps[u],
                                 sts.work_gc[u], cfg.bus_bandwidth_bps);
      if (d.dropped[u] != 0 || !(planned.total <= limit)) plan.flagged[u] = 1;
      const auto real = delay(sts.bits[u], flows.rate_bps[u], flows.compute_gcps[u], real_gc[u],
                              cfg.bus_bandwidth_bps);
      if (!(real.total <= limit)) ++violations;
    }
    flows.bus_work_gc =
        bus_slot_work(flows.admitted, flows.model_param, cfg.bus_bandwidth_bps, cfg.sts_length_s, real_work);

    plan.power.push_back(total_power(d.x, d.f, cfg.kappa_esc));
    plan.violations.push_back(violations);
    q = step_queues(q, flows, cfg.bus_bandwidth_bps, cfg.sts_length_s, real_work);
    plan.trace.states.push_back(q);
    plan.trace.flows.push_back(std::move(flows));
    plan.decisions.push_back(std::move(d));
  }
  plan.revenue = revenue(y, ctx.v);
  plan.cost = cost(plan.power);
  plan.utility = utility(plan.revenue, plan.cost, cfg.eta);
  return plan;
}

AdmissionResult admit_lts(const LtsContext& ctx, const QueueState& start, const ScenarioConfig& cfg) {
  const std::size_t U = ctx.num_users();
  AdmissionResult res;
  res.y.assign(U, 1);
  for (int pass = 1;; ++pass) {
    res.plan = plan_lts(ctx, start, res.y, cfg);
    res.iterations = pass;
    res.utility_history.push_back(res.plan.utility);
    res.admitted_history.push_back(std::accumulate(res.y.begin(), res.y.end(), 0));

    std::vector<int> feasible(U);
    for (std::size_t u = 0; u < U; ++u) feasible[u] = res.y[u] != 0 && res.plan.flagged[u] == 0;
    auto next = solve_admission(ctx.v, feasible, res.plan.user_cost, cfg.eta);
    if (next == res.y) break;

    const bool clean = !res.plan.any_flagged();
    if (clean && pass >= 2) {
      const double prev = res.utility_history[res.utility_history.size() - 2];
      if (std::abs(res.plan.utility - prev) <= cfg.alg2_rel_tol * std::abs(prev)) break;
    }
    if (clean && pass >= cfg.alg2_max_iters) break;
    res.y = std::move(next);
  }
  return res;
}

}  // namespace mts

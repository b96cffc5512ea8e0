#include "mts/engine.hpp"

#include <numeric>
#include <stdexcept>

namespace mts {

bool LtsRecord::operator==(const LtsRecord& o) const {
  const auto& a = drift;
  const auto& b = o.drift;
  return lts_index == o.lts_index && y == o.y && admitted_per_type == o.admitted_per_type &&
         revenue == o.revenue && cost == o.cost && utility == o.utility &&
         average_utility == o.average_utility && eta == o.eta &&
         alg2_iterations == o.alg2_iterations && a.lts_index == b.lts_index &&
         a.lyapunov_start == b.lyapunov_start && a.lyapunov_end == b.lyapunov_end &&
         a.drift == b.drift && a.penalty == b.penalty && a.bound_constant == b.bound_constant &&
         a.lhs == b.lhs && a.bound_rhs == b.bound_rhs && a.holds == b.holds;
}

double RunResult::mean_utility() const {
  return lts.empty() ? 0.0 : lts.back().average_utility;
}

double RunResult::mean_revenue() const {
  double s = 0.0;
  for (const auto& r : lts) s += r.revenue;
  return lts.empty() ? 0.0 : s / lts.size();
}

double RunResult::mean_cost() const {
  double s = 0.0;
  for (const auto& r : lts) s += r.cost;
  return lts.empty() ? 0.0 : s / lts.size();
}

double RunResult::mean_admitted() const {
  double s = 0.0;
  for (const auto& r : lts) s += std::accumulate(r.y.begin(), r.y.end(), 0);
  return lts.empty() ? 0.0 : s / lts.size();
}

int RunResult::total_violations() const {
  int n = 0;
  for (const auto& r : sts) n += r.violations;
  return n;
}

double RunResult::violation_rate() const {
  double slots = 0.0;
  for (const auto& r : lts) {
    const double admitted = std::accumulate(r.y.begin(), r.y.end(), 0);
    int per_lts = 0;
    for (const auto& s : sts) per_lts += s.lts_index == r.lts_index ? 1 : 0;
    slots += admitted * per_lts;
  }
  return slots > 0.0 ? total_violations() / slots : 0.0;
}

ScenarioStream::ScenarioStream(const ScenarioConfig& cfg)
    : cfg_(cfg), mobility_(cfg.seed, stream::kMobility), demand_(cfg.seed, stream::kDemand) {
  Rng topo(cfg.seed, stream::kTopology);
  top_ = place_topology(cfg_, topo);
}

void ScenarioStream::next(ChannelState& channel, StsDemand& demand) {
  if (started_) top_ = step_mobility(top_, cfg_.user_speed_mps(), cfg_.sts_length_s, mobility_);
  started_ = true;
  channel = build_channel_state(top_, cfg_);
  demand = draw_demand(demand_, cfg_);
}

LtsContext ScenarioStream::next_lts() {
  LtsContext ctx;
  std::vector<std::vector<int>> types;
  for (int t = 0; t < cfg_.sts_per_lts; ++t) {
    ChannelState ch;
    StsDemand dem;
    next(ch, dem);
    types.push_back(dem.task_type);
    ctx.channels.push_back(std::move(ch));
    ctx.demands.push_back(std::move(dem));
  }
  ctx.v = weight_v(types, cfg_.task_types, cfg_.lts_length_s);
  return ctx;
}

RunResult run(const ScenarioConfig& input) {
  ScenarioConfig cfg = input;
  validate(cfg);
  const auto real_work = true_model(cfg);
  ScenarioStream stream(cfg);

  RunResult out;
  QueueState q;
  double utility_sum = 0.0;
  for (int l = 0; l < cfg.num_lts; ++l) {
    const auto ctx = stream.next_lts();
    const auto adm = admit_lts(ctx, q, cfg);
    const auto& plan = adm.plan;

    // Online replay of the offline plan: same flows, queues advanced again from q.
    LtsTrace trace;
    trace.tau = cfg.sts_length_s;
    trace.bus_bps = cfg.bus_bandwidth_bps;
    trace.states.push_back(q);
    for (std::size_t t = 0; t < plan.decisions.size(); ++t) {
      const auto& flows = plan.trace.flows[t];
      q = step_queues(q, flows, cfg.bus_bandwidth_bps, cfg.sts_length_s, real_work);
      trace.states.push_back(q);
      trace.flows.push_back(flows);

      const auto& d = plan.decisions[t];
      StsRecord s;
      s.lts_index = l;
      s.sts_index = static_cast<int>(t);
      s.queues = q;
      s.power_w = plan.power[t];
      s.objective = d.objective;
      s.alg1_iterations = d.iterations;
      s.alg1_converged = d.converged ? 1 : 0;
      s.violations = plan.violations[t];
      s.rates_bps = flows.rate_bps;
      out.sts.push_back(std::move(s));
    }

    LtsRecord r;
    r.lts_index = l;
    r.y = adm.y;
    r.admitted_per_type.assign(cfg.num_task_types(), 0.0);
    for (const auto& dem : ctx.demands) {
      for (std::size_t u = 0; u < adm.y.size(); ++u) {
        if (adm.y[u]) r.admitted_per_type[dem.task_type[u]] += 1.0;
      }
    }
    for (auto& c : r.admitted_per_type) c /= static_cast<double>(ctx.num_sts());
    r.revenue = plan.revenue;
    r.cost = plan.cost;
    r.utility = plan.utility;
    utility_sum += r.utility;
    r.average_utility = utility_sum / (l + 1);
    r.eta = cfg.eta;
    r.alg2_iterations = adm.iterations;
    r.drift = check_theorem1(trace, cfg.lyapunov_v, r.utility, l);
    out.lts.push_back(std::move(r));
  }
  return out;
}

RunResult run_baseline(const ScenarioConfig& cfg, Baseline mode) {
  ScenarioConfig c = cfg;
  c.baseline = mode;
  return run(c);
}

FixedAdmissionTrace simulate_fixed_admission(const ScenarioConfig& input, const std::vector<int>& y,
                                             int num_sts) {
  ScenarioConfig cfg = input;
  validate(cfg);
  if (y.size() != static_cast<std::size_t>(cfg.num_users)) {
    throw std::invalid_argument("simulate_fixed_admission: admission vector size mismatch");
  }
  LtsContext ctx;
  ctx.v.assign(y.size(), 1.0);
  ctx.channels.resize(1);
  ctx.demands.resize(1);
  ScenarioStream stream(cfg);

  FixedAdmissionTrace out;
  QueueState q;
  out.states.push_back(q);
  for (int t = 0; t < num_sts; ++t) {
    stream.next(ctx.channels[0], ctx.demands[0]);
    const auto plan = plan_lts(ctx, q, y, cfg);
    const auto& f = plan.trace.flows[0];
    double served = 0.0, arrived = 0.0;
    for (std::size_t u = 0; u < y.size(); ++u) {
      served += y[u] * f.rate_bps[u] * cfg.sts_length_s;
      arrived += y[u] * f.arrivals_bits[u];
    }
    q = plan.trace.states.back();
    out.states.push_back(q);
    out.served_bits.push_back(served);
    out.arrived_bits.push_back(arrived);
  }
  return out;
}

}  // namespace mts

#include "mts/queues.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mts {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double dot(std::span<const int> y, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t u = 0; u < y.size(); ++u) s += y[u] * v[u];
  return s;
}

double admitted_count(std::span<const int> y) {
  double n = 0.0;
  for (int v : y) n += v;
  return n;
}

void check_flows(const SlotFlows& f) {
  const std::size_t U = f.admitted.size();
  require_same_size(f.rate_bps.size(), U, "slot flows");
  require_same_size(f.arrivals_bits.size(), U, "slot flows");
  require_same_size(f.compute_gcps.size(), U, "slot flows");
  require_same_size(f.model_param.size(), U, "slot flows");
  require_same_size(f.bus_work_gc.size(), U, "slot flows");
}

}  // namespace

double update_offloading(const QueueState& q, std::span<const int> y, std::span<const double> rate_bps,
                         std::span<const double> arrivals_bits, double tau) {
  require_same_size(rate_bps.size(), y.size(), "update_offloading");
  require_same_size(arrivals_bits.size(), y.size(), "update_offloading");
  return std::max(q.offload_bits - tau * dot(y, rate_bps), 0.0) + dot(y, arrivals_bits);
}

double update_bus(const QueueState& q, std::span<const int> y, std::span<const double> rate_bps,
                  double bus_bps, double tau) {
  require_same_size(rate_bps.size(), y.size(), "update_bus");
  const double service = admitted_count(y) * bus_bps * tau;
  const double inflow = std::min(tau * dot(y, rate_bps), q.offload_bits);
  return std::max(q.bus_bits - service, 0.0) + inflow;
}

std::vector<double> bus_shares_bits(double bus_bits, std::span<const int> y,
                                    std::span<const double> rate_bps, double tau) {
  require_same_size(rate_bps.size(), y.size(), "bus_shares_bits");
  std::vector<double> shares(y.size(), 0.0);
  const double delivered = tau * dot(y, rate_bps);
  const double n = admitted_count(y);
  if (n == 0.0) return shares;
  for (std::size_t u = 0; u < y.size(); ++u) {
    if (y[u] == 0) continue;
    shares[u] = delivered > 0.0 ? bus_bits * (tau * rate_bps[u]) / delivered : bus_bits / n;
  }
  return shares;
}

std::vector<double> bus_slot_work(std::span<const int> y, std::span<const double> model_param,
                                  double bus_bps, double tau, const ComplexityModel& model) {
  require_same_size(model_param.size(), y.size(), "bus_slot_work");
  std::vector<double> work(y.size(), 0.0);
  for (std::size_t u = 0; u < y.size(); ++u) {
    work[u] = model.gigacycles(y[u] * bus_bps * tau / 8.0, model_param[u]);
  }
  return work;
}

double update_processing(const QueueState& q, const SlotFlows& flows, double tau,
                         const ComplexityModel& model) {
  check_flows(flows);
  const double service = tau * dot(flows.admitted, flows.compute_gcps);
  double full_bus = 0.0;
  for (double w : flows.bus_work_gc) full_bus += w;

  const auto shares = bus_shares_bits(q.bus_bits, flows.admitted, flows.rate_bps, tau);
  double backlog_work = 0.0;
  for (std::size_t u = 0; u < shares.size(); ++u) {
    backlog_work += model.gigacycles(shares[u] / 8.0, flows.model_param[u]);
  }
  return std::max(q.processing_gc - service, 0.0) + std::min(full_bus, backlog_work);
}

QueueState step_queues(const QueueState& q, const SlotFlows& flows, double bus_bps, double tau,
                       const ComplexityModel& model) {
  check_flows(flows);
  QueueState next;
  next.offload_bits = update_offloading(q, flows.admitted, flows.rate_bps, flows.arrivals_bits, tau);
  next.bus_bits = update_bus(q, flows.admitted, flows.rate_bps, bus_bps, tau);
  next.processing_gc = update_processing(q, flows, tau, model);
  return next;
}

double lyapunov(const QueueState& q) {
  return 0.5 * (q.offload_bits * q.offload_bits + q.bus_bits * q.bus_bits +
                q.processing_gc * q.processing_gc);
}

double drift_bound_constant(const LtsTrace& trace) {
  if (trace.flows.empty()) throw std::invalid_argument("drift_bound_constant: empty trace");
  const std::size_t U = trace.flows.front().num_users();
  for (const auto& f : trace.flows) {
    check_flows(f);
    require_same_size(f.num_users(), U, "drift_bound_constant");
  }
  const double tau = trace.tau;
  const auto& y = trace.flows.front().admitted;

  std::vector<double> rate_sum(U, 0.0), arr_sum(U, 0.0), comp_sum(U, 0.0), work_sum(U, 0.0);
  for (const auto& f : trace.flows) {
    for (std::size_t u = 0; u < U; ++u) {
      rate_sum[u] += f.rate_bps[u] * tau;
      arr_sum[u] += f.arrivals_bits[u];
      comp_sum[u] += f.compute_gcps[u] * tau;
      work_sum[u] += f.bus_work_gc[u];
    }
  }
  const double p = static_cast<double>(trace.flows.size());
  double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0, t6 = 0;
  for (std::size_t u = 0; u < U; ++u) {
    t1 += y[u] * rate_sum[u];
    t2 += y[u] * arr_sum[u];
    t3 += y[u] * p * trace.bus_bps * tau;
    t4 = std::max(t4, y[u] * rate_sum[u]);
    t5 += y[u] * comp_sum[u];
    t6 = std::max(t6, work_sum[u]);
  }
  return 0.5 * (t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4 + t5 * t5 + t6 * t6);
}

DriftRecord check_theorem1(const LtsTrace& trace, double v, double utility, int lts_index,
                           double c_scale) {
  if (trace.flows.empty() || trace.states.size() != trace.flows.size() + 1) {
    throw std::invalid_argument("check_theorem1: incomplete trace");
  }
  DriftRecord rec;
  rec.lts_index = lts_index;
  rec.lyapunov_start = lyapunov(trace.states.front());
  rec.lyapunov_end = lyapunov(trace.states.back());
  rec.drift = rec.lyapunov_end - rec.lyapunov_start;
  rec.penalty = v * utility;
  rec.bound_constant = c_scale * drift_bound_constant(trace);

  const double tau = trace.tau;
  double linear = 0.0;
  double magnitude = rec.bound_constant + std::abs(rec.drift) + std::abs(rec.penalty);
  for (std::size_t t = 0; t < trace.flows.size(); ++t) {
    const auto& f = trace.flows[t];
    const auto& q = trace.states[t];
    const double served = tau * dot(f.admitted, f.rate_bps);
    const double arrived = dot(f.admitted, f.arrivals_bits);
    const double bus_service = admitted_count(f.admitted) * trace.bus_bps * tau;
    const double processed = tau * dot(f.admitted, f.compute_gcps);
    double bus_work = 0.0;
    for (double w : f.bus_work_gc) bus_work += w;

    const double term = q.offload_bits * (served - arrived) + q.bus_bits * (bus_service - served) +
                        q.processing_gc * (processed - bus_work);
    linear += term;
    magnitude += std::abs(term);
  }
  rec.lhs = rec.drift - rec.penalty;
  rec.bound_rhs = rec.bound_constant - linear - rec.penalty;
  rec.holds = rec.lhs <= rec.bound_rhs + 1e-12 * magnitude;
  return rec;
}

}  // namespace mts

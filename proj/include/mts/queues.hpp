#pragma once

#include "mts/tasks.hpp"

#include <span>
#include <vector>

namespace mts {

/// Scalar tandem queues: offloading (bits) -> bus transfer (bits) -> processing (gigacycles).
struct QueueState {
  double offload_bits = 0.0;
  double bus_bits = 0.0;
  double processing_gc = 0.0;

  bool operator==(const QueueState&) const = default;
};

/// Everything one STS contributes to the queues. All vectors have one entry per user.
struct SlotFlows {
  std::vector<int> admitted;           // y_u(l)
  std::vector<double> rate_bps;        // r_u(t)
  std::vector<double> arrivals_bits;   // A_u(t)
  std::vector<double> compute_gcps;    // f_u(t)
  std::vector<double> model_param;     // n_m of the user's task this STS
  std::vector<double> bus_work_gc;     // F_u(y_u * B_bus * tau), see bus_slot_work

  std::size_t num_users() const { return admitted.size(); }
};

/// max{Phi_I - tau * y.r, 0} + y.A
double update_offloading(const QueueState& q, std::span<const int> y, std::span<const double> rate_bps,
                         std::span<const double> arrivals_bits, double tau);

/// max{Phi_II - sum_u y_u B_bus tau, 0} + min{tau * y.r, Phi_I}
double update_bus(const QueueState& q, std::span<const int> y, std::span<const double> rate_bps,
                  double bus_bps, double tau);

/// Splits the bus backlog over admitted users in proportion to their slot
/// delivery tau*y_u*r_u; equal split when nothing was delivered.
std::vector<double> bus_shares_bits(double bus_bits, std::span<const int> y,
                                    std::span<const double> rate_bps, double tau);

/// Work of one full bus slot per user, F_u(y_u * B_bus * tau), in gigacycles.
std::vector<double> bus_slot_work(std::span<const int> y, std::span<const double> model_param,
                                  double bus_bps, double tau, const ComplexityModel& model);

/// max{Phi - tau * y.f, 0} + min{sum_u F_u(y_u B_bus tau), sum_u F_u(Phi_II share_u)}
double update_processing(const QueueState& q, const SlotFlows& flows, double tau,
                         const ComplexityModel& model);

/// Advances all three queues one STS from the pre-slot state.
QueueState step_queues(const QueueState& q, const SlotFlows& flows, double bus_bps, double tau,
                       const ComplexityModel& model);

/// 1/2 (Phi_I^2 + Phi_II^2 + Phi^2)
double lyapunov(const QueueState& q);

/// Sample path of one LTS: `states[t]` is the queue state at the start of
/// STS t, `states.back()` the state after the last STS.
struct LtsTrace {
  std::vector<QueueState> states;
  std::vector<SlotFlows> flows;
  double tau = 0.1;
  double bus_bps = 10.0e9;
};

struct DriftRecord {
  int lts_index = 0;
  double lyapunov_start = 0.0;
  double lyapunov_end = 0.0;
  double drift = 0.0;
  double penalty = 0.0;         // V * G(l)
  double bound_constant = 0.0;  // C
  double lhs = 0.0;             // drift - V * G(l)
  double bound_rhs = 0.0;
  bool holds = false;
};

/// Six-term half sum of squares bounding the per-LTS second-order drift terms.
double drift_bound_constant(const LtsTrace& trace);

/// Realized drift-plus-penalty against its upper bound, expectations replaced
/// by realizations. `c_scale` multiplies C (1 for the real check).
DriftRecord check_theorem1(const LtsTrace& trace, double v, double utility, int lts_index = 0,
                           double c_scale = 1.0);

}  // namespace mts

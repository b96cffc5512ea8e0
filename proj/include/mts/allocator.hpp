#pragma once

#include "mts/channel.hpp"
#include "mts/config.hpp"
#include "mts/matrix.hpp"
#include "mts/queues.hpp"
#include "mts/tasks.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mts {

inline constexpr double kCyclesPerGigacycle = 1.0e9;

struct DelayBreakdown {
  double comm = 0.0;
  double comp = 0.0;
  double bus = 0.0;
  double total = 0.0;
};

/// Transmission, computing and bus delays of one task. A zero rate or
/// compute with nonzero work yields +inf in that component.
DelayBreakdown delay(double bits, double rate_bps, double compute_gcps, double work_gc,
                     double bus_bps);

/// kappa * f^3 with f given in gigacycles/s; watts.
double power(double compute_gcps, double kappa);
/// <x, P>: sum of per-link powers over the association support.
double total_power(const Matrix& x, const Matrix& f, double kappa);

/// Smallest compute meeting the delay limit at a given rate:
/// F / (limit - a/B_bus - a/r). Empty when the transport alone exhausts the limit.
std::optional<double> compute_floor(double bits, double rate_bps, double delay_limit_s,
                                    double bus_bps, double work_gc);

// ---------------------------------------------------------------------------
// Computing subproblem (one SBS): maximize sum_u weight_u f_u - cubic * sum_u f_u^3
// subject to f_u >= floor_u and sum_u f_u <= capacity.

struct ComputeProblem {
  std::vector<double> weight;
  double cubic = 0.0;
  std::vector<double> floor;
  double capacity = 0.0;

  double objective(std::span<const double> f) const;
};

struct ComputeSolution {
  std::vector<double> f;
  double multiplier = 0.0;  // capacity price mu
  bool feasible = true;     // false when the floors alone exceed capacity
};

/// KKT solution: f_u = max(floor_u, sqrt((weight_u - mu) / (3 cubic))) with mu
/// found by bisection when capacity binds.
ComputeSolution solve_compute(const ComputeProblem& problem);

// ---------------------------------------------------------------------------
// Association subproblem: per admitted user, argmin_k of
//   queue_coeff * r_uk + penalty_coeff * f_uk^3
// over eligible SBSs, ties to the lowest index.

struct AssociationProblem {
  Matrix candidate_rate;     // bits/s if u were served by k
  Matrix candidate_compute;  // gigacycles/s if u were served by k
  Matrix eligible;           // 1 where (u, k) may be chosen; empty = all eligible
  std::vector<int> admitted;
  std::vector<int> fallback;  // used when no SBS is eligible; -1 = lowest-cost SBS
  double queue_coeff = 0.0;   // (Phi_II - Phi_I) * tau
  double penalty_coeff = 0.0; // V * eta * kappa, per (gigacycle/s)^3

  double cost(std::size_t u, std::size_t k) const;
};

/// Serving SBS per user, -1 for users not admitted.
std::vector<int> solve_association(const AssociationProblem& problem);

// ---------------------------------------------------------------------------
// Bandwidth subproblem (one SBS): minimize coeff * sum_u e_u w_u subject to
// w_u >= min_bandwidth_u and sum_u w_u <= capacity.

struct BandwidthProblem {
  std::vector<double> min_bandwidth;
  std::vector<double> efficiency;  // log2(1 + SINR)
  double coeff = 0.0;              // (Phi_II - Phi_I) * tau
  double capacity = 0.0;

  double objective(std::span<const double> w) const;
};

struct BandwidthSolution {
  std::vector<double> w;
  bool feasible = true;  // false when the minimum bandwidths exceed capacity
};

/// Every user gets its minimum; with a negative coefficient the whole
/// residual goes to the most efficient user, otherwise it stays unused.
BandwidthSolution solve_bandwidth(const BandwidthProblem& problem);

// ---------------------------------------------------------------------------
// Alternating association, compute and bandwidth steps for one STS.

enum class AllocationMode {
  Joint,            // alternate association, compute and bandwidth
  FixedAllocation,  // nearest SBS with equal bandwidth and compute splits
  FixedChannel,     // nearest SBS with equal bandwidth; compute optimized
};

struct AllocationParams {
  double tau = 0.1;
  double bus_bps = 10.0e9;
  double bandwidth_hz = 10.0e6;
  double compute_gcps = 200.0;
  double v = 1.0;
  double eta = 1.0e-6;
  double kappa = 1.0e-28;
  double eps = 1.0e-3;
  int max_iters = 50;
  AllocationMode mode = AllocationMode::Joint;

  static AllocationParams from_config(const ScenarioConfig& cfg);
  /// V * eta * kappa expressed per (gigacycle/s)^3.
  double penalty_coeff() const;
};

/// Per-STS inputs for the allocator; one entry per user.
struct StsProblem {
  const ChannelState* channel = nullptr;
  std::vector<double> bits;         // a_u(t) in bits
  std::vector<double> work_gc;      // F_u(a_u(t)) under the planning model
  std::vector<double> delay_limit;  // limit of the user's task
  std::vector<double> priority;     // higher survives overload longer; empty = all equal
};

struct AllocationDecision {
  Matrix x;  // association indicator
  Matrix w;  // Hz
  Matrix f;  // gigacycles/s
  double objective = 0.0;
  std::vector<int> dropped;  // 1 for admitted users left unserved this STS
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = true;

  int serving_sbs(std::size_t u) const;
  double rate(std::size_t u, const ChannelState& ch) const;
  double compute(std::size_t u) const { return f.row_sum(u); }
  double bandwidth(std::size_t u) const { return w.row_sum(u); }
  bool any_dropped() const;
};

/// Drift-plus-penalty value of a decision (decision-dependent terms only):
///   (Phi_II - Phi_I) tau y.r - Phi tau y.f + V eta P.
double sts_objective(const AllocationDecision& d, const QueueState& q, std::span<const int> y,
                     const ChannelState& ch, const AllocationParams& params);

/// Initial point: nearest SBS, equal bandwidth and compute splits among admitted users.
AllocationDecision initial_allocation(std::span<const int> y, const ChannelState& ch,
                                      const AllocationParams& params);

AllocationDecision allocate_sts(const QueueState& q, std::span<const int> y, const StsProblem& sts,
                                const AllocationParams& params);

/// Checks binary association, one SBS per user, per-SBS bandwidth and compute
/// capacity, and that allocations sit on the association support. Returns a message on failure.
std::optional<std::string> check_constraints(const AllocationDecision& d,
                                             const AllocationParams& params, double rel_tol = 1e-9);

}  // namespace mts

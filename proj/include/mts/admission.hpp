#pragma once

#include "mts/allocator.hpp"
#include "mts/channel.hpp"
#include "mts/config.hpp"
#include "mts/queues.hpp"
#include "mts/tasks.hpp"

#include <span>
#include <vector>

namespace mts {

/// v_u = sum over the LTS's STSs of the requested type's delay limit, divided by T.
/// `types_per_sts[t][u]` is the task-type index of user u in STS t.
std::vector<double> weight_v(const std::vector<std::vector<int>>& types_per_sts,
                             std::span<const TaskType> catalog, double lts_length_s);

double revenue(std::span<const int> y, std::span<const double> v);
/// Sum of per-STS system power, watt-slots.
double cost(std::span<const double> power_trace);
double utility(double revenue, double cost, double eta);
double average_utility(std::span<const double> utilities);

/// Separable 0-1 program: y_u = 1 iff feasible_u and v_u - eta * cost_u > 0.
std::vector<int> solve_admission(std::span<const double> v, std::span<const int> feasible,
                                 std::span<const double> user_cost, double eta);

/// Everything drawn at the start of an LTS, shared by admission and the STS loop.
struct LtsContext {
  std::vector<ChannelState> channels;  // one per STS
  std::vector<StsDemand> demands;      // one per STS
  std::vector<double> v;

  std::size_t num_sts() const { return channels.size(); }
  std::size_t num_users() const { return v.size(); }
};

/// Order in which the allocator sheds users on overload: v_u times the
/// user's best spectral efficiency, summed over the LTS. Fixed for the whole
/// LTS so the same users survive congestion in every STS.
std::vector<double> drop_rank(const LtsContext& ctx);

/// Outcome of one offline pass over the LTS for a fixed admission vector.
struct LtsPlan {
  std::vector<AllocationDecision> decisions;  // one per STS
  LtsTrace trace;                             // queue states and flows, from the LTS-start state
  std::vector<double> power;                  // P(t) per STS, watts
  std::vector<double> user_cost;              // sum_t kappa f_u^3 per user
  std::vector<int> flagged;                   // admitted users missing a limit under the planning model
  std::vector<int> violations;                // per STS, admitted users missing a limit under the true model
  double revenue = 0.0;
  double cost = 0.0;
  double utility = 0.0;

  int total_violations() const;
  bool any_flagged() const;
};

/// Runs the STS allocator across the LTS for admission `y`, advancing the queues offline.
LtsPlan plan_lts(const LtsContext& ctx, const QueueState& start, std::span<const int> y,
                 const ScenarioConfig& cfg);

struct AdmissionResult {
  std::vector<int> y;
  LtsPlan plan;
  std::vector<double> utility_history;  // G after every pass
  std::vector<int> admitted_history;    // admitted count per pass
  int iterations = 0;
};

/// Iterates allocation and thresholding from y = all-ones until the admission
/// stops changing, or G settles with a violation-free plan, or the pass budget
/// runs out. Pruning continues past the budget while the plan still has flagged users.
AdmissionResult admit_lts(const LtsContext& ctx, const QueueState& start, const ScenarioConfig& cfg);

/// Work models: what the allocator plans with, and what the tasks really cost.
ComplexityModel planning_model(const ScenarioConfig& cfg);
ComplexityModel true_model(const ScenarioConfig& cfg);

}  // namespace mts

#pragma once

// Brute-force reference solvers. Deliberately slow and simple; used by the
// test suites and by `mts selftest`, never by the simulator.

#include "mts/admission.hpp"
#include "mts/allocator.hpp"
#include "mts/queues.hpp"

#include <cstdint>
#include <vector>

namespace mts::oracle {

// Channel formulas evaluated in natural-log / linear form rather than log10/dB.
double path_loss_los(double d, double fq);
double path_loss_nlos(double d, double fq);
double los_probability(double d);
double channel_gain(double d, double fq);

/// Own-leakage interference by explicit double loop.
double interference_own_leakage(const Matrix& gain, std::size_t u, std::size_t k, double p);

/// Best objective over the grid f_u = floor_u + j * step (step = step_frac *
/// capacity), plus one partial step for the leftover capacity. Greedy on
/// marginal gains, which is exact on the grid because each term is concave.
struct GridResult {
  std::vector<double> f;
  double objective = 0.0;
};
GridResult grid_compute(const ComputeProblem& pb, double step_frac = 1e-4);

/// Exhaustive 2-D grid for two users (cross-check of the greedy grid).
GridResult exhaustive_compute_2(const ComputeProblem& pb, int points);

/// min c.x s.t. A x <= b by enumerating every vertex (n active constraints,
/// Gaussian elimination). Returns +inf when no vertex is feasible.
struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  bool feasible = false;
};
LpResult lp_min_vertex(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b);

/// Bandwidth subproblem written as a dense LP and solved by vertex enumeration.
LpResult bandwidth_lp(const BandwidthProblem& pb);

/// Per-user argmin by scanning k; lowest index wins ties.
std::vector<int> enumerate_association(const AssociationProblem& pb);
/// Minimum summed cost over all K^U joint associations (eligibility respected).
double joint_association_cost(const AssociationProblem& pb);

/// Best v.y - eta * cost.y over all 2^U vectors with y <= feasible.
struct AdmissionOptimum {
  std::vector<int> y;
  double utility = 0.0;
};
AdmissionOptimum enumerate_admission(const std::vector<double>& v, const std::vector<int>& feasible,
                                     const std::vector<double>& user_cost, double eta);

/// Queue step recomputed from the per-user flows with plain loops.
QueueState replay_step(const QueueState& q, const SlotFlows& flows, double bus_bps, double tau,
                       const ComplexityModel& model);

}  // namespace mts::oracle

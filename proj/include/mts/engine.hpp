#pragma once

#include "mts/admission.hpp"
#include "mts/config.hpp"
#include "mts/queues.hpp"
#include "mts/scenario.hpp"

#include <vector>

namespace mts {

struct StsRecord {
  int lts_index = 0;
  int sts_index = 0;
  QueueState queues;  // after the STS
  double power_w = 0.0;
  double objective = 0.0;
  int alg1_iterations = 0;
  int alg1_converged = 1;
  int violations = 0;
  std::vector<double> rates_bps;

  bool operator==(const StsRecord&) const = default;
};

struct LtsRecord {
  int lts_index = 0;
  std::vector<int> y;
  std::vector<double> admitted_per_type;  // admitted requests of each type, averaged over the STSs
  double revenue = 0.0;
  double cost = 0.0;
  double utility = 0.0;
  double average_utility = 0.0;
  double eta = 0.0;
  int alg2_iterations = 0;
  DriftRecord drift;

  bool operator==(const LtsRecord&) const;
};

struct RunResult {
  std::vector<LtsRecord> lts;
  std::vector<StsRecord> sts;

  double mean_utility() const;
  double mean_revenue() const;
  double mean_cost() const;
  double mean_admitted() const;
  int total_violations() const;
  /// Violations per admitted user-STS.
  double violation_rate() const;
};

/// Draws of every STS in an LTS. Mobility, channels and demands come from
/// dedicated streams and never depend on decisions, so runs with different
/// strategies see the same sample path for a seed.
class ScenarioStream {
 public:
  explicit ScenarioStream(const ScenarioConfig& cfg);

  /// Next STS's channel state and demand; the first call uses the initial topology.
  void next(ChannelState& channel, StsDemand& demand);
  LtsContext next_lts();
  const Topology& topology() const { return top_; }

 private:
  ScenarioConfig cfg_;
  Rng mobility_;
  Rng demand_;
  Topology top_;
  bool started_ = false;
};

/// Multi-time-scale loop: per LTS draw the context, admit, then replay the plan.
RunResult run(const ScenarioConfig& cfg);

/// Same loop with the configuration's baseline replaced by `mode`.
RunResult run_baseline(const ScenarioConfig& cfg, Baseline mode);

/// Queue trajectory under a fixed admission vector over `num_sts` consecutive STSs.
struct FixedAdmissionTrace {
  std::vector<QueueState> states;   // num_sts + 1 entries
  std::vector<double> served_bits;  // tau * y.r per STS
  std::vector<double> arrived_bits; // y.A per STS
};

FixedAdmissionTrace simulate_fixed_admission(const ScenarioConfig& cfg, const std::vector<int>& y,
                                             int num_sts);

}  // namespace mts

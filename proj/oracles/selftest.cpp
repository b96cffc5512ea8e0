#include "selftest.hpp"

#include "mts/channel.hpp"
#include "mts/rng.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mts::selftest {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void fail(SuiteResult& r, const std::string& why) {
  if (r.failures++ == 0) r.first_failure = why;
}

// Objective gaps are measured against the magnitude of the objective's terms,
// so instances whose optimum happens to sit near zero are not amplified.
double rel_gap(double a, double b, double scale) {
  const double den = std::max({std::abs(a), std::abs(b), scale});
  return den > 0.0 ? std::abs(a - b) / den : 0.0;
}

}  // namespace

Fault parse_fault(std::string_view name) {
  if (name.empty() || name == "none") return Fault::None;
  if (name == "compute") return Fault::Compute;
  if (name == "bandwidth") return Fault::Bandwidth;
  if (name == "association") return Fault::Association;
  if (name == "admission") return Fault::Admission;
  throw std::invalid_argument("unknown fault: " + std::string(name));
}

SuiteResult compute_suite(int instances, std::uint64_t seed, Fault fault) {
  SuiteResult r;
  r.name = "compute";
  const auto t0 = Clock::now();
  Rng rng(seed, 11);
  for (int i = 0; i < instances; ++i) {
    const int K = 1 + rng.index(2);
    const int U = 1 + rng.index(5);
    std::vector<int> sbs(U);
    for (auto& k : sbs) k = rng.index(K);
    const double capacity = rng.uniform(50.0, 200.0);
    const double target = rng.uniform(0.1, 1.0) * capacity;  // unconstrained optimum of an average user
    const bool with_floors = rng.uniform(0.0, 1.0) < 0.5;

    for (int k = 0; k < K; ++k) {
      ComputeProblem pb;
      for (int u = 0; u < U; ++u) {
        if (sbs[u] != k) continue;
        pb.weight.push_back(rng.uniform(0.5, 5.0));
      }
      const std::size_t n = pb.weight.size();
      if (n == 0) continue;
      const double mean_w = std::accumulate(pb.weight.begin(), pb.weight.end(), 0.0) / n;
      pb.cubic = mean_w / (3.0 * target * target);
      pb.capacity = capacity;
      for (std::size_t u = 0; u < n; ++u) {
        pb.floor.push_back(with_floors ? rng.uniform(0.0, 0.3 * capacity / n) : 0.0);
      }

      auto sol = solve_compute(pb);
      if (fault == Fault::Compute) {
        for (auto& f : sol.f) f *= 0.97;
      }
      const auto grid = oracle::grid_compute(pb, kGridStepFrac);
      double scale = 0.0;
      for (std::size_t u = 0; u < n; ++u) scale += std::abs(pb.weight[u] * grid.f[u]);
      const double gap = rel_gap(pb.objective(sol.f), grid.objective, scale);
      r.worst_error = std::max(r.worst_error, gap);

      double used = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        used += sol.f[u];
        if (sol.f[u] < pb.floor[u] * (1.0 - 1e-12)) fail(r, "floor violated");
        if (sol.f[u] > pb.floor[u] * (1.0 + 1e-9) + 1e-12) {
          const double res = std::abs(pb.weight[u] - 3.0 * pb.cubic * sol.f[u] * sol.f[u] - sol.multiplier);
          r.worst_residual = std::max(r.worst_residual, res);
          if (res > kKktTol) {
            std::ostringstream os;
            os << "instance " << i << ": stationarity residual " << res;
            fail(r, os.str());
          }
        }
      }
      if (used > pb.capacity * (1.0 + 1e-9)) fail(r, "capacity exceeded");
      if (gap > kObjectiveRelTol) {
        std::ostringstream os;
        os << "instance " << i << ": objective gap " << gap;
        fail(r, os.str());
      }
    }
    ++r.instances;
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult bandwidth_suite(int instances, std::uint64_t seed, Fault fault) {
  SuiteResult r;
  r.name = "bandwidth";
  const auto t0 = Clock::now();
  Rng rng(seed, 12);
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + rng.index(6);
    BandwidthProblem pb;
    pb.capacity = 10.0e6;
    const double sign = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    pb.coeff = sign * rng.uniform(0.1, 10.0);
    std::vector<double> share(n);
    for (auto& s : share) s = rng.uniform(0.05, 1.0);
    const double fill = rng.uniform(0.1, 0.95);
    const double total = std::accumulate(share.begin(), share.end(), 0.0);
    for (int u = 0; u < n; ++u) {
      pb.min_bandwidth.push_back(pb.capacity * fill * share[u] / total);
      pb.efficiency.push_back(rng.uniform(0.5, 6.0));
    }

    auto sol = solve_bandwidth(pb);
    if (fault == Fault::Bandwidth && n > 0) {
      // Hand the residual to the least efficient user instead.
      sol.w = pb.min_bandwidth;
      const auto worst = std::min_element(pb.efficiency.begin(), pb.efficiency.end()) - pb.efficiency.begin();
      sol.w[worst] += pb.capacity - std::accumulate(pb.min_bandwidth.begin(), pb.min_bandwidth.end(), 0.0);
    }
    const auto lp = oracle::bandwidth_lp(pb);
    if (!lp.feasible) {
      fail(r, "oracle found no feasible vertex");
      continue;
    }
    double scale = 0.0;
    for (int u = 0; u < n; ++u) scale += std::abs(pb.coeff * pb.efficiency[u] * pb.min_bandwidth[u]);
    const double gap = rel_gap(pb.objective(sol.w), lp.objective, scale);
    r.worst_error = std::max(r.worst_error, gap);
    double used = 0.0;
    for (int u = 0; u < n; ++u) {
      used += sol.w[u];
      if (sol.w[u] < pb.min_bandwidth[u] * (1.0 - 1e-12)) fail(r, "minimum bandwidth violated");
    }
    if (used > pb.capacity * (1.0 + 1e-9)) fail(r, "capacity exceeded");
    if (gap > kObjectiveRelTol) {
      std::ostringstream os;
      os << "instance " << i << ": objective gap " << gap;
      fail(r, os.str());
    }
    ++r.instances;
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult association_suite(int instances, std::uint64_t seed, Fault fault) {
  SuiteResult r;
  r.name = "association";
  const auto t0 = Clock::now();
  Rng rng(seed, 13);
  for (int i = 0; i < instances; ++i) {
    const int U = 1 + rng.index(8);
    const int K = 1 + rng.index(4);
    AssociationProblem pb;
    pb.candidate_rate = Matrix(U, K);
    pb.candidate_compute = Matrix(U, K);
    const bool masked = rng.uniform(0.0, 1.0) < 0.5;
    if (masked) pb.eligible = Matrix(U, K);
    pb.queue_coeff = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(1e-7, 1e-5);
    pb.penalty_coeff = rng.uniform(1e-4, 1e-1);
    for (int u = 0; u < U; ++u) {
      pb.admitted.push_back(rng.uniform(0.0, 1.0) < 0.8 ? 1 : 0);
      pb.fallback.push_back(rng.uniform(0.0, 1.0) < 0.5 ? rng.index(K) : -1);
      for (int k = 0; k < K; ++k) {
        pb.candidate_rate(u, k) = rng.uniform(1e5, 5e7);
        pb.candidate_compute(u, k) = rng.uniform(1.0, 100.0);
        if (masked) pb.eligible(u, k) = rng.uniform(0.0, 1.0) < 0.7 ? 1.0 : 0.0;
      }
      if (K > 1 && rng.uniform(0.0, 1.0) < 0.3) {
        // Exact tie between two SBSs.
        const int a = rng.index(K);
        const int b = (a + 1 + rng.index(K - 1)) % K;
        pb.candidate_rate(u, b) = pb.candidate_rate(u, a);
        pb.candidate_compute(u, b) = pb.candidate_compute(u, a);
        if (masked) pb.eligible(u, b) = pb.eligible(u, a);
      }
    }

    auto got = solve_association(pb);
    if (fault == Fault::Association) {
      for (auto& k : got) {
        if (k >= 0 && K > 1) k = (k + 1) % K;
      }
    }
    const auto want = oracle::enumerate_association(pb);
    int mismatches = 0;
    for (int u = 0; u < U; ++u) mismatches += got[u] != want[u] ? 1 : 0;
    r.worst_error = std::max(r.worst_error, static_cast<double>(mismatches));
    if (mismatches) {
      std::ostringstream os;
      os << "instance " << i << ": " << mismatches << " users differ from enumeration";
      fail(r, os.str());
    }

    // Joint enumeration on the smaller instances: the per-user choice is globally optimal.
    bool all_eligible = true;
    for (int u = 0; u < U && masked; ++u) {
      bool any = false;
      for (int k = 0; k < K; ++k) any = any || pb.eligible(u, k) != 0.0;
      all_eligible = all_eligible && (any || !pb.admitted[u]);
    }
    if (all_eligible && std::pow(K, U) <= 4096) {
      double total = 0.0;
      for (int u = 0; u < U; ++u) {
        if (pb.admitted[u]) total += pb.cost(u, got[u]);
      }
      const double joint = oracle::joint_association_cost(pb);
      if (rel_gap(total, joint, 0.0) > 1e-12) fail(r, "joint enumeration found a cheaper association");
    }
    ++r.instances;
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult admission_suite(int instances, std::uint64_t seed, Fault fault) {
  SuiteResult r;
  r.name = "admission";
  const auto t0 = Clock::now();
  Rng rng(seed, 14);
  for (int i = 0; i < instances; ++i) {
    const int U = 1 + rng.index(10);
    const double eta = std::pow(10.0, rng.uniform(-7.0, -5.0));
    std::vector<double> v(U), c(U);
    std::vector<int> feasible(U);
    for (int u = 0; u < U; ++u) {
      v[u] = 0.02 * (10 + rng.index(21));
      c[u] = rng.uniform(0.0, 1.0) * v[u] / 1e-6 * 2.0;
      feasible[u] = rng.uniform(0.0, 1.0) < 0.8 ? 1 : 0;
    }
    auto y = solve_admission(v, feasible, c, eta);
    if (fault == Fault::Admission) {
      for (auto& b : y) {
        if (b) {
          b = 0;
          break;
        }
      }
    }
    double got = 0.0;
    bool respects = true;
    for (int u = 0; u < U; ++u) {
      if (!y[u]) continue;
      respects = respects && feasible[u];
      got += v[u] - eta * c[u];
    }
    const auto best = oracle::enumerate_admission(v, feasible, c, eta);
    const double gap = rel_gap(got, best.utility, 0.0);
    r.worst_error = std::max(r.worst_error, gap);
    if (!respects) fail(r, "admitted an infeasible user");
    if (gap > 1e-12) {
      std::ostringstream os;
      os << "instance " << i << ": utility " << got << " vs optimum " << best.utility;
      fail(r, os.str());
    }
    ++r.instances;
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult queue_suite(int instances, std::uint64_t seed) {
  SuiteResult r;
  r.name = "queues";
  const auto t0 = Clock::now();
  Rng rng(seed, 15);
  ComplexityModel model;
  for (int i = 0; i < instances; ++i) {
    const int U = 1 + rng.index(8);
    QueueState q{rng.uniform(0.0, 1e7), rng.uniform(0.0, 1e7), rng.uniform(0.0, 50.0)};
    for (int t = 0; t < 10; ++t) {
      SlotFlows f;
      for (int u = 0; u < U; ++u) {
        f.admitted.push_back(rng.uniform(0.0, 1.0) < 0.7 ? 1 : 0);
        f.rate_bps.push_back(rng.uniform(0.0, 1.0) < 0.2 ? 0.0 : rng.uniform(0.0, 5e7));
        f.arrivals_bits.push_back(rng.uniform(0.0, 8e5));
        f.compute_gcps.push_back(rng.uniform(0.0, 100.0));
        f.model_param.push_back(1.0 + 2.0 * rng.index(3));
      }
      f.bus_work_gc = bus_slot_work(f.admitted, f.model_param, 10e9, 0.1, model);
      const auto got = step_queues(q, f, 10e9, 0.1, model);
      const auto want = oracle::replay_step(q, f, 10e9, 0.1, model);
      const double gap = std::max({rel_gap(got.offload_bits, want.offload_bits, 1.0),
                                   rel_gap(got.bus_bits, want.bus_bits, 1.0),
                                   rel_gap(got.processing_gc, want.processing_gc, 1.0)});
      r.worst_error = std::max(r.worst_error, gap);
      if (gap > 1e-12) fail(r, "queue step differs from replay");
      q = got;
    }
    ++r.instances;
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteResult channel_suite(int instances, std::uint64_t seed) {
  SuiteResult r;
  r.name = "channel";
  const auto t0 = Clock::now();
  Rng rng(seed, 16);
  for (int i = 0; i < instances; ++i) {
    const double d = rng.uniform(1.0, 300.0);
    const double fq = rng.uniform(0.5, 6.0);
    const double gap = std::max({rel_gap(mts::path_loss_los(d, fq), oracle::path_loss_los(d, fq), 0.0),
                                 rel_gap(mts::path_loss_nlos(d, fq), oracle::path_loss_nlos(d, fq), 0.0),
                                 rel_gap(mts::los_probability(d), oracle::los_probability(d), 0.0),
                                 rel_gap(mts::channel_gain(d, fq), oracle::channel_gain(d, fq), 0.0)});
    r.worst_error = std::max(r.worst_error, gap);
    if (gap > 1e-12) fail(r, "channel formula differs from re-derivation");
    ++r.instances;
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<SuiteResult> run_all(Fault fault, std::uint64_t seed) {
  return {compute_suite(100, seed, fault),   bandwidth_suite(100, seed, fault),
          association_suite(200, seed, fault), admission_suite(50, seed, fault),
          queue_suite(50, seed),             channel_suite(200, seed)};
}

}  // namespace mts::selftest

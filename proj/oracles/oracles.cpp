#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace mts::oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn10 = std::log(10.0);
}  // namespace

double path_loss_los(double d, double fq) {
  return (22.0 * std::log(d) + 20.0 * std::log(fq)) / kLn10 + 28.0;
}

double path_loss_nlos(double d, double fq) {
  return (36.7 * std::log(d) + 26.0 * std::log(fq)) / kLn10 + 22.7;
}

double los_probability(double d) {
  const double e = std::exp(-d / 36.0);
  const double m = d <= 18.0 ? 1.0 : 18.0 / d;
  return m - m * e + e;
}

double channel_gain(double d, double fq) {
  const double p = los_probability(d);
  const double los = std::exp(path_loss_los(d, fq) * kLn10 / 10.0);
  const double nlos = std::exp(path_loss_nlos(d, fq) * kLn10 / 10.0);
  return 1.0 / (p * los + (1.0 - p) * nlos);
}

double interference_own_leakage(const Matrix& gain, std::size_t u, std::size_t k, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < gain.cols(); ++i) {
    if (i != k) s += gain(u, i) * p;
  }
  return s;
}

GridResult grid_compute(const ComputeProblem& pb, double step_frac) {
  const std::size_t n = pb.weight.size();
  auto term = [&](std::size_t u, double f) { return pb.weight[u] * f - pb.cubic * f * f * f; };
  GridResult r;
  r.f = pb.floor;
  double left = pb.capacity;
  for (double fl : pb.floor) left -= fl;
  if (left < 0.0) throw std::invalid_argument("grid_compute: floors exceed capacity");
  const double step = step_frac * pb.capacity;

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  for (std::size_t u = 0; u < n; ++u) heap.push({term(u, r.f[u] + step) - term(u, r.f[u]), u});
  while (left >= step && !heap.empty()) {
    auto [gain, u] = heap.top();
    heap.pop();
    if (gain <= 0.0) break;
    r.f[u] += step;
    left -= step;
    heap.push({term(u, r.f[u] + step) - term(u, r.f[u]), u});
  }
  if (left > 0.0) {
    double best = 0.0;
    std::size_t who = n;
    for (std::size_t u = 0; u < n; ++u) {
      const double g = term(u, r.f[u] + left) - term(u, r.f[u]);
      if (g > best) {
        best = g;
        who = u;
      }
    }
    if (who < n) r.f[who] += left;
  }
  r.objective = pb.objective(r.f);
  return r;
}

GridResult exhaustive_compute_2(const ComputeProblem& pb, int points) {
  if (pb.weight.size() != 2) throw std::invalid_argument("exhaustive_compute_2: needs two users");
  GridResult best;
  best.objective = -kInf;
  const double span = pb.capacity - pb.floor[0] - pb.floor[1];
  for (int i = 0; i <= points; ++i) {
    const double f0 = pb.floor[0] + span * i / points;
    for (int j = 0; i + j <= points; ++j) {
      const double f1 = pb.floor[1] + span * j / points;
      const std::vector<double> f = {f0, f1};
      const double obj = pb.objective(f);
      if (obj > best.objective) {
        best.objective = obj;
        best.f = f;
      }
    }
  }
  return best;
}

namespace {

// Solves the square system M x = r with partial pivoting; false if singular.
bool solve_square(std::vector<std::vector<double>> M, std::vector<double> r, std::vector<double>& x) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::abs(M[i][c]) > std::abs(M[piv][c])) piv = i;
    }
    if (std::abs(M[piv][c]) < 1e-12) return false;
    std::swap(M[piv], M[c]);
    std::swap(r[piv], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double m = M[i][c] / M[c][c];
      for (std::size_t j = c; j < n; ++j) M[i][j] -= m * M[c][j];
      r[i] -= m * r[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = r[i] / M[i][i];
  return true;
}

}  // namespace

LpResult lp_min_vertex(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b) {
  const std::size_t n = c.size();
  const std::size_t m = A.size();
  LpResult best;
  best.objective = kInf;
  if (n == 0) {
    best.feasible = true;
    best.objective = 0.0;
    return best;
  }
  std::vector<int> pick(m, 0);
  std::fill(pick.end() - static_cast<long>(std::min(n, m)), pick.end(), 1);
  do {
    std::vector<std::vector<double>> M;
    std::vector<double> r;
    for (std::size_t i = 0; i < m; ++i) {
      if (pick[i]) {
        M.push_back(A[i]);
        r.push_back(b[i]);
      }
    }
    std::vector<double> x;
    if (!solve_square(M, r, x)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += A[i][j] * x[j];
      ok = lhs <= b[i] + 1e-9 * (1.0 + std::abs(b[i]));
    }
    if (!ok) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += c[j] * x[j];
    if (obj < best.objective) {
      best.objective = obj;
      best.x = x;
      best.feasible = true;
    }
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

LpResult bandwidth_lp(const BandwidthProblem& pb) {
  const std::size_t n = pb.min_bandwidth.size();
  std::vector<double> c(n);
  for (std::size_t u = 0; u < n; ++u) c[u] = pb.coeff * pb.efficiency[u];
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<double> row(n, 0.0);
    row[u] = -1.0;
    A.push_back(row);
    b.push_back(-pb.min_bandwidth[u]);
  }
  A.emplace_back(n, 1.0);
  b.push_back(pb.capacity);
  return lp_min_vertex(c, A, b);
}

std::vector<int> enumerate_association(const AssociationProblem& pb) {
  const std::size_t U = pb.admitted.size();
  const std::size_t K = pb.candidate_rate.cols();
  const bool masked = pb.eligible.rows() == U && pb.eligible.cols() == K;
  std::vector<int> out(U, -1);
  for (std::size_t u = 0; u < U; ++u) {
    if (!pb.admitted[u]) continue;
    std::vector<double> cost(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double f = pb.candidate_compute(u, k);
      cost[k] = pb.queue_coeff * pb.candidate_rate(u, k) + pb.penalty_coeff * f * f * f;
    }
    std::vector<std::size_t> allowed;
    for (std::size_t k = 0; k < K; ++k) {
      if (!masked || pb.eligible(u, k) != 0.0) allowed.push_back(k);
    }
    if (allowed.empty()) {
      if (u < pb.fallback.size() && pb.fallback[u] >= 0) {
        out[u] = pb.fallback[u];
        continue;
      }
      for (std::size_t k = 0; k < K; ++k) allowed.push_back(k);
    }
    double lo = kInf;
    for (std::size_t k : allowed) lo = std::min(lo, cost[k]);
    for (std::size_t k : allowed) {
      if (cost[k] == lo) {
        out[u] = static_cast<int>(k);
        break;
      }
    }
  }
  return out;
}

double joint_association_cost(const AssociationProblem& pb) {
  const std::size_t U = pb.admitted.size();
  const std::size_t K = pb.candidate_rate.cols();
  const bool masked = pb.eligible.rows() == U && pb.eligible.cols() == K;
  std::vector<std::size_t> idx(U, 0);
  double best = kInf;
  while (true) {
    double total = 0.0;
    bool ok = true;
    for (std::size_t u = 0; u < U && ok; ++u) {
      if (!pb.admitted[u]) continue;
      const std::size_t k = idx[u];
      if (masked && pb.eligible(u, k) == 0.0) ok = false;
      const double f = pb.candidate_compute(u, k);
      total += pb.queue_coeff * pb.candidate_rate(u, k) + pb.penalty_coeff * f * f * f;
    }
    if (ok) best = std::min(best, total);
    std::size_t pos = 0;
    while (pos < U && ++idx[pos] == K) idx[pos++] = 0;
    if (pos == U) break;
  }
  return best;
}

AdmissionOptimum enumerate_admission(const std::vector<double>& v, const std::vector<int>& feasible,
                                     const std::vector<double>& user_cost, double eta) {
  const std::size_t U = v.size();
  if (U > 20) throw std::invalid_argument("enumerate_admission: too many users");
  AdmissionOptimum best;
  best.y.assign(U, 0);
  best.utility = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << U); ++mask) {
    double g = 0.0;
    bool ok = true;
    std::vector<int> y(U, 0);
    for (std::size_t u = 0; u < U; ++u) {
      if (!(mask >> u & 1u)) continue;
      if (!feasible[u]) {
        ok = false;
        break;
      }
      y[u] = 1;
      g += v[u] - eta * user_cost[u];
    }
    if (ok && g > best.utility) {
      best.utility = g;
      best.y = y;
    }
  }
  return best;
}

QueueState replay_step(const QueueState& q, const SlotFlows& fl, double bus_bps, double tau,
                       const ComplexityModel& model) {
  const std::size_t U = fl.admitted.size();
  double served = 0.0, arrived = 0.0, processed = 0.0, admitted = 0.0;
  for (std::size_t u = 0; u < U; ++u) {
    if (!fl.admitted[u]) continue;
    served += tau * fl.rate_bps[u];
    arrived += fl.arrivals_bits[u];
    processed += tau * fl.compute_gcps[u];
    admitted += 1.0;
  }
  QueueState n;
  n.offload_bits = (q.offload_bits > served ? q.offload_bits - served : 0.0) + arrived;
  const double bus_service = admitted * bus_bps * tau;
  n.bus_bits = (q.bus_bits > bus_service ? q.bus_bits - bus_service : 0.0) +
               (served < q.offload_bits ? served : q.offload_bits);

  double full = 0.0, backlog = 0.0;
  for (std::size_t u = 0; u < U; ++u) {
    if (!fl.admitted[u]) continue;
    full += model.gigacycles(bus_bps * tau / 8.0, fl.model_param[u]);
    const double share = served > 0.0 ? q.bus_bits * tau * fl.rate_bps[u] / served
                                      : q.bus_bits / admitted;
    backlog += model.gigacycles(share / 8.0, fl.model_param[u]);
  }
  n.processing_gc = (q.processing_gc > processed ? q.processing_gc - processed : 0.0) +
                    (full < backlog ? full : backlog);
  return n;
}

}  // namespace mts::oracle

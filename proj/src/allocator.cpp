#include "mts/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDelaySlack = 1e-9;
// Sums of per-user minimums that equal a capacity analytically can exceed it by rounding.
constexpr double kCapacitySlack = 1e-9;

double ratio_or_inf(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den <= 0.0) return kInf;
  return num / den;
}

}  // namespace

DelayBreakdown delay(double bits, double rate_bps, double compute_gcps, double work_gc,
                     double bus_bps) {
  DelayBreakdown d;
  d.comm = ratio_or_inf(bits, rate_bps);
  d.comp = ratio_or_inf(work_gc, compute_gcps);
  d.bus = ratio_or_inf(bits, bus_bps);
  d.total = d.comm + d.comp + d.bus;
  return d;
}

double power(double compute_gcps, double kappa) {
  const double cycles = compute_gcps * kCyclesPerGigacycle;
  return kappa * cycles * cycles * cycles;
}

double total_power(const Matrix& x, const Matrix& f, double kappa) {
  double p = 0.0;
  for (std::size_t u = 0; u < x.rows(); ++u) {
    for (std::size_t k = 0; k < x.cols(); ++k) p += x(u, k) * power(f(u, k), kappa);
  }
  return p;
}

std::optional<double> compute_floor(double bits, double rate_bps, double delay_limit_s,
                                    double bus_bps, double work_gc) {
  const double budget = delay_limit_s - ratio_or_inf(bits, bus_bps) - ratio_or_inf(bits, rate_bps);
  if (!(budget > 0.0)) return std::nullopt;
  return work_gc / budget;
}

// ---------------------------------------------------------------------------

double ComputeProblem::objective(std::span<const double> f) const {
  double obj = 0.0;
  for (std::size_t u = 0; u < f.size(); ++u) obj += weight[u] * f[u] - cubic * f[u] * f[u] * f[u];
  return obj;
}

ComputeSolution solve_compute(const ComputeProblem& pb) {
  const std::size_t n = pb.weight.size();
  if (pb.floor.size() != n) throw std::invalid_argument("solve_compute: floor/weight size mismatch");
  if (pb.cubic < 0.0) throw std::invalid_argument("solve_compute: cubic coefficient must be >= 0");

  ComputeSolution sol;
  sol.f = pb.floor;
  const double floor_sum = std::accumulate(pb.floor.begin(), pb.floor.end(), 0.0);
  if (floor_sum > pb.capacity * (1.0 + kCapacitySlack)) {
    sol.feasible = false;
    return sol;
  }
  if (n == 0) return sol;

  const double max_weight = *std::max_element(pb.weight.begin(), pb.weight.end());

  if (pb.cubic == 0.0) {
    // Linear objective: the leftover capacity goes to the heaviest user.
    if (max_weight > 0.0) {
      const auto best = std::max_element(pb.weight.begin(), pb.weight.end()) - pb.weight.begin();
      sol.f[best] += pb.capacity - floor_sum;
      sol.multiplier = max_weight;
    }
    return sol;
  }

  auto allocate = [&](double mu, std::vector<double>& f) {
    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const double excess = std::max(pb.weight[u] - mu, 0.0);
      f[u] = std::max(pb.floor[u], std::sqrt(excess / (3.0 * pb.cubic)));
      total += f[u];
    }
    return total;
  };

  if (allocate(0.0, sol.f) <= pb.capacity) return sol;

  double lo = 0.0;
  double hi = std::max(max_weight, 0.0);
  std::vector<double> trial(n);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (allocate(mid, trial) > pb.capacity) lo = mid;
    else hi = mid;
  }
  allocate(hi, sol.f);
  sol.multiplier = hi;
  return sol;
}

// ---------------------------------------------------------------------------

double AssociationProblem::cost(std::size_t u, std::size_t k) const {
  const double f = candidate_compute(u, k);
  return queue_coeff * admitted[u] * candidate_rate(u, k) + penalty_coeff * f * f * f;
}

std::vector<int> solve_association(const AssociationProblem& pb) {
  const std::size_t U = pb.admitted.size();
  const std::size_t K = pb.candidate_rate.cols();
  const bool masked = pb.eligible.rows() == U && pb.eligible.cols() == K;
  std::vector<int> out(U, -1);
  for (std::size_t u = 0; u < U; ++u) {
    if (pb.admitted[u] == 0 || K == 0) continue;
    int best = -1;
    double best_cost = kInf;
    for (std::size_t k = 0; k < K; ++k) {
      if (masked && pb.eligible(u, k) == 0.0) continue;
      const double c = pb.cost(u, k);
      if (best < 0 || c < best_cost) {
        best = static_cast<int>(k);
        best_cost = c;
      }
    }
    if (best < 0) {
      const int fb = u < pb.fallback.size() ? pb.fallback[u] : -1;
      if (fb >= 0) {
        best = fb;
      } else {
        for (std::size_t k = 0; k < K; ++k) {
          const double c = pb.cost(u, k);
          if (best < 0 || c < best_cost) {
            best = static_cast<int>(k);
            best_cost = c;
          }
        }
      }
    }
    out[u] = best;
  }
  return out;
}

// ---------------------------------------------------------------------------

double BandwidthProblem::objective(std::span<const double> w) const {
  double obj = 0.0;
  for (std::size_t u = 0; u < w.size(); ++u) obj += coeff * efficiency[u] * w[u];
  return obj;
}

BandwidthSolution solve_bandwidth(const BandwidthProblem& pb) {
  const std::size_t n = pb.min_bandwidth.size();
  if (pb.efficiency.size() != n) throw std::invalid_argument("solve_bandwidth: size mismatch");
  BandwidthSolution sol;
  sol.w = pb.min_bandwidth;
  const double used = std::accumulate(sol.w.begin(), sol.w.end(), 0.0);
  if (used > pb.capacity * (1.0 + kCapacitySlack)) {
    sol.feasible = false;
    return sol;
  }
  const double residual = pb.capacity - used;
  if (pb.coeff < 0.0 && residual > 0.0 && n > 0) {
    const auto best = std::max_element(pb.efficiency.begin(), pb.efficiency.end()) -
                      pb.efficiency.begin();
    sol.w[best] += residual;
  }
  return sol;
}

// ---------------------------------------------------------------------------

AllocationParams AllocationParams::from_config(const ScenarioConfig& cfg) {
  AllocationParams p;
  p.tau = cfg.sts_length_s;
  p.bus_bps = cfg.bus_bandwidth_bps;
  p.bandwidth_hz = cfg.bandwidth_per_sbs_hz;
  p.compute_gcps = cfg.compute_per_sbs_gcps;
  p.v = cfg.lyapunov_v;
  p.eta = cfg.eta;
  p.kappa = cfg.kappa_esc;
  p.eps = cfg.alg1_eps;
  p.max_iters = cfg.alg1_max_iters;
  switch (cfg.baseline) {
    case Baseline::FixedAllocation: p.mode = AllocationMode::FixedAllocation; break;
    case Baseline::FixedChannel: p.mode = AllocationMode::FixedChannel; break;
    default: p.mode = AllocationMode::Joint; break;
  }
  return p;
}

double AllocationParams::penalty_coeff() const {
  return v * eta * kappa * kCyclesPerGigacycle * kCyclesPerGigacycle * kCyclesPerGigacycle;
}

int AllocationDecision::serving_sbs(std::size_t u) const {
  for (std::size_t k = 0; k < x.cols(); ++k) {
    if (x(u, k) > 0.5) return static_cast<int>(k);
  }
  return -1;
}

double AllocationDecision::rate(std::size_t u, const ChannelState& ch) const {
  double r = 0.0;
  for (std::size_t k = 0; k < x.cols(); ++k) {
    if (x(u, k) > 0.5) r += w(u, k) * ch.spectral_efficiency(u, k);
  }
  return r;
}

bool AllocationDecision::any_dropped() const {
  return std::any_of(dropped.begin(), dropped.end(), [](int d) { return d != 0; });
}

double sts_objective(const AllocationDecision& d, const QueueState& q, std::span<const int> y,
                     const ChannelState& ch, const AllocationParams& params) {
  double rate_sum = 0.0, compute_sum = 0.0;
  for (std::size_t u = 0; u < y.size(); ++u) {
    if (y[u] == 0) continue;
    rate_sum += d.rate(u, ch);
    compute_sum += d.compute(u);
  }
  return (q.bus_bits - q.offload_bits) * params.tau * rate_sum -
         q.processing_gc * params.tau * compute_sum +
         params.v * params.eta * total_power(d.x, d.f, params.kappa);
}

AllocationDecision initial_allocation(std::span<const int> y, const ChannelState& ch,
                                      const AllocationParams& params) {
  const std::size_t U = ch.num_users();
  const std::size_t K = ch.num_sbs();
  AllocationDecision d;
  d.x = Matrix(U, K);
  d.w = Matrix(U, K);
  d.f = Matrix(U, K);
  d.dropped.assign(U, 0);

  const auto nearest = nearest_sbs(ch.distance);
  std::vector<int> load(K, 0);
  for (std::size_t u = 0; u < U; ++u) {
    if (y[u] != 0) ++load[nearest[u]];
  }
  for (std::size_t u = 0; u < U; ++u) {
    if (y[u] == 0) continue;
    const int k = nearest[u];
    d.x(u, k) = 1.0;
    d.w(u, k) = params.bandwidth_hz / load[k];
    d.f(u, k) = params.compute_gcps / load[k];
  }
  return d;
}

namespace {

struct Candidate {
  std::size_t user;
  double priority;
};

// Removal order: lowest priority first, ties removing the higher index first.
std::vector<std::size_t> removal_order(std::vector<Candidate> c) {
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.user > b.user;
  });
  std::vector<std::size_t> out;
  for (const auto& e : c) out.push_back(e.user);
  return out;
}

class Sts {
 public:
  Sts(const QueueState& q, std::span<const int> y, const StsProblem& pb, const AllocationParams& p)
      : q_(q), y_(y.begin(), y.end()), pb_(pb), p_(p), ch_(*pb.channel),
        U_(ch_.num_users()), K_(ch_.num_sbs()), eff_(U_, K_) {
    if (pb.bits.size() != U_ || pb.work_gc.size() != U_ || pb.delay_limit.size() != U_ ||
        y.size() != U_) {
      throw std::invalid_argument("allocate_sts: per-user inputs must match the channel size");
    }
    for (std::size_t u = 0; u < U_; ++u) {
      for (std::size_t k = 0; k < K_; ++k) eff_(u, k) = ch_.spectral_efficiency(u, k);
    }
    active_ = y_;
  }

  AllocationDecision run() {
    AllocationDecision d = initial_allocation(y_, ch_, p_);
    switch (p_.mode) {
      case AllocationMode::FixedAllocation: return finish_fixed(std::move(d));
      case AllocationMode::FixedChannel: return finish_fixed_channel(std::move(d));
      case AllocationMode::Joint: break;
    }

    d.objective = objective(d);
    d.objective_trace.push_back(d.objective);
    d.converged = false;
    for (int it = 1; it <= p_.max_iters; ++it) {
      const auto assoc = associate(d);
      Matrix w_moved(U_, K_);
      for (std::size_t u = 0; u < U_; ++u) {
        if (assoc[u] >= 0) w_moved(u, assoc[u]) = d.bandwidth(u);
      }
      AllocationDecision next;
      next.x = Matrix(U_, K_);
      for (std::size_t u = 0; u < U_; ++u) {
        if (active_[u] && assoc[u] >= 0) next.x(u, assoc[u]) = 1.0;
      }
      next.f = solve_compute_step(next.x, w_moved);
      next.w = solve_bandwidth_step(next.x, next.f);
      scrub(next);

      next.objective = objective(next);
      if (it > 1 && next.objective > d.objective) {
        // A pass that makes things worse is rejected; from the same point the
        // deterministic pass would only repeat it, so the iterate is final.
        d.objective_trace.push_back(d.objective);
        d.iterations = it;
        d.converged = true;
        break;
      }
      next.objective_trace = std::move(d.objective_trace);
      next.objective_trace.push_back(next.objective);
      next.iterations = it;
      next.converged = false;
      const double prev = next.objective_trace[next.objective_trace.size() - 2];
      const bool done = std::abs(next.objective - prev) <= p_.eps * (std::abs(prev) + 1.0);
      d = std::move(next);
      if (done) {
        d.converged = true;
        break;
      }
    }
    mark_dropped(d);
    return d;
  }

 private:
  double delay_of(std::size_t u, std::size_t k, double w, double f) const {
    return delay(pb_.bits[u], w * eff_(u, k), f, pb_.work_gc[u], p_.bus_bps).total;
  }

  bool meets_limit(std::size_t u, double t) const {
    return t <= pb_.delay_limit[u] * (1.0 + kDelaySlack);
  }

  double priority(std::size_t u) const {
    return pb_.priority.size() == U_ ? pb_.priority[u] : 1.0;
  }

  double objective(const AllocationDecision& d) const { return sts_objective(d, q_, y_, ch_, p_); }

  // Users are visited in index order and loads are updated as they move.
  // A candidate SBS is priced at the user's bandwidth there (current share
  // when staying, an equal share counting the mover otherwise) and the
  // smallest compute meeting the delay limit at that bandwidth.
  std::vector<int> associate(const AllocationDecision& d) const {
    AssociationProblem ap;
    ap.candidate_rate = Matrix(U_, K_);
    ap.candidate_compute = Matrix(U_, K_);
    ap.eligible = Matrix(U_, K_);
    ap.admitted = active_;
    ap.fallback.assign(U_, -1);
    ap.queue_coeff = (q_.bus_bits - q_.offload_bits) * p_.tau;
    ap.penalty_coeff = p_.penalty_coeff();

    std::vector<int> load(K_, 0);
    for (std::size_t u = 0; u < U_; ++u) {
      if (active_[u] && d.serving_sbs(u) >= 0) ++load[d.serving_sbs(u)];
    }
    for (std::size_t u = 0; u < U_; ++u) {
      if (!active_[u]) continue;
      const int cur = d.serving_sbs(u);
      ap.fallback[u] = cur;
      for (std::size_t k = 0; k < K_; ++k) {
        const bool stay = static_cast<int>(k) == cur && d.bandwidth(u) > 0.0;
        const double n = load[k] + (static_cast<int>(k) == cur ? 0 : 1);
        const double w = stay ? d.bandwidth(u) : p_.bandwidth_hz / n;
        const double share = stay ? std::max(d.compute(u), p_.compute_gcps / n) : p_.compute_gcps / n;
        const auto fl = compute_floor(pb_.bits[u], w * eff_(u, k), pb_.delay_limit[u], p_.bus_bps,
                                      pb_.work_gc[u]);
        ap.candidate_rate(u, k) = w * eff_(u, k);
        ap.candidate_compute(u, k) = fl ? *fl : share;
        ap.eligible(u, k) = fl && *fl <= share * (1.0 + kDelaySlack) ? 1.0 : 0.0;
      }
      const int chosen = choose(ap, u);
      if (chosen != cur) {
        if (cur >= 0) --load[cur];
        ++load[chosen];
      }
    }
    return solve_association(ap);
  }

  static int choose(const AssociationProblem& ap, std::size_t u) {
    AssociationProblem one;
    one.candidate_rate = Matrix(1, ap.candidate_rate.cols());
    one.candidate_compute = Matrix(1, ap.candidate_rate.cols());
    one.eligible = Matrix(1, ap.candidate_rate.cols());
    for (std::size_t k = 0; k < ap.candidate_rate.cols(); ++k) {
      one.candidate_rate(0, k) = ap.candidate_rate(u, k);
      one.candidate_compute(0, k) = ap.candidate_compute(u, k);
      one.eligible(0, k) = ap.eligible(u, k);
    }
    one.admitted = {1};
    one.fallback = {ap.fallback[u]};
    one.queue_coeff = ap.queue_coeff;
    one.penalty_coeff = ap.penalty_coeff;
    return solve_association(one).front();
  }

  // Floor from the current rate, or, when the transport alone misses the
  // limit, the compute share of the cheapest joint (bandwidth, compute) split.
  std::optional<double> floor_for(std::size_t u, std::size_t k, double w) const {
    const double bits = pb_.bits[u];
    const double work = pb_.work_gc[u];
    if (auto fl = compute_floor(bits, w * eff_(u, k), pb_.delay_limit[u], p_.bus_bps, work)) {
      return fl;
    }
    const double budget = pb_.delay_limit[u] - bits / p_.bus_bps;
    if (!(budget > 0.0)) return std::nullopt;
    if (work <= 0.0) return 0.0;
    const double comm = bits / eff_(u, k);
    const double theta = 1.0 / (1.0 + std::sqrt(work * p_.bandwidth_hz / (comm * p_.compute_gcps)));
    return work / (budget * (1.0 - theta));
  }

  Matrix solve_compute_step(const Matrix& x, const Matrix& w) {
    Matrix f(U_, K_);
    const double weight = q_.processing_gc * p_.tau;
    for (std::size_t k = 0; k < K_; ++k) {
      std::vector<std::size_t> users;
      std::vector<double> floors;
      for (std::size_t u = 0; u < U_; ++u) {
        if (!active_[u] || x(u, k) < 0.5) continue;
        const auto fl = floor_for(u, k, w(u, k));
        if (!fl) {
          active_[u] = 0;
          continue;
        }
        users.push_back(u);
        floors.push_back(*fl);
      }
      trim_to_capacity(users, floors, p_.compute_gcps);

      ComputeProblem cp;
      cp.weight.assign(users.size(), weight);
      cp.cubic = p_.penalty_coeff();
      cp.floor = floors;
      cp.capacity = p_.compute_gcps;
      const auto sol = solve_compute(cp);
      for (std::size_t i = 0; i < users.size(); ++i) f(users[i], k) = sol.f[i];
    }
    return f;
  }

  Matrix solve_bandwidth_step(const Matrix& x, const Matrix& f) {
    Matrix w(U_, K_);
    for (std::size_t k = 0; k < K_; ++k) {
      std::vector<std::size_t> users;
      std::vector<double> mins;
      for (std::size_t u = 0; u < U_; ++u) {
        if (!active_[u] || x(u, k) < 0.5) continue;
        const double remaining = pb_.delay_limit[u] - pb_.bits[u] / p_.bus_bps -
                                 ratio_or_inf(pb_.work_gc[u], f(u, k));
        if (!(remaining > 0.0)) {
          active_[u] = 0;
          continue;
        }
        users.push_back(u);
        mins.push_back(pb_.bits[u] / (remaining * eff_(u, k)));
      }
      trim_to_capacity(users, mins, p_.bandwidth_hz);

      BandwidthProblem bp;
      bp.coeff = (q_.bus_bits - q_.offload_bits) * p_.tau;
      bp.capacity = p_.bandwidth_hz;
      bp.min_bandwidth = mins;
      for (std::size_t u : users) bp.efficiency.push_back(eff_(u, k));
      const auto sol = solve_bandwidth(bp);
      for (std::size_t i = 0; i < users.size(); ++i) w(users[i], k) = sol.w[i];
    }
    return w;
  }

  // Removes users (lowest priority first, ties dropping the higher index) until the requirements fit.
  void trim_to_capacity(std::vector<std::size_t>& users, std::vector<double>& need, double capacity) {
    double total = std::accumulate(need.begin(), need.end(), 0.0);
    if (total <= capacity * (1.0 + kCapacitySlack)) return;
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < users.size(); ++i) {
      cands.push_back({users[i], priority(users[i])});
    }
    std::vector<char> removed(U_, 0);
    for (std::size_t u : removal_order(std::move(cands))) {
      if (total <= capacity * (1.0 + kCapacitySlack)) break;
      const auto pos = std::find(users.begin(), users.end(), u) - users.begin();
      total -= need[pos];
      removed[u] = 1;
      active_[u] = 0;
    }
    std::vector<std::size_t> kept_users;
    std::vector<double> kept_need;
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (removed[users[i]]) continue;
      kept_users.push_back(users[i]);
      kept_need.push_back(need[i]);
    }
    users = std::move(kept_users);
    need = std::move(kept_need);
  }

  void scrub(AllocationDecision& d) const {
    for (std::size_t u = 0; u < U_; ++u) {
      const bool served = active_[u] && d.x.row_sum(u) > 0.5;
      for (std::size_t k = 0; k < K_; ++k) {
        if (!served || d.x(u, k) < 0.5) {
          d.x(u, k) = 0.0;
          d.w(u, k) = 0.0;
          d.f(u, k) = 0.0;
        }
      }
    }
  }

  void mark_dropped(AllocationDecision& d) const {
    d.dropped.assign(U_, 0);
    for (std::size_t u = 0; u < U_; ++u) {
      if (y_[u] != 0 && d.serving_sbs(u) < 0) d.dropped[u] = 1;
    }
  }

  AllocationDecision finish_fixed(AllocationDecision d) {
    for (std::size_t u = 0; u < U_; ++u) {
      const int k = d.serving_sbs(u);
      if (k < 0) continue;
      if (!meets_limit(u, delay_of(u, k, d.w(u, k), d.f(u, k)))) active_[u] = 0;
    }
    scrub(d);
    d.objective = objective(d);
    d.objective_trace = {d.objective};
    d.iterations = 1;
    d.converged = true;
    mark_dropped(d);
    return d;
  }

  AllocationDecision finish_fixed_channel(AllocationDecision d) {
    d.f = solve_compute_step(d.x, d.w);
    scrub(d);
    d.objective = objective(d);
    d.objective_trace = {d.objective};
    d.iterations = 1;
    d.converged = true;
    mark_dropped(d);
    return d;
  }

  const QueueState q_;
  const std::vector<int> y_;
  const StsProblem& pb_;
  const AllocationParams& p_;
  const ChannelState& ch_;
  const std::size_t U_;
  const std::size_t K_;
  Matrix eff_;
  std::vector<int> active_;
};

}  // namespace

AllocationDecision allocate_sts(const QueueState& q, std::span<const int> y, const StsProblem& sts,
                                const AllocationParams& params) {
  if (sts.channel == nullptr) throw std::invalid_argument("allocate_sts: missing channel state");
  return Sts(q, y, sts, params).run();
}

std::optional<std::string> check_constraints(const AllocationDecision& d,
                                             const AllocationParams& params, double rel_tol) {
  const std::size_t U = d.x.rows();
  const std::size_t K = d.x.cols();
  std::ostringstream err;
  for (std::size_t u = 0; u < U; ++u) {
    double row = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double x = d.x(u, k);
      if (x != 0.0 && x != 1.0) {
        err << "x(" << u << "," << k << ") not binary";
        return err.str();
      }
      row += x;
      if (d.w(u, k) < 0.0 || d.f(u, k) < 0.0) {
        err << "negative allocation at (" << u << "," << k << ")";
        return err.str();
      }
      if (x == 0.0 && (d.w(u, k) != 0.0 || d.f(u, k) != 0.0)) {
        err << "allocation off the association support at (" << u << "," << k << ")";
        return err.str();
      }
    }
    if (row > 1.0) {
      err << "user " << u << " associated with " << row << " SBSs";
      return err.str();
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    double wsum = 0.0, fsum = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
      wsum += d.x(u, k) * d.w(u, k);
      fsum += d.x(u, k) * d.f(u, k);
    }
    if (wsum > params.bandwidth_hz * (1.0 + rel_tol)) {
      err << "SBS " << k << " bandwidth " << wsum << " exceeds " << params.bandwidth_hz;
      return err.str();
    }
    if (fsum > params.compute_gcps * (1.0 + rel_tol)) {
      err << "SBS " << k << " compute " << fsum << " exceeds " << params.compute_gcps;
      return err.str();
    }
  }
  return std::nullopt;
}

}  // namespace mts

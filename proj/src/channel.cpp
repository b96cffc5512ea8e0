#include "mts/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mts {

namespace {

void check_positive(double d, double fq, const char* fn) {
  if (!(d > 0.0)) throw std::invalid_argument(std::string(fn) + ": distance must be positive");
  if (!(fq > 0.0)) throw std::invalid_argument(std::string(fn) + ": carrier must be positive");
}

}  // namespace

double path_loss_los(double distance_m, double carrier_ghz) {
  check_positive(distance_m, carrier_ghz, "path_loss_los");
  return 22.0 * std::log10(distance_m) + 28.0 + 20.0 * std::log10(carrier_ghz);
}

double path_loss_nlos(double distance_m, double carrier_ghz) {
  check_positive(distance_m, carrier_ghz, "path_loss_nlos");
  return 36.7 * std::log10(distance_m) + 22.7 + 26.0 * std::log10(carrier_ghz);
}

double los_probability(double distance_m) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("los_probability: distance must be positive");
  const double decay = std::exp(-distance_m / 36.0);
  return std::min(18.0 / distance_m, 1.0) * (1.0 - decay) + decay;
}

double channel_gain(double distance_m, double carrier_ghz) {
  const double p_los = los_probability(distance_m);
  const double los = std::pow(10.0, path_loss_los(distance_m, carrier_ghz) / 10.0);
  const double nlos = std::pow(10.0, path_loss_nlos(distance_m, carrier_ghz) / 10.0);
  return 1.0 / (p_los * los + (1.0 - p_los) * nlos);
}

double ChannelState::spectral_efficiency(std::size_t u, std::size_t k) const {
  return std::log2(1.0 + sinr(u, k));
}

double interference(std::size_t u, std::size_t k, const Matrix& gain, double transmit_power_w,
                    InterferenceModel model, std::span<const int> association) {
  double sum = 0.0;
  if (model == InterferenceModel::OwnLeakage) {
    for (std::size_t i = 0; i < gain.cols(); ++i) {
      if (i != k) sum += gain(u, i) * transmit_power_w;
    }
    return sum;
  }
  for (std::size_t v = 0; v < gain.rows(); ++v) {
    if (v == u || v >= association.size()) continue;
    const int a = association[v];
    if (a < 0 || static_cast<std::size_t>(a) == k) continue;
    sum += gain(v, k) * transmit_power_w;
  }
  return sum;
}

std::vector<int> nearest_sbs(const Matrix& distance) {
  std::vector<int> out(distance.rows(), -1);
  for (std::size_t u = 0; u < distance.rows(); ++u) {
    int best = 0;
    for (std::size_t k = 1; k < distance.cols(); ++k) {
      if (distance(u, k) < distance(u, best)) best = static_cast<int>(k);
    }
    out[u] = distance.cols() > 0 ? best : -1;
  }
  return out;
}

ChannelState build_channel_state(const Topology& top, const ScenarioConfig& cfg) {
  const std::size_t U = top.users.size();
  const std::size_t K = top.sbs.size();
  ChannelState st;
  st.distance = Matrix(U, K);
  st.gain = Matrix(U, K);
  st.interference = Matrix(U, K);
  st.transmit_power_w = cfg.transmit_power_w();
  st.noise_power_w = cfg.noise_power_w();

  for (std::size_t u = 0; u < U; ++u) {
    for (std::size_t k = 0; k < K; ++k) {
      const double d = std::max(distance(top.users[u], top.sbs[k]), cfg.min_distance_m);
      st.distance(u, k) = d;
      st.gain(u, k) = channel_gain(d, cfg.carrier_freq_ghz);
    }
  }
  const std::vector<int> assoc = nearest_sbs(st.distance);
  for (std::size_t u = 0; u < U; ++u) {
    for (std::size_t k = 0; k < K; ++k) {
      st.interference(u, k) =
          interference(u, k, st.gain, st.transmit_power_w, cfg.interference_model, assoc);
    }
  }
  return st;
}

double uplink_rate(double bandwidth_hz, double transmit_power_w, double gain,
                   double interference_w, double noise_w) {
  if (bandwidth_hz <= 0.0) return 0.0;
  return bandwidth_hz * std::log2(1.0 + transmit_power_w * gain / (interference_w + noise_w));
}

}  // namespace mts

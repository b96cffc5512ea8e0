#pragma once

#include "mts/config.hpp"
#include "mts/matrix.hpp"
#include "mts/scenario.hpp"

#include <span>
#include <vector>

namespace mts {

// Small-cell outdoor path loss in dB; distance in meters, carrier in GHz.
double path_loss_los(double distance_m, double carrier_ghz);
double path_loss_nlos(double distance_m, double carrier_ghz);

/// LoS probability min(18/d, 1)(1 - e^{-d/36}) + e^{-d/36}.
double los_probability(double distance_m);

/// Expected-path-loss channel gain: inverse of the LoS/NLoS
/// probability-weighted linear loss. No fast fading.
double channel_gain(double distance_m, double carrier_ghz);

/// Channel state of one STS. All matrices are users x SBSs.
struct ChannelState {
  Matrix distance;      // meters
  Matrix gain;          // linear
  Matrix interference;  // watts
  double transmit_power_w = 0.0;
  double noise_power_w = 0.0;

  std::size_t num_users() const { return gain.rows(); }
  std::size_t num_sbs() const { return gain.cols(); }

  double sinr(std::size_t u, std::size_t k) const {
    return transmit_power_w * gain(u, k) / (interference(u, k) + noise_power_w);
  }
  /// log2(1 + SINR): bits/s per Hz on link (u, k).
  double spectral_efficiency(std::size_t u, std::size_t k) const;
};

/// Interference seen by user u at SBS k.
///  OwnLeakage: sum over SBSs i != k of g_ui * p_u (the user's own leakage).
///  CrossUser: sum over users v != u whose association is not k of g_vk * p_v.
/// `association[v]` is the serving SBS of v, or -1 when v does not transmit.
double interference(std::size_t u, std::size_t k, const Matrix& gain, double transmit_power_w,
                    InterferenceModel model, std::span<const int> association = {});

/// Index of the closest SBS for every user (ties to the lower index).
std::vector<int> nearest_sbs(const Matrix& distance);

ChannelState build_channel_state(const Topology& top, const ScenarioConfig& cfg);

/// Shannon uplink rate w * log2(1 + p g / (I + noise)), bits/s.
double uplink_rate(double bandwidth_hz, double transmit_power_w, double gain,
                   double interference_w, double noise_w);

}  // namespace mts

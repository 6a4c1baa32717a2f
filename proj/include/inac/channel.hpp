#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "inac/model.hpp"
#include "inac/phy_tx.hpp"

namespace inac {

/// c / (4 pi f_c d)
double path_gain(double d, double f_c);
double path_gain(const SystemConfig& cfg);
double path_loss_db(double d, double f_c);

/// P_s = P * gamma^2
double received_power(const SystemConfig& cfg);
/// C/N0 in linear Hz.
double carrier_to_noise(const SystemConfig& cfg);
double tx_power_for_cn0(const SystemConfig& cfg, double cn0_dbhz);

/// Integer-chip propagation delay, reduced modulo the frame length.
Eigen::Index propagation_delay_chips(const SystemConfig& cfg, Eigen::Index frame_chips);

struct ChannelRealization {
  double gain = 1.0;
  double phase = 0.0;
  std::uint64_t noise_seed = 0;
  std::optional<Impairments> impairments;
  Eigen::Index delay_chips = 0;
};

ChannelRealization realize(const SystemConfig& cfg, std::uint64_t noise_seed, Eigen::Index frame_chips);

/// out[n] = sqrt(2 P gain^2) * baseband[(n - delay) mod L] * impairment[n] + noise[n]
Eigen::VectorXd apply(const Eigen::VectorXd& baseband, const ChannelRealization& real, const SystemConfig& cfg);
Eigen::VectorXd apply(const InacBurst& burst, const ChannelRealization& real, const SystemConfig& cfg);

}  // namespace inac

#include "inac/channel.hpp"

#include <cmath>
#include <numbers>

#include "inac/rng.hpp"

namespace inac {

double path_gain(double d, double f_c) {
  if (!(d > 0.0)) throw Error(ErrorCode::OutOfRange, "distance must be positive");
  return kSpeedOfLight / (4.0 * std::numbers::pi * f_c * d);
}

double path_gain(const SystemConfig& cfg) { return path_gain(cfg.distance, cfg.f_c); }

double path_loss_db(double d, double f_c) { return -20.0 * std::log10(path_gain(d, f_c)); }

double received_power(const SystemConfig& cfg) {
  const double g = path_gain(cfg.distance, cfg.f_c);
  return cfg.tx_power * g * g;
}

double carrier_to_noise(const SystemConfig& cfg) { return received_power(cfg) / cfg.noise_psd; }

double tx_power_for_cn0(const SystemConfig& cfg, double cn0_dbhz) {
  const double g = path_gain(cfg.distance, cfg.f_c);
  return from_db(cn0_dbhz) * cfg.noise_psd / (g * g);
}

Eigen::Index propagation_delay_chips(const SystemConfig& cfg, Eigen::Index frame_chips) {
  if (frame_chips <= 0) return 0;
  const auto d = static_cast<Eigen::Index>(std::llround(cfg.distance / kSpeedOfLight * cfg.chip_rate));
  return d % frame_chips;
}

ChannelRealization realize(const SystemConfig& cfg, std::uint64_t noise_seed, Eigen::Index frame_chips) {
  ChannelRealization r;
  r.gain = path_gain(cfg.distance, cfg.f_c);
  const double two_pi = 2.0 * std::numbers::pi;
  r.phase = std::fmod(-two_pi * cfg.distance * cfg.f_c / kSpeedOfLight, two_pi);
  if (r.phase < 0.0) r.phase += two_pi;
  r.noise_seed = noise_seed;
  r.impairments = cfg.impairments;
  r.delay_chips = propagation_delay_chips(cfg, frame_chips);
  return r;
}

Eigen::VectorXd apply(const Eigen::VectorXd& baseband, const ChannelRealization& real, const SystemConfig& cfg) {
  const Eigen::Index len = baseband.size();
  Eigen::VectorXd out(len);
  if (len == 0) return out;
  const double amp = std::sqrt(2.0 * cfg.tx_power * real.gain * real.gain);
  const Eigen::Index tau = ((real.delay_chips % len) + len) % len;
  out.tail(len - tau) = amp * baseband.head(len - tau);
  out.head(tau) = amp * baseband.tail(tau);

  if (real.impairments) {
    const double df = real.impairments->residual_doppler;
    const double step = std::sqrt(real.impairments->phase_noise_variance);
    if (df != 0.0 || step != 0.0) {
      // residual error restarts at every loop update (one coherent interval)
      const auto reset = std::max<Eigen::Index>(1, std::llround(cfg.t_coh * cfg.chip_rate));
      const double w = 2.0 * std::numbers::pi * df / cfg.chip_rate;
      rng::Gaussian walk(rng::substream(real.noise_seed, rng::Stream::Phase));
      double theta = 0.0;
      for (Eigen::Index n = 0; n < len; ++n) {
        const Eigen::Index local = n % reset;
        if (local == 0) theta = 0.0;
        else if (step != 0.0) theta += step * walk();
        out[n] *= std::cos(w * static_cast<double>(local) + theta);
      }
    }
  }

  const double sigma = std::sqrt(noise_power(cfg));
  if (sigma > 0.0) {
    rng::Gaussian z(rng::substream(real.noise_seed, rng::Stream::Noise));
    for (Eigen::Index n = 0; n < len; ++n) out[n] += sigma * z();
  }
  return out;
}

Eigen::VectorXd apply(const InacBurst& burst, const ChannelRealization& real, const SystemConfig& cfg) {
  return apply(burst.baseband, real, cfg);
}

}  // namespace inac

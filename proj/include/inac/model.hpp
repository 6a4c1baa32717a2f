#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "inac/error.hpp"

namespace inac {

inline constexpr double kSpeedOfLight = 299792458.0;
/// -174 dBm/Hz in W/Hz.
inline constexpr double kDefaultNoisePsd = 3.981071705534973e-21;

enum class Scenario { MoInac, UoInac };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view s);

struct Impairments {
  double residual_doppler = 5.0;        ///< Hz
  double phase_noise_variance = 1e-6;   ///< rad^2 per chip

  bool operator==(const Impairments&) const = default;
};

/// Defaults follow the 500 bps / 4092 chip pairing.
struct SystemConfig {
  double beta1 = 0.7;
  double beta2 = 0.3;
  double xi = 0.0;
  double r_nav = 500.0;
  double r_com = 1000.0;
  double chip_rate = 2.046e6;
  int pn_length = 2046;
  double f_c = 1207.14e6;
  double b_fe = 4.092e6;
  double b_l = 0.2;
  double t_coh = 1e-3;
  double distance = 8.0e6;
  double tx_power = 40.0;
  double noise_psd = kDefaultNoisePsd;
  double delta = 1.0;
  Scenario scenario = Scenario::MoInac;
  std::optional<Impairments> impairments;
  int frame_symbols = 100;  ///< multi-cast symbols per frame

  bool operator==(const SystemConfig&) const = default;
};

SystemConfig mo_default();
SystemConfig uo_default();

int rate_ratio(const SystemConfig& cfg);

struct SpreadingGains {
  int mul;
  int uni;
};
SpreadingGains spreading_gains(const SystemConfig& cfg);

/// Real-valued gains; no integrality requirement.
struct NominalGains {
  double mul;
  double uni;
};
NominalGains nominal_gains(const SystemConfig& cfg);

double t_mul(const SystemConfig& cfg);
double t_uni(const SystemConfig& cfg);

/// sigma_n^2 = N0 * B_fe, watts.
double noise_power(const SystemConfig& cfg);
double noise_power(double b_fe, double noise_psd = kDefaultNoisePsd);

inline double to_db(double x) { return 10.0 * std::log10(x); }
inline double from_db(double x) { return std::pow(10.0, x / 10.0); }

enum class CodeScheme { Conventional, MucNomaPaired };
int codes_required(int k_users, CodeScheme scheme);

struct FrameLayout {
  int m;
  int g_mul;
  int g_uni;
  int k_nav;
  int k_mul;
  int k_uni;
  int frame_chips;
};
FrameLayout frame_layout(const SystemConfig& cfg);

/// Rates, power split and scenario; enough for closed forms.
void validate_link(const SystemConfig& cfg);
/// validate_link plus integral chip spans and framing.
void validate(const SystemConfig& cfg);

}  // namespace inac

#include "inac/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace inac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIntegerRateRatio: return "NonIntegerRateRatio";
    case ErrorCode::NonIntegerGain: return "NonIntegerGain";
    case ErrorCode::NonPrimitivePolynomial: return "NonPrimitivePolynomial";
    case ErrorCode::LengthExceedsPeriod: return "LengthExceedsPeriod";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PayloadLengthMismatch: return "PayloadLengthMismatch";
    case ErrorCode::WrongScenario: return "WrongScenario";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::FitOutOfRange: return "FitOutOfRange";
    case ErrorCode::ShiftAlphabetTooLarge: return "ShiftAlphabetTooLarge";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

std::string_view to_string(Scenario s) {
  return s == Scenario::MoInac ? "MO_INAC" : "UO_INAC";
}

Scenario scenario_from_string(std::string_view s) {
  if (s == "MO_INAC" || s == "MO" || s == "mo") return Scenario::MoInac;
  if (s == "UO_INAC" || s == "UO" || s == "uo") return Scenario::UoInac;
  throw Error(ErrorCode::ConfigInvalid, "unknown scenario '" + std::string(s) + "'");
}

SystemConfig mo_default() { return SystemConfig{}; }

SystemConfig uo_default() {
  SystemConfig cfg;
  cfg.beta1 = 0.3;
  cfg.beta2 = 0.7;
  cfg.scenario = Scenario::UoInac;
  return cfg;
}

namespace {

bool near_integer(double x, double rel = 1e-9) {
  const double r = std::round(x);
  return r >= 1.0 && std::abs(x - r) <= rel * std::max(1.0, std::abs(x));
}

double mul_rate(const SystemConfig& cfg) { return cfg.r_nav + cfg.xi * cfg.r_com; }

}  // namespace

int rate_ratio(const SystemConfig& cfg) {
  if (!(cfg.r_nav > 0.0) || !(cfg.r_com > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "rates must be positive");
  if (!(cfg.xi >= 0.0 && cfg.xi <= 1.0))
    throw Error(ErrorCode::ConfigInvalid, "xi outside [0,1]");
  const double uni_rate = (1.0 - cfg.xi) * cfg.r_com;
  if (!(uni_rate > 0.0))
    throw Error(ErrorCode::NonIntegerRateRatio, "no uni-cast rate left at xi=1");
  const double m = uni_rate / mul_rate(cfg);
  if (!near_integer(m))
    throw Error(ErrorCode::NonIntegerRateRatio, "M = " + std::to_string(m));
  return static_cast<int>(std::lround(m));
}

NominalGains nominal_gains(const SystemConfig& cfg) {
  const int m = rate_ratio(cfg);
  const double g_mul = cfg.chip_rate / mul_rate(cfg);
  return {g_mul, g_mul / m};
}

SpreadingGains spreading_gains(const SystemConfig& cfg) {
  const auto g = nominal_gains(cfg);
  if (!near_integer(g.mul))
    throw Error(ErrorCode::NonIntegerGain, "g_mul = " + std::to_string(g.mul));
  if (!near_integer(g.uni))
    throw Error(ErrorCode::NonIntegerGain, "g_uni = " + std::to_string(g.uni));
  return {static_cast<int>(std::lround(g.mul)), static_cast<int>(std::lround(g.uni))};
}

double t_mul(const SystemConfig& cfg) { return 1.0 / mul_rate(cfg); }
double t_uni(const SystemConfig& cfg) { return t_mul(cfg) / rate_ratio(cfg); }

double noise_power(double b_fe, double noise_psd) { return noise_psd * b_fe; }
double noise_power(const SystemConfig& cfg) { return noise_power(cfg.b_fe, cfg.noise_psd); }

int codes_required(int k_users, CodeScheme scheme) {
  if (k_users < 1) throw Error(ErrorCode::OutOfRange, "k_users must be >= 1");
  if (scheme == CodeScheme::Conventional) return k_users + 1;
  return 1 + k_users / 2;
}

FrameLayout frame_layout(const SystemConfig& cfg) {
  const auto g = spreading_gains(cfg);
  FrameLayout f{};
  f.m = rate_ratio(cfg);
  f.g_mul = g.mul;
  f.g_uni = g.uni;
  const int nf = cfg.frame_symbols;
  if (nf < 1) throw Error(ErrorCode::ConfigInvalid, "frame_symbols must be >= 1");
  if (cfg.xi > 0.0) {
    if (nf < 2) throw Error(ErrorCode::ConfigInvalid, "split framing needs >= 2 symbols");
    const double share = cfg.r_nav / mul_rate(cfg);
    int k_nav = static_cast<int>(std::lround(nf * share));
    k_nav = std::clamp(k_nav, 1, nf - 1);
    f.k_nav = k_nav;
    f.k_mul = nf - k_nav;
  } else {
    f.k_nav = nf;
    f.k_mul = 0;
  }
  f.k_uni = nf * f.m;
  f.frame_chips = nf * f.g_mul;
  return f;
}

void validate_link(const SystemConfig& cfg) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); };
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 <= 1.0)) bad("beta1 outside [0,1]");
  if (!(cfg.beta2 >= 0.0 && cfg.beta2 <= 1.0)) bad("beta2 outside [0,1]");
  if (std::abs(cfg.beta1 + cfg.beta2 - 1.0) > 1e-12) bad("beta1 + beta2 != 1");
  if (!(cfg.chip_rate > 0.0) || !(cfg.b_fe > 0.0) || !(cfg.f_c > 0.0)) bad("nonpositive rate or band");
  if (!(cfg.b_l > 0.0) || !(cfg.t_coh > 0.0)) bad("nonpositive loop parameter");
  if (!(cfg.distance > 0.0)) bad("distance must be positive");
  if (!(cfg.tx_power >= 0.0) || !(cfg.noise_psd >= 0.0)) bad("negative power");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0))
    throw Error(ErrorCode::InvalidDelta, "delta outside (0,1]");
  if (cfg.impairments && !(cfg.impairments->phase_noise_variance >= 0.0))
    bad("negative phase noise variance");
  rate_ratio(cfg);
}

void validate(const SystemConfig& cfg) {
  validate_link(cfg);
  if (cfg.scenario == Scenario::MoInac && !(cfg.beta1 > cfg.beta2))
    throw Error(ErrorCode::WrongScenario, "MO_INAC requires beta1 > beta2");
  if (cfg.scenario == Scenario::UoInac && !(cfg.beta1 < cfg.beta2))
    throw Error(ErrorCode::WrongScenario, "UO_INAC requires beta1 < beta2");
  if (!near_integer(cfg.chip_rate / cfg.r_nav))
    throw Error(ErrorCode::NonIntegerGain, "chips per navigation-rate symbol not integral");
  if (cfg.pn_length < 1) throw Error(ErrorCode::ConfigInvalid, "pn_length must be >= 1");
  frame_layout(cfg);
}

}  // namespace inac

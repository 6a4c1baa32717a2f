#include "inac/ranging.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/binomial.hpp>

#include "inac/analytic.hpp"

namespace inac {

double dll_jitter(double c_n0, double b_l, double b_fe, double t_c, double t_coh) {
  if (!(c_n0 > 0.0 && b_l > 0.0 && b_fe > 0.0 && t_c > 0.0 && t_coh > 0.0))
    throw Error(ErrorCode::OutOfRange, "DLL inputs must be positive");
  return std::sqrt(b_l / (2.0 * c_n0) / (b_fe * t_c) * (1.0 + 1.0 / (t_coh * c_n0)));
}

double ranging_error_m(double sigma_chips, double chip_rate) { return kSpeedOfLight * sigma_chips / chip_rate; }

namespace {

double n0(const SystemConfig& cfg) { return noise_power(cfg) / cfg.b_fe; }

double jitter(const SystemConfig& cfg, double c_n0, double t_coh) {
  return dll_jitter(c_n0, cfg.b_l, cfg.b_fe, 1.0 / cfg.chip_rate, t_coh);
}

void finish(RangingReport& r, const SystemConfig& cfg, double p_s) {
  r.error_m = ranging_error_m(r.sigma_chips, cfg.chip_rate);
  r.error_alt_m = ranging_error_m(r.sigma_alt_chips, cfg.chip_rate);
  r.coherent_gain_db = to_db(p_s / n0(cfg) * r.t_coh);
}

}  // namespace

RangingReport ranging_mo(const SystemConfig& cfg, double p_s) {
  if (!(cfg.scenario == Scenario::MoInac && cfg.beta1 > cfg.beta2))
    throw Error(ErrorCode::WrongScenario, "MO ranging requires beta1 > beta2");
  const int m = rate_ratio(cfg);
  const auto g = nominal_gains(cfg);
  const auto a = amplitudes(cfg, p_s);
  RangingReport r;
  r.scenario = Scenario::MoInac;
  r.t_coh = cfg.t_coh;
  double var = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double w = boost::math::binomial_coefficient<double>(m, i) / std::ldexp(1.0, m);
    const double cn0 = a.a_i[i] * a.a_i[i] / (g.mul * n0(cfg));
    const double s = jitter(cfg, cn0, r.t_coh);
    r.c_n0_dbhz.push_back(to_db(cn0));
    r.sigma_chips += w * s;
    var += w * s * s;
  }
  r.sigma_alt_chips = std::sqrt(var);
  finish(r, cfg, p_s);
  return r;
}

RangingReport ranging_uo(const SystemConfig& cfg, double p_s) {
  if (!(cfg.scenario == Scenario::UoInac && cfg.beta1 < cfg.beta2))
    throw Error(ErrorCode::WrongScenario, "UO ranging requires beta1 < beta2");
  const auto g = nominal_gains(cfg);
  const auto a = amplitudes(cfg, p_s);
  RangingReport r;
  r.scenario = Scenario::UoInac;
  r.t_coh = std::min(t_uni(cfg), cfg.t_coh);
  const double cn0_plus = a.a_c_plus * a.a_c_plus / (g.uni * n0(cfg));
  const double cn0_minus = a.a_c_minus * a.a_c_minus / (g.uni * n0(cfg));
  r.c_n0_dbhz = {to_db(cn0_plus), to_db(cn0_minus)};
  const double s_plus = jitter(cfg, cn0_plus, r.t_coh);
  r.sigma_chips = 0.5 * s_plus + 0.5 * jitter(cfg, cn0_minus, r.t_coh);
  r.sigma_alt_chips = s_plus;
  finish(r, cfg, p_s);
  return r;
}

RangingReport ranging_nav_only(const SystemConfig& cfg, double p_s) {
  const auto g = nominal_gains(cfg);
  RangingReport r;
  r.scenario = cfg.scenario;
  r.t_coh = cfg.t_coh;
  const double cn0 = 2.0 * g.mul * p_s / n0(cfg);
  r.c_n0_dbhz = {to_db(cn0)};
  r.sigma_chips = jitter(cfg, cn0, r.t_coh);
  r.sigma_alt_chips = r.sigma_chips;
  finish(r, cfg, p_s);
  return r;
}

}  // namespace inac

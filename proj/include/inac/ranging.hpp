#pragma once

#include <vector>

#include "inac/model.hpp"

namespace inac {

struct RangingReport {
  double sigma_chips = 0.0;
  double error_m = 0.0;
  Scenario scenario = Scenario::MoInac;
  std::vector<double> c_n0_dbhz;  ///< per branch
  double t_coh = 0.0;
  /// MO: root of the weighted variances. UO: both branches at A_{c,1}.
  double sigma_alt_chips = 0.0;
  double error_alt_m = 0.0;
  /// 10 log10(P_s / N0 * t_coh)
  double coherent_gain_db = 0.0;
};

/// Code-phase jitter in chips; c_n0 in linear Hz.
double dll_jitter(double c_n0, double b_l, double b_fe, double t_c, double t_coh);
double ranging_error_m(double sigma_chips, double chip_rate);

RangingReport ranging_mo(const SystemConfig& cfg, double p_s);
RangingReport ranging_uo(const SystemConfig& cfg, double p_s);
/// Whole received power on one navigation-only branch.
RangingReport ranging_nav_only(const SystemConfig& cfg, double p_s);

}  // namespace inac

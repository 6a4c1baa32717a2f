#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "inac/model.hpp"

namespace inac {

enum class BerFormulaMode { PaperLiteral, DerivedCorrect };

/// Amplitude of the despread multi-cast statistic when i of the M uni-cast symbols agree with it.
enum class AmplitudeLaw {
  ChipExact,   ///< g_mul sqrt(2 P_s) (sqrt(b1) + sqrt(b2) (2i - M) / M)
  PrintedRms,  ///< sqrt(i/M A_M^2 + (M-i)/M A_0^2)
};

struct AmplitudeSet {
  Eigen::VectorXd a_i;       ///< RMS interpolation, A_0..A_M
  Eigen::VectorXd a_i_chip;  ///< linear interpolation, A_0..A_M
  double a_c_plus = 0.0;
  double a_c_minus = 0.0;
  double a_u = 0.0;
};

AmplitudeSet amplitudes(const SystemConfig& cfg, double p_s);

double ber_mo_multicast(const SystemConfig& cfg, double p_s, BerFormulaMode mode,
                        AmplitudeLaw law = AmplitudeLaw::ChipExact);
double ber_mo_unicast(const SystemConfig& cfg, double p_s, double p_mul);
/// Uni-cast BER of the MO receiver with stage-1 errors and stage-2 noise treated jointly.
double ber_mo_unicast_joint(const SystemConfig& cfg, double p_s);
double ber_uo_unicast(const SystemConfig& cfg, double p_s);
double ber_uo_multicast(const SystemConfig& cfg, double p_s, double delta);

double erfc_approx(double x);

double corollary_mo_multicast(const SystemConfig& cfg, double p_s);
double corollary_mo_unicast(const SystemConfig& cfg, double p_s);
double corollary_uo_unicast(const SystemConfig& cfg, double p_s);
double corollary_uo_multicast(const SystemConfig& cfg, double p_s, double delta);

struct HighSnrApprox {
  std::optional<double> mo_mul;
  std::optional<double> mo_uni;
  std::optional<double> uo_uni;
  std::optional<double> uo_mul;
};
/// Branches whose scenario does not match cfg stay empty.
HighSnrApprox high_snr_approximations(const SystemConfig& cfg, double p_s);

struct UnifiedBer {
  double nav;
  double com;
};
UnifiedBer unified_ber(double p_mul, double p_uni, double xi);

struct AnalyticPoint {
  double p_mul;
  double p_uni;
  double nav;
  double com;
};
/// Scenario closed forms: stages 1/2 in MO, 3/4 in UO (delta from cfg).
AnalyticPoint analytic_point(const SystemConfig& cfg, double p_s, BerFormulaMode mode,
                             AmplitudeLaw law = AmplitudeLaw::ChipExact);

/// P_s g_mul / sigma_n^2
double effective_snr(const SystemConfig& cfg, double p_s);
double p_s_for_effective_snr(const SystemConfig& cfg, double snr);

/// Received power at which a decreasing BER curve reaches `target`.
double solve_received_power(const std::function<double(double)>& ber_of_ps, double target, double p_lo,
                            double p_hi);

}  // namespace inac

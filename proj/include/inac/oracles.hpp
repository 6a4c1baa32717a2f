#pragma once

#include <Eigen/Core>

#include "inac/model.hpp"

/// Reference computations built from first principles, kept apart from the closed forms.
namespace inac::oracle {

struct HpAmplitudes {
  Eigen::VectorXd a_i;
  double a_c_plus;
  double a_c_minus;
  double a_u;
};

/// 50-digit evaluation of the despread amplitudes.
HpAmplitudes amplitudes_hp(int m, double beta1, double beta2, double p_s, double g_mul, double g_uni);

/// Multi-cast BER from every (m, u_1..u_M) sign pattern with the chip-sum despread mean.
double mo_multicast_enumeration(const SystemConfig& cfg, double p_s);

/// Uni-cast BER by integrating the two-component Gaussian mixture below zero.
double uo_unicast_quadrature(const SystemConfig& cfg, double p_s);

/// 50-digit erfc.
double erfc_hp(double x);

/// MO ranging jitter (chips) averaged over all 2^M uni-cast patterns.
double mo_ranging_direct(const SystemConfig& cfg, double p_s);
/// UO ranging jitter (chips) over the two multi-cast polarities.
double uo_ranging_direct(const SystemConfig& cfg, double p_s);

/// Symbol error rate of 2^k orthogonal signals at symbol SNR es_n0 (E_s/N_0).
double orthogonal_ser(int k, double es_n0);

}  // namespace inac::oracle

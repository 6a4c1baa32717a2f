#include "inac/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace inac::oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

HpAmplitudes amplitudes_hp(int m, double beta1, double beta2, double p_s, double g_mul, double g_uni) {
  const hp s1 = sqrt(hp(2) * hp(p_s) * hp(beta1));
  const hp s2 = sqrt(hp(2) * hp(p_s) * hp(beta2));
  const hp am = hp(g_mul) * (s1 + s2);
  const hp a0 = hp(g_mul) * (s1 - s2);
  HpAmplitudes out;
  out.a_i.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const hp v = sqrt(hp(i) / m * am * am + hp(m - i) / m * a0 * a0);
    out.a_i[i] = static_cast<double>(i == 0 ? a0 : v);
  }
  out.a_c_plus = static_cast<double>(hp(g_uni) * (s2 + s1));
  out.a_c_minus = static_cast<double>(hp(g_uni) * (s2 - s1));
  out.a_u = static_cast<double>(hp(g_mul) * s1);
  return out;
}

namespace {

struct Link {
  int m;
  double g_mul;
  double g_uni;
  double sigma2;
};

Link link(const SystemConfig& cfg) {
  const double r_mul = cfg.r_nav + cfg.xi * cfg.r_com;
  const int m = static_cast<int>(std::lround((1.0 - cfg.xi) * cfg.r_com / r_mul));
  const double g_mul = cfg.chip_rate / r_mul;
  return {m, g_mul, g_mul / m, cfg.noise_psd * cfg.b_fe};
}

double q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double jitter(const SystemConfig& cfg, double cn0, double t_coh) {
  const double tc = 1.0 / cfg.chip_rate;
  return std::sqrt(cfg.b_l / (2.0 * cn0) * (1.0 / (cfg.b_fe * tc)) * (1.0 + 1.0 / (t_coh * cn0)));
}

}  // namespace

double mo_multicast_enumeration(const SystemConfig& cfg, double p_s) {
  const Link l = link(cfg);
  const double sd = std::sqrt(l.g_mul * l.sigma2);
  const double chip_amp = std::sqrt(2.0 * p_s);
  const unsigned patterns = 1U << (l.m + 1);
  double total = 0.0;
  for (unsigned pat = 0; pat < patterns; ++pat) {
    const int msym = (pat & 1U) ? -1 : 1;
    double mean = 0.0;
    for (int j = 0; j < l.m; ++j) {
      const int u = (pat >> (j + 1)) & 1U ? -1 : 1;
      mean += l.g_uni * chip_amp * (std::sqrt(cfg.beta1) * msym + std::sqrt(cfg.beta2) * u);
    }
    // decision +1 iff statistic >= 0
    total += msym > 0 ? q(mean / sd) : q(-mean / sd);
  }
  return total / patterns;
}

double uo_unicast_quadrature(const SystemConfig& cfg, double p_s) {
  const Link l = link(cfg);
  const double sd = std::sqrt(l.g_uni * l.sigma2);
  const double c = l.g_uni * std::sqrt(2.0 * p_s);
  const double mu_plus = c * (std::sqrt(cfg.beta2) + std::sqrt(cfg.beta1));
  const double mu_minus = c * (std::sqrt(cfg.beta2) - std::sqrt(cfg.beta1));
  auto pdf = [&](double x) {
    const double k = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    const double a = (x - mu_plus) / sd, b = (x - mu_minus) / sd;
    return 0.5 * k * std::exp(-0.5 * a * a) + 0.5 * k * std::exp(-0.5 * b * b);
  };
  const double lo = std::min(mu_plus, mu_minus) - 40.0 * sd;
  if (lo >= 0.0) return 0.0;
  // split at the component means so each piece is smooth
  double total = 0.0;
  double a = lo;
  for (double cut : {std::min(mu_plus, mu_minus) - 10.0 * sd, std::min(mu_plus, mu_minus), 0.0}) {
    cut = std::min(cut, 0.0);
    if (cut > a) {
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, a, cut, 20, 1e-15);
      a = cut;
    }
  }
  return total;
}

double erfc_hp(double x) { return static_cast<double>(boost::math::erfc(hp(x))); }

double mo_ranging_direct(const SystemConfig& cfg, double p_s) {
  const Link l = link(cfg);
  const double n0 = l.sigma2 / cfg.b_fe;
  const double s1 = std::sqrt(2.0 * p_s * cfg.beta1), s2 = std::sqrt(2.0 * p_s * cfg.beta2);
  const double am = l.g_mul * (s1 + s2), a0 = l.g_mul * (s1 - s2);
  const unsigned patterns = 1U << l.m;
  double total = 0.0;
  for (unsigned pat = 0; pat < patterns; ++pat) {
    const int i = std::popcount(pat);
    const double a2 = (static_cast<double>(i) * am * am + static_cast<double>(l.m - i) * a0 * a0) / l.m;
    total += jitter(cfg, a2 / (l.g_mul * n0), cfg.t_coh);
  }
  return total / patterns;
}

double uo_ranging_direct(const SystemConfig& cfg, double p_s) {
  const Link l = link(cfg);
  const double n0 = l.sigma2 / cfg.b_fe;
  const double t_uni = 1.0 / ((1.0 - cfg.xi) * cfg.r_com);
  const double t_coh = std::min(t_uni, cfg.t_coh);
  double total = 0.0;
  for (int j : {1, -1}) {
    const double a = l.g_uni * (std::sqrt(2.0 * p_s * cfg.beta2) + j * std::sqrt(2.0 * p_s * cfg.beta1));
    total += 0.5 * jitter(cfg, a * a / (l.g_uni * n0), t_coh);
  }
  return total;
}

double orthogonal_ser(int k, double es_n0) {
  const double n = std::ldexp(1.0, k);
  const double shift = std::sqrt(2.0 * es_n0);
  auto f = [&](double y) {
    const double phi = std::exp(-0.5 * (y - shift) * (y - shift)) / std::sqrt(2.0 * std::numbers::pi);
    return phi * std::pow(1.0 - q(y), n - 1.0);
  };
  const double correct =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, shift - 40.0, shift + 40.0, 20, 1e-15);
  return 1.0 - correct;
}

}  // namespace inac::oracle

#include "inac/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/tools/roots.hpp>

namespace inac {

namespace {

/// Single-stream limits (one beta equal to zero) are accepted under either ordering.
void require(bool mo, const SystemConfig& cfg) {
  validate_link(cfg);
  const bool single = cfg.beta1 == 0.0 || cfg.beta2 == 0.0;
  if (mo && !(cfg.scenario == Scenario::MoInac && (single || cfg.beta1 > cfg.beta2)))
    throw Error(ErrorCode::WrongScenario, "expression requires MO_INAC with beta1 > beta2");
  if (!mo && !(cfg.scenario == Scenario::UoInac && (single || cfg.beta1 < cfg.beta2)))
    throw Error(ErrorCode::WrongScenario, "expression requires UO_INAC with beta1 < beta2");
}

double binom(int n, int k) { return boost::math::binomial_coefficient<double>(n, k); }

/// amplitude / sqrt(2 g sigma^2), with the noiseless limit made explicit
double erfc_arg(double amplitude, double g, double sigma2) {
  if (sigma2 > 0.0) return amplitude / std::sqrt(2.0 * g * sigma2);
  if (amplitude > 0.0) return std::numeric_limits<double>::infinity();
  if (amplitude < 0.0) return -std::numeric_limits<double>::infinity();
  return 0.0;
}

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double big_phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// integral over [a,b] of phi(z) Phi(alpha z + beta)
double gauss_phi_integral(double a, double b, double alpha, double beta) {
  constexpr double lim = 40.0;
  a = std::max(a, -lim);
  b = std::min(b, lim);
  if (!(b > a)) return 0.0;
  auto f = [=](double z) { return phi(z) * big_phi(alpha * z + beta); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

double interval_mass(double a, double b) {
  if (!(b > a)) return 0.0;
  return big_phi(b) - big_phi(a);
}

}  // namespace

AmplitudeSet amplitudes(const SystemConfig& cfg, double p_s) {
  validate_link(cfg);
  const int m = rate_ratio(cfg);
  const auto g = nominal_gains(cfg);
  const double s1 = std::sqrt(2.0 * p_s * cfg.beta1);
  const double s2 = std::sqrt(2.0 * p_s * cfg.beta2);
  const double a_max = g.mul * (s1 + s2);
  const double a_min = g.mul * (s1 - s2);
  AmplitudeSet a;
  a.a_i.resize(m + 1);
  a.a_i_chip.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double w = static_cast<double>(i) / m;
    a.a_i[i] = std::sqrt(w * a_max * a_max + (1.0 - w) * a_min * a_min);
    a.a_i_chip[i] = g.mul * (s1 + s2 * (2.0 * i - m) / m);
  }
  a.a_i[0] = a_min;
  a.a_i[m] = a_max;
  a.a_c_plus = g.uni * (s2 + s1);
  a.a_c_minus = g.uni * (s2 - s1);
  a.a_u = g.mul * s1;
  return a;
}

double ber_mo_multicast(const SystemConfig& cfg, double p_s, BerFormulaMode mode, AmplitudeLaw law) {
  require(true, cfg);
  const int m = rate_ratio(cfg);
  const auto g = nominal_gains(cfg);
  const double sigma2 = noise_power(cfg);
  const auto a = amplitudes(cfg, p_s);
  const Eigen::VectorXd& amp = law == AmplitudeLaw::ChipExact ? a.a_i_chip : a.a_i;
  const double total = std::ldexp(1.0, m);
  const double k = mode == BerFormulaMode::PaperLiteral ? 4.0 : 2.0;
  double p = 0.0;
  for (int i = 0; i <= m; ++i) p += binom(m, i) / (k * total) * std::erfc(erfc_arg(amp[i], g.mul, sigma2));
  return p;
}

double ber_mo_unicast(const SystemConfig& cfg, double p_s, double p_mul) {
  require(true, cfg);
  if (!(p_mul >= 0.0 && p_mul <= 1.0)) throw Error(ErrorCode::OutOfRange, "p_mul outside [0,1]");
  const auto g = nominal_gains(cfg);
  const double sigma2 = noise_power(cfg);
  const double sigma = std::sqrt(sigma2);
  const double case1 = 0.5 * std::erfc(erfc_arg(g.uni * std::sqrt(2.0 * p_s * cfg.beta2), g.uni, sigma2));
  const double x2 = sigma > 0.0 ? std::sqrt(p_s * g.uni) * (2.0 * std::sqrt(cfg.beta1) + std::sqrt(cfg.beta2)) / sigma
                                : std::numeric_limits<double>::infinity();
  const double case2 = 0.5 * (std::erfc(x2) + 1.0);
  return (1.0 - p_mul) * case1 + p_mul * case2;
}

double ber_mo_unicast_joint(const SystemConfig& cfg, double p_s) {
  require(true, cfg);
  const int m = rate_ratio(cfg);
  const auto g = nominal_gains(cfg);
  const double sigma2 = noise_power(cfg);
  if (!(sigma2 > 0.0)) return 0.0;
  // per-span statistics normalised to unit noise; multi-cast symbol fixed at +1
  const double kappa = std::sqrt(2.0 * g.uni * p_s / sigma2);
  const double c = kappa * std::sqrt(cfg.beta1);
  const double d = kappa * std::sqrt(cfg.beta2);
  const double inf = std::numeric_limits<double>::infinity();
  double p = 0.0;
  for (int u : {1, -1}) {
    for (int q = 0; q <= m - 1; ++q) {
      const double w = 0.5 * binom(m - 1, q) / std::ldexp(1.0, m - 1);
      const double mu_r = (m - 1) * c + d * (2.0 * q - (m - 1));
      const double h0 = c + d * u + mu_r;  // stage-1 mean given z
      // error windows for z when stage 1 decides +1 (keep) or -1 (flip)
      const double keep_lo = u > 0 ? -inf : d, keep_hi = u > 0 ? -d : inf;
      const double flip_lo = u > 0 ? -inf : d - 2.0 * c, flip_hi = u > 0 ? -2.0 * c - d : inf;
      double e = 0.0;
      if (m == 1) {
        const double t = -h0;  // stage 1 keeps iff z >= t
        e += interval_mass(std::max(keep_lo, t), keep_hi);
        e += interval_mass(flip_lo, std::min(flip_hi, t));
      } else {
        const double s = std::sqrt(static_cast<double>(m - 1));
        e += gauss_phi_integral(keep_lo, keep_hi, 1.0 / s, h0 / s);
        e += gauss_phi_integral(flip_lo, flip_hi, -1.0 / s, -h0 / s);
      }
      p += w * e;
    }
  }
  return p;
}

double ber_uo_unicast(const SystemConfig& cfg, double p_s) {
  require(false, cfg);
  const auto g = nominal_gains(cfg);
  const double sigma2 = noise_power(cfg);
  const auto a = amplitudes(cfg, p_s);
  return 0.25 * std::erfc(erfc_arg(std::abs(a.a_c_plus), g.uni, sigma2)) +
         0.25 * std::erfc(erfc_arg(std::abs(a.a_c_minus), g.uni, sigma2));
}

double ber_uo_multicast(const SystemConfig& cfg, double p_s, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidDelta, "delta outside (0,1]");
  require(false, cfg);
  const auto g = nominal_gains(cfg);
  const double sigma2 = noise_power(cfg);
  return 0.5 * std::erfc(erfc_arg(g.mul * std::sqrt(2.0 * delta * p_s * cfg.beta1), g.mul, sigma2));
}

double erfc_approx(double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::OutOfRange, "erfc_approx needs x >= 0");
  return std::exp(-x * x) / 6.0 + 0.5 * std::exp(-4.0 * x * x / 3.0);
}

double effective_snr(const SystemConfig& cfg, double p_s) {
  return p_s * nominal_gains(cfg).mul / noise_power(cfg);
}

double p_s_for_effective_snr(const SystemConfig& cfg, double snr) {
  return snr * noise_power(cfg) / nominal_gains(cfg).mul;
}

namespace {

double ratio(double num, double sigma2) {
  return sigma2 > 0.0 ? num / sigma2 : std::numeric_limits<double>::infinity();
}

double two_exp(double a, double b, double x) { return a * std::exp(-x) + b * std::exp(-4.0 * x / 3.0); }

}  // namespace

double corollary_mo_multicast(const SystemConfig& cfg, double p_s) {
  require(true, cfg);
  const int m = rate_ratio(cfg);
  const double gamma = effective_snr(cfg, p_s);
  const double diff = std::sqrt(cfg.beta1) - std::sqrt(cfg.beta2);
  return two_exp(1.0 / 6.0, 0.5, gamma * diff * diff) / std::ldexp(1.0, m);
}

double corollary_mo_unicast(const SystemConfig& cfg, double p_s) {
  require(true, cfg);
  const auto g = nominal_gains(cfg);
  return two_exp(1.0 / 12.0, 0.25, ratio(p_s * g.uni * cfg.beta2, noise_power(cfg)));
}

double corollary_uo_unicast(const SystemConfig& cfg, double p_s) {
  require(false, cfg);
  const auto g = nominal_gains(cfg);
  const double x = ratio(g.uni * p_s, noise_power(cfg));
  const double sp = std::sqrt(cfg.beta1) + std::sqrt(cfg.beta2);
  const double sm = std::sqrt(cfg.beta1) - std::sqrt(cfg.beta2);
  return two_exp(1.0 / 24.0, 1.0 / 8.0, x) * (std::exp(-sp * sp) + std::exp(-sm * sm));
}

double corollary_uo_multicast(const SystemConfig& cfg, double p_s, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidDelta, "delta outside (0,1]");
  require(false, cfg);
  const auto g = nominal_gains(cfg);
  return two_exp(1.0 / 12.0, 0.25, ratio(delta * p_s * g.mul * cfg.beta1, noise_power(cfg)));
}

HighSnrApprox high_snr_approximations(const SystemConfig& cfg, double p_s) {
  HighSnrApprox h;
  if (cfg.scenario == Scenario::MoInac) {
    h.mo_mul = corollary_mo_multicast(cfg, p_s);
    h.mo_uni = corollary_mo_unicast(cfg, p_s);
  } else {
    h.uo_uni = corollary_uo_unicast(cfg, p_s);
    h.uo_mul = corollary_uo_multicast(cfg, p_s, cfg.delta);
  }
  return h;
}

UnifiedBer unified_ber(double p_mul, double p_uni, double xi) {
  if (!(p_mul >= 0.0 && p_mul <= 1.0 && p_uni >= 0.0 && p_uni <= 1.0 && xi >= 0.0 && xi <= 1.0))
    throw Error(ErrorCode::OutOfRange, "probabilities and xi must lie in [0,1]");
  return {p_mul, xi * p_mul + (1.0 - xi) * p_uni};
}

AnalyticPoint analytic_point(const SystemConfig& cfg, double p_s, BerFormulaMode mode, AmplitudeLaw law) {
  AnalyticPoint a{};
  if (cfg.scenario == Scenario::MoInac) {
    a.p_mul = ber_mo_multicast(cfg, p_s, mode, law);
    a.p_uni = ber_mo_unicast(cfg, p_s, a.p_mul);
  } else {
    a.p_uni = ber_uo_unicast(cfg, p_s);
    a.p_mul = ber_uo_multicast(cfg, p_s, cfg.delta);
  }
  const auto u = unified_ber(a.p_mul, std::min(1.0, a.p_uni), cfg.xi);
  a.nav = u.nav;
  a.com = u.com;
  return a;
}

double solve_received_power(const std::function<double(double)>& ber_of_ps, double target, double p_lo,
                            double p_hi) {
  auto f = [&](double lp) { return std::log(std::max(ber_of_ps(std::exp(lp)), 1e-300)) - std::log(target); };
  double a = std::log(p_lo), b = std::log(p_hi);
  if (f(a) * f(b) > 0.0) throw Error(ErrorCode::OutOfRange, "target BER not bracketed");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, a, b, boost::math::tools::eps_tolerance<double>(50), iters);
  return std::exp(0.5 * (r.first + r.second));
}

}  // namespace inac

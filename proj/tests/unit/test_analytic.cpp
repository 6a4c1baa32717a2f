#include <doctest.h>

#include <cmath>

#include "inac/analytic.hpp"
#include "inac/oracles.hpp"

using namespace inac;

namespace {

SystemConfig with_rates(SystemConfig c, double r_nav, double r_com) {
  c.r_nav = r_nav;
  c.r_com = r_com;
  return c;
}

SystemConfig betas(SystemConfig c, double b1) {
  c.beta1 = b1;
  c.beta2 = 1.0 - b1;
  return c;
}

double sigma2(const SystemConfig& c) { return noise_power(c); }

/// P_s giving P_s * g / sigma^2 = x
double ps_for(const SystemConfig& c, double g, double x) { return x * sigma2(c) / g; }

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("amplitudes") {
  SystemConfig c = with_rates(mo_default(), 1000, 2000);
  auto a = amplitudes(betas(c, 0.5), 1.0);
  CHECK(std::abs(a.a_i[0]) < 1e-12 * a.a_i[2]);
  a = amplitudes(c, 1.0);
  REQUIRE(a.a_i.size() == 3);
  CHECK(a.a_i[0] == doctest::Approx(836.035).epsilon(1e-6));
  CHECK(a.a_i[2] == doctest::Approx(4005.6846).epsilon(1e-7));
  CHECK(a.a_i[1] == doctest::Approx(std::sqrt((a.a_i[2] * a.a_i[2] + a.a_i[0] * a.a_i[0]) / 2.0)).epsilon(1e-15));
  CHECK(a.a_i_chip[1] == doctest::Approx(2046.0 * std::sqrt(2.0) * std::sqrt(0.7)).epsilon(1e-14));
  CHECK(a.a_u == doctest::Approx(2046.0 * std::sqrt(1.4)).epsilon(1e-14));
  CHECK(a.a_c_plus == doctest::Approx(1023.0 * (std::sqrt(0.6) + std::sqrt(1.4))).epsilon(1e-14));
  CHECK(a.a_c_minus == doctest::Approx(1023.0 * (std::sqrt(0.6) - std::sqrt(1.4))).epsilon(1e-14));
  for (int m : {1, 2, 3, 6}) {
    const auto s = amplitudes(with_rates(mo_default(), 500, 500.0 * m), 2.5e-16);
    for (int i = 1; i <= m; ++i) {
      CHECK(s.a_i[i] >= s.a_i[i - 1]);
      CHECK(s.a_i_chip[i] > s.a_i_chip[i - 1]);
    }
    CHECK(s.a_i[0] >= 0.0);
  }
}

TEST_CASE("multi-cast BER single-stream limits") {
  SystemConfig c = betas(mo_default(), 1.0);
  const double g = nominal_gains(c).mul;
  for (double x : {0.5, 2.0, 5.0}) {
    const double ps = ps_for(c, g, x);
    const double bpsk = 0.5 * std::erfc(std::sqrt(x));
    CHECK(ber_mo_multicast(c, ps, BerFormulaMode::DerivedCorrect) == doctest::Approx(bpsk).epsilon(1e-13));
    CHECK(ber_mo_multicast(c, ps, BerFormulaMode::PaperLiteral) == doctest::Approx(0.5 * bpsk).epsilon(1e-13));
  }
}

TEST_CASE("multi-cast BER against sign-pattern enumeration") {
  for (int m : {1, 2, 3}) {
    const SystemConfig c = with_rates(mo_default(), 500, 500.0 * m);
    const double g = nominal_gains(c).mul;
    for (double x : {0.5, 1.0, 4.0, 10.0, 20.0}) {
      const double ps = ps_for(c, g, x);
      const double enumerated = oracle::mo_multicast_enumeration(c, ps);
      const double derived = ber_mo_multicast(c, ps, BerFormulaMode::DerivedCorrect);
      CHECK(rel_close(derived, enumerated, 1e-12));
      CHECK(rel_close(derived, 2.0 * ber_mo_multicast(c, ps, BerFormulaMode::PaperLiteral), 1e-12));
      if (m == 1)
        CHECK(rel_close(ber_mo_multicast(c, ps, BerFormulaMode::DerivedCorrect, AmplitudeLaw::PrintedRms),
                        enumerated, 1e-12));
    }
  }
  const SystemConfig c2 = with_rates(mo_default(), 500, 1000);
  const double ps = ps_for(c2, nominal_gains(c2).mul, 4.0);
  MESSAGE("M=2, gamma=4: enumeration " << oracle::mo_multicast_enumeration(c2, ps) << ", RMS-law "
                                       << ber_mo_multicast(c2, ps, BerFormulaMode::DerivedCorrect,
                                                           AmplitudeLaw::PrintedRms));
}

TEST_CASE("MO uni-cast BER") {
  const SystemConfig c = mo_default();
  const double g_uni = nominal_gains(c).uni;
  const double ps = ps_for(c, g_uni, 3.0);
  CHECK(ber_mo_unicast(c, ps, 0.0) == doctest::Approx(0.5 * std::erfc(std::sqrt(0.3 * 3.0))).epsilon(1e-14));
  CHECK(ber_mo_unicast(c, ps_for(c, g_uni, 400.0), 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  const double b1 = 0.5 * std::erfc(std::sqrt(0.3 * 3.0));
  const double b2 = 0.5 * std::erfc(std::sqrt(3.0) * (2.0 * std::sqrt(0.7) + std::sqrt(0.3)));
  CHECK(ber_mo_unicast(c, ps, 0.2) == doctest::Approx(0.8 * b1 + 0.2 * (b2 + 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(ber_mo_unicast(c, ps, 1.5), Error);
}

TEST_CASE("MO uni-cast joint form") {
  const SystemConfig c = mo_default();
  const double g_uni = nominal_gains(c).uni;
  for (double x : {1.0, 5.0, 10.0, 20.0}) {
    const double ps = ps_for(c, g_uni, x);
    const double p = ber_mo_unicast_joint(c, ps);
    CHECK(p >= 0.5 * std::erfc(std::sqrt(0.3 * x)));
    CHECK(p < 0.5);
  }
}

TEST_CASE("UO uni-cast BER") {
  SystemConfig c = betas(uo_default(), 0.0);
  const double g_uni = nominal_gains(c).uni;
  CHECK(ber_uo_unicast(c, ps_for(c, g_uni, 2.0)) == doctest::Approx(0.5 * std::erfc(std::sqrt(2.0))).epsilon(1e-14));
  c = uo_default();
  const double ps = ps_for(c, g_uni, 4.0);
  CHECK(rel_close(ber_uo_unicast(c, ps), oracle::uo_unicast_quadrature(c, ps), 1e-9));
  SystemConfig loud = c;
  loud.noise_psd = 1e-6;
  CHECK(ber_uo_unicast(loud, ps) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("UO multi-cast BER") {
  SystemConfig c = betas(uo_default(), 1.0);
  const double g = nominal_gains(c).mul;
  CHECK(ber_uo_multicast(c, ps_for(c, g, 3.0), 1.0) == doctest::Approx(0.5 * std::erfc(std::sqrt(3.0))).epsilon(1e-14));
  c = uo_default();
  const double ps = ps_for(c, g, 10.0);
  CHECK(ber_uo_multicast(c, ps, 0.5) > ber_uo_multicast(c, ps, 1.0));
  try {
    ber_uo_multicast(c, ps, 0.0);
    FAIL("expected InvalidDelta");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDelta);
  }
  CHECK_THROWS_AS(ber_uo_multicast(c, ps, 1.5), Error);
}

TEST_CASE("scenario guards") {
  const SystemConfig mo = mo_default(), uo = uo_default();
  for (auto f : {+[](const SystemConfig& c) { return ber_uo_unicast(c, 1e-16); },
                 +[](const SystemConfig& c) { return ber_uo_multicast(c, 1e-16, 1.0); },
                 +[](const SystemConfig& c) { return corollary_uo_unicast(c, 1e-16); }}) {
    try {
      f(mo);
      FAIL("expected WrongScenario");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WrongScenario);
    }
  }
  CHECK_THROWS_AS(ber_mo_multicast(uo, 1e-16, BerFormulaMode::DerivedCorrect), Error);
  CHECK_THROWS_AS(ber_mo_unicast(uo, 1e-16, 0.1), Error);
  CHECK_THROWS_AS(corollary_mo_multicast(uo, 1e-16), Error);
  const auto h = high_snr_approximations(mo, 1e-16);
  CHECK(h.mo_mul.has_value());
  CHECK(h.mo_uni.has_value());
  CHECK_FALSE(h.uo_uni.has_value());
  CHECK_FALSE(h.uo_mul.has_value());
}

TEST_CASE("erfc approximation") {
  CHECK(erfc_approx(0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(erfc_approx(2.0) - 0.005465) < 0.0000025);
  CHECK(std::abs(oracle::erfc_hp(2.0) - 0.004678) < 0.0000005);
  CHECK(std::abs(erfc_approx(3.0) - 2.364e-5) < 0.0005e-5);
  CHECK(std::abs(oracle::erfc_hp(3.0) - 2.209e-5) < 0.0005e-5);
  CHECK_THROWS_AS(erfc_approx(-1.0), Error);
}

TEST_CASE("corollary scaling") {
  const SystemConfig m2 = with_rates(mo_default(), 500, 1000);
  const SystemConfig m3 = with_rates(mo_default(), 500, 1500);
  const SystemConfig m4 = with_rates(mo_default(), 500, 2000);
  const double ps = ps_for(m2, nominal_gains(m2).mul, 20.0);
  CHECK(corollary_mo_multicast(m3, ps) == doctest::Approx(0.5 * corollary_mo_multicast(m2, ps)).epsilon(1e-14));
  CHECK(corollary_mo_multicast(m4, ps) == doctest::Approx(0.25 * corollary_mo_multicast(m2, ps)).epsilon(1e-14));
  const SystemConfig w4 = with_rates(mo_default(), 250, 1000);
  REQUIRE(nominal_gains(w4).uni == nominal_gains(m2).uni);
  REQUIRE(rate_ratio(w4) == 4);
  CHECK(corollary_mo_unicast(w4, ps) == doctest::Approx(corollary_mo_unicast(m2, ps)).epsilon(1e-14));
  const SystemConfig uo = uo_default();
  const double x = ps * nominal_gains(uo).uni / noise_power(uo);
  const double br = std::exp(-std::pow(std::sqrt(0.3) + std::sqrt(0.7), 2)) + std::exp(-std::pow(std::sqrt(0.3) - std::sqrt(0.7), 2));
  CHECK(corollary_uo_unicast(uo, ps) ==
        doctest::Approx((std::exp(-x) / 24.0 + std::exp(-4.0 * x / 3.0) / 8.0) * br).epsilon(1e-14));
}

TEST_CASE("unified mapping") {
  auto u = unified_ber(1e-3, 2e-2, 0.0);
  CHECK(u.nav == 1e-3);
  CHECK(u.com == 2e-2);
  u = unified_ber(1e-3, 2e-2, 1.0);
  CHECK(u.com == 1e-3);
  u = unified_ber(1e-4, 1e-2, 0.25);
  CHECK(u.com == doctest::Approx(7.525e-3).epsilon(1e-14));
}

TEST_CASE("range and monotonicity on a 20-point grid") {
  const SystemConfig mo = mo_default(), uo = uo_default();
  const double g = nominal_gains(mo).mul;
  double prev[5] = {1, 1, 1, 1, 1};
  for (int k = 0; k < 20; ++k) {
    const double ps = ps_for(mo, g, from_db(-5.0 + k));
    const double v[5] = {ber_mo_multicast(mo, ps, BerFormulaMode::DerivedCorrect),
                         ber_mo_unicast(mo, ps, ber_mo_multicast(mo, ps, BerFormulaMode::DerivedCorrect)),
                         ber_mo_unicast_joint(mo, ps), ber_uo_unicast(uo, ps), ber_uo_multicast(uo, ps, 1.0)};
    for (int i = 0; i < 5; ++i) {
      CHECK(v[i] >= 0.0);
      CHECK(v[i] <= (i == 1 ? 1.0 : 0.5));
      CHECK(v[i] <= prev[i]);
      prev[i] = v[i];
    }
  }
  SystemConfig n = mo;
  const double ps = ps_for(mo, g, 10.0);
  double last = 0.0;
  for (int k = 0; k < 20; ++k) {
    n.noise_psd = mo.noise_psd * from_db(-3.0 + 0.5 * k);
    const double v = ber_mo_multicast(n, ps, BerFormulaMode::DerivedCorrect);
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("power-split trade-offs") {
  const SystemConfig mo = mo_default();
  const double ps = ps_for(mo, nominal_gains(mo).mul, from_db(12.0));
  double mul_prev = 1.0, uni_prev = 0.0;
  for (double b1 = 0.55; b1 < 0.99; b1 += 0.05) {
    const SystemConfig c = betas(mo, b1);
    const double mul = ber_mo_multicast(c, ps, BerFormulaMode::DerivedCorrect);
    const double case1 = ber_mo_unicast(c, ps, 0.0);
    CHECK(mul < mul_prev);
    CHECK(case1 > uni_prev);
    mul_prev = mul;
    uni_prev = case1;
  }
  const SystemConfig uo = uo_default();
  double prev = 1.0;
  for (double b2 = 0.55; b2 < 0.99; b2 += 0.05) {
    const double v = ber_uo_unicast(betas(uo, 1.0 - b2), ps);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("received-power solver") {
  const SystemConfig c = mo_default();
  const double ps = solve_received_power(
      [&](double p) { return ber_mo_multicast(c, p, BerFormulaMode::DerivedCorrect); }, 1e-3, 1e-22, 1e-10);
  CHECK(ber_mo_multicast(c, ps, BerFormulaMode::DerivedCorrect) == doctest::Approx(1e-3).epsilon(1e-9));
}

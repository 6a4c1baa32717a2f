#include <doctest.h>

#include <cmath>

#include "inac/analytic.hpp"
#include "inac/oracles.hpp"
#include "inac/ranging.hpp"

using namespace inac;

namespace {

const double kTc = 1.0 / 2.046e6;

double ps_at(const SystemConfig& c, double snr_db) { return p_s_for_effective_snr(c, from_db(snr_db)); }

}  // namespace

TEST_CASE("DLL jitter worked point") {
  const double s = dll_jitter(from_db(40.0), 0.2, 4.092e6, kTc, 1e-3);
  CHECK(s == doctest::Approx(2.345e-3).epsilon(1e-3));
  CHECK(ranging_error_m(s, 2.046e6) == doctest::Approx(0.344).epsilon(2e-3));
  const double hand = std::sqrt(0.2 / (2.0 * 1e4) / 2.0 * (1.0 + 1.0 / 10.0));
  CHECK(s == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("DLL jitter limits") {
  CHECK(dll_jitter(1e14, 0.2, 4.092e6, kTc, 1e-3) < 1e-7);
  for (double cn0 : {from_db(30.0), from_db(40.0), from_db(50.0)})
    CHECK(dll_jitter(cn0, 0.2, 4.092e6, kTc, 2e-3) < dll_jitter(cn0, 0.2, 4.092e6, kTc, 1e-3));
  CHECK_THROWS_AS(dll_jitter(0.0, 0.2, 4.092e6, kTc, 1e-3), Error);
}

TEST_CASE("MO ranging") {
  SystemConfig c = mo_default();
  c.beta1 = 1.0;
  c.beta2 = 0.0;
  const double ps = ps_at(c, 10.0);
  auto r = ranging_mo(c, ps);
  const auto nav = ranging_nav_only(c, ps);
  CHECK(r.sigma_chips == doctest::Approx(nav.sigma_chips).epsilon(1e-12));
  for (double v : r.c_n0_dbhz) CHECK(v == doctest::Approx(r.c_n0_dbhz.front()).epsilon(1e-12));

  c = mo_default();
  r = ranging_mo(c, ps);
  REQUIRE(r.c_n0_dbhz.size() == 3);
  CHECK(r.c_n0_dbhz[2] > r.c_n0_dbhz[0]);
  CHECK(r.error_m == doctest::Approx(ranging_error_m(r.sigma_chips, c.chip_rate)).epsilon(1e-14));
  CHECK(r.sigma_alt_chips >= r.sigma_chips);

  for (int m : {1, 2, 3, 4}) {
    SystemConfig cm = mo_default();
    cm.r_com = cm.r_nav * m;
    CHECK(ranging_mo(cm, ps).sigma_chips == doctest::Approx(oracle::mo_ranging_direct(cm, ps)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ranging_mo(uo_default(), ps), Error);
}

TEST_CASE("UO ranging") {
  const SystemConfig c = uo_default();
  const double ps = ps_at(c, 10.0);
  const auto r = ranging_uo(c, ps);
  CHECK(r.t_coh == doctest::Approx(1e-3));
  CHECK(r.sigma_chips == doctest::Approx(oracle::uo_ranging_direct(c, ps)).epsilon(1e-12));
  CHECK(r.sigma_alt_chips <= r.sigma_chips);
  CHECK_THROWS_AS(ranging_uo(mo_default(), ps), Error);

  double prev = 0.0;
  for (double rate : {1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5}) {
    SystemConfig cr = c;
    cr.r_com = rate;
    const auto rr = ranging_uo(cr, ps);
    CHECK(rr.error_m >= prev);
    prev = rr.error_m;
  }
  SystemConfig lo = c, hi = c;
  hi.r_com = 1e5;
  CHECK(ranging_uo(hi, ps).sigma_chips > ranging_uo(lo, ps).sigma_chips);
  CHECK(ranging_uo(lo, ps).coherent_gain_db - ranging_uo(hi, ps).coherent_gain_db == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("jitter decreases with received power") {
  const SystemConfig mo = mo_default(), uo = uo_default();
  double pm = 1e9, pu = 1e9;
  for (int k = 0; k < 15; ++k) {
    const double ps = ps_at(mo, -5.0 + 2.0 * k);
    const double sm = ranging_mo(mo, ps).sigma_chips, su = ranging_uo(uo, ps).sigma_chips;
    CHECK(sm < pm);
    CHECK(su < pu);
    pm = sm;
    pu = su;
  }
}

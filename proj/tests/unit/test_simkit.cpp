#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/erf.hpp>

#include "inac/analytic.hpp"
#include "inac/channel.hpp"
#include "inac/simkit.hpp"

using namespace inac;

namespace {

SystemConfig at_snr(SystemConfig c, double snr) {
  c.tx_power = p_s_for_effective_snr(c, snr) / (path_gain(c) * path_gain(c));
  return c;
}

/// Equivalent BPSK SNR in dB of a measured BER.
double ber_to_db(double ber) {
  const double x = boost::math::erfc_inv(2.0 * ber);
  return 10.0 * std::log10(x * x);
}

}  // namespace

TEST_CASE("noise-free run has no errors") {
  for (SystemConfig c : {mo_default(), uo_default()}) {
    c.noise_psd = 0.0;
    const auto r = run_point(c, 50, 3);
    CHECK(r.bit_counts.mul.bits == 50u * 100u);
    CHECK(r.bit_counts.uni.bits == 50u * 200u);
    CHECK(r.mul_ber == 0.0);
    CHECK(r.uni_ber == 0.0);
    CHECK(r.nav_ber == 0.0);
    CHECK(r.com_ber == 0.0);
  }
}

TEST_CASE("determinism and worker invariance") {
  const SystemConfig c = at_snr(mo_default(), from_db(8.0));
  const auto a = run_point(c, 997, 42, {.workers = 1});
  CHECK(a == run_point(c, 997, 42, {.workers = 1}));
  CHECK(a == run_point(c, 997, 42, {.workers = 4}));
  CHECK(a == run_point(c, 997, 42, {.workers = 8}));
  CHECK_FALSE(a == run_point(c, 997, 43, {.workers = 1}));
  CHECK(a.bit_counts.mul.errors > 0u);
}

TEST_CASE("stream aggregation") {
  SystemConfig c = at_snr(mo_default(), from_db(6.0));
  c.xi = 0.25;
  c.r_nav = 500;
  c.r_com = 1000;
  const auto r = run_point(c, 400, 9);
  const auto& k = r.bit_counts;
  CHECK(k.mul.bits == k.nav.bits + k.split.bits);
  CHECK(k.mul.errors == k.nav.errors + k.split.errors);
  CHECK(std::abs(r.nav_ber - static_cast<double>(k.mul.errors) / k.mul.bits) < 1e-12);
  const double com = 0.25 * static_cast<double>(k.mul.errors) / k.mul.bits +
                     0.75 * static_cast<double>(k.uni.errors) / k.uni.bits;
  CHECK(std::abs(r.com_ber - com) < 1e-12);
  CHECK(r.ci95_halfwidth.mul == doctest::Approx(wilson_halfwidth(k.mul.errors, k.mul.bits)));
}

TEST_CASE("Wilson interval coverage") {
  std::mt19937_64 eng(20240611);
  std::bernoulli_distribution b(1e-2);
  int covered = 0;
  for (int rep = 0; rep < 200; ++rep) {
    StreamCount s;
    for (int i = 0; i < 10000; ++i) s.errors += b(eng);
    s.bits = 10000;
    covered += within_wilson(s, 1e-2, 1.959963984540054);
  }
  MESSAGE("covered " << covered << " of 200");
  CHECK(covered >= 190);
  const auto iv = wilson_interval(0, 100, 1.96);
  CHECK(iv.lo == 0.0);
  CHECK(iv.hi > 0.0);
}

TEST_CASE("multi-cast BER of the span engine against the exact closed form") {
  const SystemConfig base = mo_default();
  const double ps = solve_received_power(
      [&](double p) { return ber_mo_multicast(base, p, BerFormulaMode::DerivedCorrect); }, 1e-2, 1e-20, 1e-12);
  SystemConfig c = base;
  c.tx_power = ps / (path_gain(c) * path_gain(c));
  const auto r = run_point(c, 10000, 77);
  CHECK(r.bit_counts.mul.bits == 1000000u);
  CHECK(within_wilson(r.bit_counts.mul, 1e-2, 3.0));
}

TEST_CASE("sweep continues past invalid points") {
  const auto pts = sweep(at_snr(mo_default(), 6.0), SweepAxis::Beta1, {0.8, 0.3, 0.7}, 50, 1);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].report.has_value());
  CHECK_FALSE(pts[1].report.has_value());
  CHECK_FALSE(pts[1].error.empty());
  CHECK(pts[2].report.has_value());
  CHECK(pts[2].value == 0.7);
  CHECK(pts[0].report->cfg.beta2 == doctest::Approx(0.2));
}

TEST_CASE("chip and span engines agree statistically") {
  const SystemConfig c = at_snr(mo_default(), from_db(7.0));
  const auto span = run_point(c, 400, 5, {.engine = Engine::Span});
  const auto chip = run_point(c, 400, 6, {.engine = Engine::Chip});
  const auto is = wilson_interval(span.bit_counts.mul.errors, span.bit_counts.mul.bits, 3.0);
  const auto ic = wilson_interval(chip.bit_counts.mul.errors, chip.bit_counts.mul.bits, 3.0);
  CHECK(is.lo <= ic.hi);
  CHECK(ic.lo <= is.hi);
  const auto us = wilson_interval(span.bit_counts.uni.errors, span.bit_counts.uni.bits, 3.0);
  const auto uc = wilson_interval(chip.bit_counts.uni.errors, chip.bit_counts.uni.bits, 3.0);
  CHECK(us.lo <= uc.hi);
  CHECK(uc.lo <= us.hi);
}

TEST_CASE("default impairments cost less than half a dB") {
  SystemConfig c = at_snr(mo_default(), from_db(7.0));
  const auto clean = run_point(c, 400, 11, {.engine = Engine::Chip});
  c.impairments = Impairments{};
  const auto imp = run_point(c, 400, 11);
  MESSAGE("clean " << clean.mul_ber << ", impaired " << imp.mul_ber);
  CHECK(std::abs(ber_to_db(clean.mul_ber) - ber_to_db(imp.mul_ber)) < 0.5);
  CHECK_THROWS_AS(run_point(c, 10, 1, {.engine = Engine::Span}), Error);
}

TEST_CASE("genie-aided delta fit") {
  SystemConfig c = uo_default();
  c.tx_power = 6.5;
  const auto fit = estimate_delta(c, 2000, 17, default_distance_grid(), {.genie_stage1 = true});
  MESSAGE("delta " << fit.delta << ", residual " << fit.residual_db << " dB");
  CHECK(std::abs(fit.delta - 1.0) < 0.05);
  CHECK(fit.distances.size() == fit.mc_ber.size());
  CHECK(fit.fitted_ber.size() == fit.mc_ber.size());
  CHECK_THROWS_AS(estimate_delta(mo_default(), 10, 1), Error);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "inac/channel.hpp"
#include "inac/config_io.hpp"

using namespace inac;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::OutOfRange;
}

}  // namespace

TEST_CASE("round trip through JSON") {
  SystemConfig c = uo_default();
  c.xi = 0.25;
  c.distance = 1.4e7;
  c.impairments = Impairments{7.0, 2e-6};
  c.frame_symbols = 40;
  CHECK(parse_config(dump_config(c)) == c);
  CHECK(parse_config(dump_config(SystemConfig{})) == SystemConfig{});
}

TEST_CASE("dB keys and C/N0") {
  auto c = parse_config(R"({"tx_power_db": 10, "noise_psd_db": -204})");
  CHECK(c.tx_power == doctest::Approx(10.0));
  CHECK(c.noise_psd == doctest::Approx(kDefaultNoisePsd).epsilon(1e-12));
  c = parse_config(R"({"c_n0_dbhz": 45, "distance": 1.2e7})");
  CHECK(carrier_to_noise(c) == doctest::Approx(from_db(45.0)).epsilon(1e-10));
}

TEST_CASE("scenario strings and impairments") {
  auto c = parse_config(R"({"scenario": "UO_INAC", "beta1": 0.3, "beta2": 0.7, "impairments": true})");
  CHECK(c.scenario == Scenario::UoInac);
  REQUIRE(c.impairments);
  CHECK(*c.impairments == Impairments{});
  c = parse_config(R"({"impairments": {"residual_doppler": 2}})");
  CHECK(c.impairments->residual_doppler == 2.0);
  CHECK(c.impairments->phase_noise_variance == 1e-6);
  c = parse_config(R"({"impairments": null})", c);
  CHECK_FALSE(c.impairments);
}

TEST_CASE("invalid documents") {
  CHECK(code_of([] { parse_config(R"({"beta3": 1})"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config(R"({"beta1": "x"})"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("{"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config("[1]"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_config(R"({"impairments": {"jitter": 1}})"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { load_config("/nonexistent/cfg.json"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("overrides") {
  auto c = apply_overrides(mo_default(), {{"distance", "1.6e7"}, {"scenario", "UO_INAC"}, {"impairments.residual_doppler", "3"}});
  CHECK(c.distance == 1.6e7);
  CHECK(c.scenario == Scenario::UoInac);
  REQUIRE(c.impairments);
  CHECK(c.impairments->residual_doppler == 3.0);
  CHECK(code_of([] { apply_overrides({}, {{"nope", "1"}}); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { apply_overrides({}, {{"beta.x", "1"}}); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("load from file") {
  const auto p = std::filesystem::temp_directory_path() / "inac_cfg_test.json";
  {
    std::ofstream os(p);
    os << R"({"r_com": 2000, "frame_symbols": 10})";
  }
  const auto c = load_config(p);
  CHECK(c.r_com == 2000.0);
  CHECK(c.frame_symbols == 10);
  std::filesystem::remove(p);
}

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inac/channel.hpp"
#include "inac/config_io.hpp"
#include "inac/experiments.hpp"
#include "inac/phy_rx.hpp"
#include "inac/phy_tx.hpp"
#include "inac/pn.hpp"

namespace {

std::map<std::string, std::string> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, std::string> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw inac::Error(inac::ErrorCode::ConfigInvalid, "--set expects key=value, got " + s);
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw inac::Error(inac::ErrorCode::ConfigInvalid, "cannot write " + path);
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA INAC link simulator"};
  std::string config, experiment, out = "out", mode = "derived_correct", replay;
  std::string export_pn, pn_file, dump_burst, trace;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool paper_scale = false, list = false;
  std::vector<std::string> sets;

  app.add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "experiment name");
  auto* trials_opt = app.add_option("--trials", trials, "frames per point")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "master seed (default $INAC_SIM_SEED or 1)");
  app.add_option("--workers", workers, "worker threads, 0 = all cores");
  app.add_option("--mode", mode, "closed-form mode")->check(CLI::IsMember({"paper_literal", "derived_correct"}));
  app.add_option("--out", out, "output directory");
  app.add_option("--set", sets, "config override key=value (repeatable)");
  app.add_option("--replay", replay, "re-run the experiment recorded in a manifest")->check(CLI::ExistingFile);
  app.add_flag("--paper-scale", paper_scale, "1e6 frames per point");
  app.add_flag("--list", list, "print experiment names");
  app.add_option("--export-pn", export_pn, "write the spreading code as text");
  app.add_option("--pn-file", pn_file, "spreading code text file")->check(CLI::ExistingFile);
  app.add_option("--dump-burst", dump_burst, "write one transmitted burst");
  app.add_option("--trace", trace, "write per-symbol SIC trace CSV for one received burst");
  CLI11_PARSE(app, argc, argv);

  if (seed_opt->count() == 0) {
    if (const char* env = std::getenv("INAC_SIM_SEED")) {
      try {
        seed = std::stoull(env);
      } catch (const std::exception&) {
        std::cerr << "error: INAC_SIM_SEED is not an integer\n";
        return 2;
      }
    } else {
      seed = 1;
    }
  }
  if (paper_scale && trials_opt->count() == 0) trials = 1000000;

  try {
    if (list) {
      for (const auto& n : inac::experiment_names()) std::cout << n << '\n';
      return 0;
    }
    if (!replay.empty()) {
      inac::ExperimentSpec spec = inac::spec_from_manifest(replay);
      spec.output_dir = out;
      spec.workers = workers;
      const auto r = inac::run_experiment(spec);
      for (const auto& f : r.files) std::cout << f.string() << '\n';
      return r.status;
    }

    inac::SystemConfig cfg = config.empty() ? inac::SystemConfig{} : inac::load_config(config);
    const auto overrides = parse_sets(sets);
    cfg = inac::apply_overrides(cfg, overrides);
    bool acted = false;

    std::optional<inac::PnSequence> pn;
    if (!pn_file.empty()) {
      std::ifstream is(pn_file);
      pn = inac::read_chips(is, cfg.chip_rate);
    }
    auto code = [&]() { return pn ? *pn : inac::default_pn(cfg); };

    if (!export_pn.empty()) {
      auto os = open_out(export_pn);
      inac::write_chips(os, code());
      acted = true;
    }
    if (!dump_burst.empty() || !trace.empty()) {
      inac::validate(cfg);
      const inac::PnSequence c = code();
      const auto burst = inac::make_burst(cfg, c, seed);
      if (!dump_burst.empty()) {
        auto os = open_out(dump_burst);
        inac::write_burst(os, burst.baseband, cfg.chip_rate, seed);
      }
      if (!trace.empty()) {
        const auto real = inac::realize(cfg, seed, burst.baseband.size());
        const Eigen::VectorXd rx = inac::apply(burst, real, cfg);
        inac::SicOptions so;
        so.delay_chips = real.delay_chips;
        const auto dec = inac::decode_burst(rx, c, cfg, inac::received_power(cfg), so);
        auto os = open_out(trace);
        inac::write_trace_csv(os, dec, burst.streams, cfg);
      }
      acted = true;
    }
    if (!experiment.empty()) {
      inac::ExperimentSpec spec;
      spec.name = experiment;
      spec.config_overrides = overrides;
      if (!config.empty()) spec.config_path = config;
      spec.output_dir = out;
      spec.trials = trials;
      spec.seed = seed;
      spec.workers = workers;
      spec.mode = inac::mode_from_string(mode);
      if (!pn_file.empty()) spec.pn_file = pn_file;
      const auto r = inac::run_experiment(spec);
      for (const auto& f : r.files) std::cout << f.string() << '\n';
      for (const auto& [k, v] : r.verdicts) std::cout << k << ": " << v << '\n';
      return r.status;
    }
    if (!acted) {
      std::cerr << "nothing to do; pass --experiment, --replay, --export-pn, --dump-burst or --trace\n";
      return 2;
    }
  } catch (const inac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == inac::ErrorCode::UnknownExperiment ? 3 : 1;
  }
  return 0;
}

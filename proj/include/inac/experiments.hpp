#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inac/analytic.hpp"
#include "inac/model.hpp"

namespace inac {

struct ExperimentSpec {
  std::string name;
  std::map<std::string, std::string> config_overrides;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> config_path;
  /// Used instead of config_path when set (manifest replay).
  std::optional<SystemConfig> base_config;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  BerFormulaMode mode = BerFormulaMode::DerivedCorrect;
  std::optional<std::filesystem::path> pn_file;
};

struct ExperimentResult {
  int status = 0;
  std::vector<std::filesystem::path> files;
  std::map<std::string, std::string> verdicts;
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

/// Throws UnknownExperiment or ConfigInvalid before anything is written.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Rebuilds the spec recorded in manifest.json; output_dir is left for the caller.
ExperimentSpec spec_from_manifest(const std::filesystem::path& manifest);

/// SHA-1 of "blob <size>\0" + content, hex.
std::string git_blob_hash(const std::string& content);

std::string_view to_string(BerFormulaMode m);
BerFormulaMode mode_from_string(std::string_view s);

}  // namespace inac

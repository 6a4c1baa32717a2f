#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "inac/model.hpp"

namespace inac {

/// JSON text; keys mirror SystemConfig fields. `tx_power_db`, `noise_psd_db` and
/// `c_n0_dbhz` are accepted as dB alternatives and converted here.
SystemConfig parse_config(const std::string& text, SystemConfig base = {});
SystemConfig load_config(const std::filesystem::path& path, SystemConfig base = {});
std::string dump_config(const SystemConfig& cfg, int indent = 2);

/// key=value pairs; nested impairment keys use "impairments.residual_doppler".
SystemConfig apply_overrides(SystemConfig cfg, const std::map<std::string, std::string>& overrides);

}  // namespace inac

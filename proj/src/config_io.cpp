#include "inac/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inac/channel.hpp"

namespace inac {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

double number(const json& v, const std::string& key) {
  if (!v.is_number()) invalid("'" + key + "' must be a number");
  return v.get<double>();
}

void apply_key(SystemConfig& cfg, const std::string& key, const json& v, std::optional<double>& cn0) {
  if (key == "beta1") cfg.beta1 = number(v, key);
  else if (key == "beta2") cfg.beta2 = number(v, key);
  else if (key == "xi") cfg.xi = number(v, key);
  else if (key == "r_nav") cfg.r_nav = number(v, key);
  else if (key == "r_com") cfg.r_com = number(v, key);
  else if (key == "chip_rate") cfg.chip_rate = number(v, key);
  else if (key == "pn_length") cfg.pn_length = static_cast<int>(number(v, key));
  else if (key == "f_c") cfg.f_c = number(v, key);
  else if (key == "b_fe") cfg.b_fe = number(v, key);
  else if (key == "b_l") cfg.b_l = number(v, key);
  else if (key == "t_coh") cfg.t_coh = number(v, key);
  else if (key == "distance") cfg.distance = number(v, key);
  else if (key == "tx_power") cfg.tx_power = number(v, key);
  else if (key == "tx_power_db") cfg.tx_power = from_db(number(v, key));
  else if (key == "noise_psd") cfg.noise_psd = number(v, key);
  else if (key == "noise_psd_db") cfg.noise_psd = from_db(number(v, key));
  else if (key == "c_n0_dbhz") cn0 = number(v, key);
  else if (key == "delta") cfg.delta = number(v, key);
  else if (key == "frame_symbols") cfg.frame_symbols = static_cast<int>(number(v, key));
  else if (key == "scenario") {
    if (!v.is_string()) invalid("'scenario' must be a string");
    cfg.scenario = scenario_from_string(v.get<std::string>());
  } else if (key == "impairments") {
    if (v.is_null() || (v.is_boolean() && !v.get<bool>())) {
      cfg.impairments.reset();
      return;
    }
    Impairments imp = cfg.impairments.value_or(Impairments{});
    if (v.is_object()) {
      for (const auto& [k, x] : v.items()) {
        if (k == "residual_doppler") imp.residual_doppler = number(x, k);
        else if (k == "phase_noise_variance") imp.phase_noise_variance = number(x, k);
        else invalid("unknown impairment key '" + k + "'");
      }
    } else if (!(v.is_boolean() && v.get<bool>())) {
      invalid("'impairments' must be an object, true, false or null");
    }
    cfg.impairments = imp;
  } else {
    invalid("unknown config key '" + key + "'");
  }
}

SystemConfig apply_object(SystemConfig cfg, const json& j) {
  if (!j.is_object()) invalid("config root must be an object");
  std::optional<double> cn0;
  for (const auto& [k, v] : j.items()) apply_key(cfg, k, v, cn0);
  if (cn0) cfg.tx_power = tx_power_for_cn0(cfg, *cn0);
  return cfg;
}

}  // namespace

SystemConfig parse_config(const std::string& text, SystemConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    invalid(e.what());
  }
  return apply_object(std::move(base), j);
}

SystemConfig load_config(const std::filesystem::path& path, SystemConfig base) {
  std::ifstream in(path);
  if (!in) invalid("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string dump_config(const SystemConfig& cfg, int indent) {
  json j = json::object();
  j["beta1"] = cfg.beta1;
  j["beta2"] = cfg.beta2;
  j["xi"] = cfg.xi;
  j["r_nav"] = cfg.r_nav;
  j["r_com"] = cfg.r_com;
  j["chip_rate"] = cfg.chip_rate;
  j["pn_length"] = cfg.pn_length;
  j["f_c"] = cfg.f_c;
  j["b_fe"] = cfg.b_fe;
  j["b_l"] = cfg.b_l;
  j["t_coh"] = cfg.t_coh;
  j["distance"] = cfg.distance;
  j["tx_power"] = cfg.tx_power;
  j["noise_psd"] = cfg.noise_psd;
  j["delta"] = cfg.delta;
  j["scenario"] = std::string(to_string(cfg.scenario));
  j["frame_symbols"] = cfg.frame_symbols;
  if (cfg.impairments)
    j["impairments"] = {{"residual_doppler", cfg.impairments->residual_doppler},
                        {"phase_noise_variance", cfg.impairments->phase_noise_variance}};
  else
    j["impairments"] = nullptr;
  return j.dump(indent);
}

SystemConfig apply_overrides(SystemConfig cfg, const std::map<std::string, std::string>& overrides) {
  json j = json::object();
  for (const auto& [key, text] : overrides) {
    json v;
    try {
      v = json::parse(text);
    } catch (const json::exception&) {
      v = text;
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      j[key] = v;
    } else {
      const std::string head = key.substr(0, dot);
      if (head != "impairments") invalid("unknown config key '" + key + "'");
      if (!j.contains(head)) j[head] = json::object();
      j[head][key.substr(dot + 1)] = v;
    }
  }
  return apply_object(std::move(cfg), j);
}

}  // namespace inac

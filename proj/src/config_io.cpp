// SPDX-License-Identifier: Apache-2.0
//
// isac-secbf: secure transmit beamforming for integrated sensing and
// communication under communication and sensing eavesdroppers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "isac/config_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "isac/units.hpp"

namespace isac {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"system", {"n_t", "k_users", "p_max_dbm", "theta_t_deg", "rcs"}},
      {"thresholds", {"gamma_s_dbm", "gamma_s_db", "gamma_se_dbm", "gamma_se_db"}},
      {"noise", {"sigma2_user_dbm", "sigma2_target_dbm", "sigma2_bs_dbm"}},
      {"geometry", {"d_bu", "d_ut", "d_bt", "ple_bu", "ple_bt", "ple_ut", "c0_db"}},
      {"algorithm", {"delta", "max_iters", "rank_tol", "solver_tol", "init_rho", "baseline_mu"}},
  };
  return keys;
}

template <typename T>
bool read(const YAML::Node& section, const std::string& sec, const std::string& key, T& out) {
  const YAML::Node node = section[key];
  if (!node) return false;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(sec + "." + key, "has the wrong type");
  }
  return true;
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config", std::string("not valid YAML: ") + e.what());
  }
  SystemConfig cfg = default_config();
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("config", "top level must be a mapping");

  for (const auto& item : root) {
    const auto name = item.first.as<std::string>();
    if (name == "seed") continue;
    const auto it = schema().find(name);
    if (it == schema().end()) throw ConfigError(name, "unknown section");
    if (!item.second.IsMap()) throw ConfigError(name, "must be a mapping");
    for (const auto& entry : item.second) {
      const auto key = entry.first.as<std::string>();
      if (!it->second.contains(key)) throw ConfigError(name + "." + key, "unknown key");
    }
  }

  double x = 0.0;
  if (const auto s = root["system"]) {
    read(s, "system", "n_t", cfg.n_t);
    int k = 0;
    if (read(s, "system", "k_users", k)) {
      if (k < 1) throw ConfigError("k_users", "must be a positive integer");
      set_user_count(cfg, k);
    }
    if (read(s, "system", "p_max_dbm", x)) cfg.p_max = dbm_to_watt(x);
    if (read(s, "system", "theta_t_deg", x)) cfg.theta_t = deg_to_rad(x);
    read(s, "system", "rcs", cfg.rcs);
  }
  if (const auto s = root["thresholds"]) {
    if (s["gamma_s_dbm"] && s["gamma_s_db"]) throw ConfigError("thresholds.gamma_s_db", "conflicts with gamma_s_dbm");
    if (s["gamma_se_dbm"] && s["gamma_se_db"]) throw ConfigError("thresholds.gamma_se_db", "conflicts with gamma_se_dbm");
    if (read(s, "thresholds", "gamma_s_dbm", x)) cfg.gamma_s = threshold_from_dbm(x);
    if (read(s, "thresholds", "gamma_s_db", x)) cfg.gamma_s = db_to_linear(x);
    if (read(s, "thresholds", "gamma_se_dbm", x)) cfg.gamma_se = threshold_from_dbm(x);
    if (read(s, "thresholds", "gamma_se_db", x)) cfg.gamma_se = db_to_linear(x);
  }
  if (const auto s = root["noise"]) {
    if (read(s, "noise", "sigma2_user_dbm", x)) cfg.sigma2_user = dbm_to_watt(x);
    if (read(s, "noise", "sigma2_target_dbm", x)) cfg.sigma2_target = dbm_to_watt(x);
    if (read(s, "noise", "sigma2_bs_dbm", x)) cfg.sigma2_bs = dbm_to_watt(x);
  }
  if (const auto s = root["geometry"]) {
    read(s, "geometry", "d_bu", cfg.d_bu);
    read(s, "geometry", "d_ut", cfg.d_ut);
    read(s, "geometry", "d_bt", cfg.d_bt);
    read(s, "geometry", "ple_bu", cfg.ple_bu);
    read(s, "geometry", "ple_bt", cfg.ple_bt);
    read(s, "geometry", "ple_ut", cfg.ple_ut);
    if (read(s, "geometry", "c0_db", x)) cfg.c0 = db_to_linear(x);
  }
  if (const auto s = root["algorithm"]) {
    read(s, "algorithm", "delta", cfg.delta);
    read(s, "algorithm", "max_iters", cfg.max_iters);
    read(s, "algorithm", "rank_tol", cfg.rank_tol);
    read(s, "algorithm", "solver_tol", cfg.solver_tol);
    read(s, "algorithm", "init_rho", cfg.init_rho);
    read(s, "algorithm", "baseline_mu", cfg.baseline_mu);
  }
  if (root["seed"]) {
    try {
      cfg.seed = root["seed"].as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigError("seed", "must be an unsigned integer");
    }
  }
  validate(cfg);
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const SystemConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_t" << YAML::Value << cfg.n_t;
  out << YAML::Key << "k_users" << YAML::Value << cfg.k_users;
  out << YAML::Key << "p_max_dbm" << YAML::Value << watt_to_dbm(cfg.p_max);
  out << YAML::Key << "theta_t_deg" << YAML::Value << rad_to_deg(cfg.theta_t);
  out << YAML::Key << "rcs" << YAML::Value << cfg.rcs;
  out << YAML::EndMap;
  out << YAML::Key << "thresholds" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gamma_s_dbm" << YAML::Value << watt_to_dbm(cfg.gamma_s);
  out << YAML::Key << "gamma_se_dbm" << YAML::Value << watt_to_dbm(cfg.gamma_se);
  out << YAML::EndMap;
  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "sigma2_user_dbm" << YAML::Value << watt_to_dbm(cfg.sigma2_user);
  out << YAML::Key << "sigma2_target_dbm" << YAML::Value << watt_to_dbm(cfg.sigma2_target);
  out << YAML::Key << "sigma2_bs_dbm" << YAML::Value << watt_to_dbm(cfg.sigma2_bs);
  out << YAML::EndMap;
  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "d_bu" << YAML::Value << YAML::Flow << cfg.d_bu;
  out << YAML::Key << "d_ut" << YAML::Value << YAML::Flow << cfg.d_ut;
  out << YAML::Key << "d_bt" << YAML::Value << cfg.d_bt;
  out << YAML::Key << "ple_bu" << YAML::Value << cfg.ple_bu;
  out << YAML::Key << "ple_bt" << YAML::Value << cfg.ple_bt;
  out << YAML::Key << "ple_ut" << YAML::Value << cfg.ple_ut;
  out << YAML::Key << "c0_db" << YAML::Value << linear_to_db(cfg.c0);
  out << YAML::EndMap;
  out << YAML::Key << "algorithm" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "delta" << YAML::Value << cfg.delta;
  out << YAML::Key << "max_iters" << YAML::Value << cfg.max_iters;
  out << YAML::Key << "rank_tol" << YAML::Value << cfg.rank_tol;
  out << YAML::Key << "solver_tol" << YAML::Value << cfg.solver_tol;
  out << YAML::Key << "init_rho" << YAML::Value << cfg.init_rho;
  out << YAML::Key << "baseline_mu" << YAML::Value << cfg.baseline_mu;
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::uint64_t config_hash(const SystemConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : dump_config(cfg)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace isac

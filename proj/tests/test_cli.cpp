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

// Config parsing plus end-to-end runs of the command-line binary. The binary
// path comes in as ISAC_CLI_PATH.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "isac/config_io.hpp"
#include "isac/units.hpp"

using namespace isac;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

std::string field_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ISAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("isac_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("empty config is the default profile", "[cli][config]") {
  const SystemConfig cfg = parse_config("{}");
  const SystemConfig def = default_config();
  CHECK(cfg.n_t == def.n_t);
  CHECK(cfg.p_max == def.p_max);
  CHECK(cfg.gamma_s == def.gamma_s);
  CHECK(dump_config(cfg) == dump_config(def));
}

TEST_CASE("config errors name the field", "[cli][config]") {
  CHECK(field_of("system:\n  foo: 1\n") == "system.foo");
  CHECK(field_of("bogus:\n  x: 1\n") == "bogus");
  CHECK(field_of("system:\n  k_users: 0\n") == "k_users");
  CHECK(field_of("system:\n  n_t: abc\n") == "system.n_t");
  CHECK(field_of("thresholds:\n  gamma_s_dbm: 30\n  gamma_s_db: 30\n") == "thresholds.gamma_s_db");
  CHECK(field_of("system: [1, 2\n") == "config");
  CHECK_THROWS_AS(load_config("/nonexistent/isac.yaml"), ConfigError);
}

TEST_CASE("threshold keys", "[cli][config]") {
  const SystemConfig a = parse_config("thresholds:\n  gamma_s_dbm: 30\n");
  CHECK(a.gamma_s == Approx(1.0));
  const SystemConfig b = parse_config("thresholds:\n  gamma_s_db: 30\n");
  CHECK(b.gamma_s == Approx(1000.0));
}

TEST_CASE("user count without distances cycles the pattern", "[cli][config]") {
  const SystemConfig cfg = parse_config("system:\n  k_users: 5\n");
  REQUIRE(cfg.d_bu.size() == 5);
  CHECK(cfg.d_bu[3] == cfg.d_bu[0]);
  CHECK(cfg.d_ut[4] == cfg.d_ut[1]);
}

TEST_CASE("dump and parse round trip", "[cli][config]") {
  SystemConfig cfg = default_config();
  cfg.n_t = 12;
  cfg.p_max = dbm_to_watt(22.0);
  cfg.gamma_s = threshold_from_dbm(28.0);
  cfg.seed = 99;
  const SystemConfig back = parse_config(dump_config(cfg));
  CHECK(back.n_t == 12);
  CHECK(back.seed == 99);
  CHECK(back.p_max == Approx(cfg.p_max).epsilon(1e-12));
  CHECK(back.gamma_s == Approx(cfg.gamma_s).epsilon(1e-12));
  CHECK(dump_config(back) == dump_config(cfg));
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg) != config_hash(default_config()));
}

TEST_CASE("shipped default config matches the built-in profile", "[cli][config]") {
  const SystemConfig file = load_config(std::string(ISAC_SOURCE_DIR) + "/configs/default.yaml");
  CHECK(config_hash(file) == config_hash(default_config()));
}

TEST_CASE("binary exit codes", "[cli][binary]") {
  const fs::path out = scratch("codes");
  CHECK(run_cli("solve --out " + out.string()) == 0);
  CHECK(fs::exists(out / "manifest.txt"));
  CHECK(fs::exists(out / "solve_trace.csv"));

  const fs::path bad = out / "bad.yaml";
  {
    std::ofstream f(bad);
    f << "system:\n  k_users: 0\n";
  }
  CHECK(run_cli("solve --config " + bad.string() + " --out " + out.string()) == 2);

  const fs::path hard = out / "hard.yaml";
  {
    std::ofstream f(hard);
    f << "thresholds:\n  gamma_s_dbm: 60\n";
  }
  CHECK(run_cli("solve --config " + hard.string() + " --out " + out.string()) == 3);
  CHECK(run_cli("no-such-command") != 0);
  fs::remove_all(out);
}

TEST_CASE("identical invocations write identical files", "[cli][binary]") {
  const fs::path a = scratch("same_a");
  const fs::path b = scratch("same_b");
  const std::string args = "feasibility --trials 2 --gamma-s 26,34 --gamma-se 5 --seed 3 --out ";
  REQUIRE(run_cli(args + a.string()) == 0);
  REQUIRE(run_cli(args + b.string()) == 0);
  for (const char* name : {"feasibility.csv", "feasibility_trials.csv", "config.yaml"}) {
    INFO(name);
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  // The manifest records the command line, which names the directory.
  const std::string ma = slurp(a / "manifest.txt");
  const std::string mb = slurp(b / "manifest.txt");
  CHECK(ma.substr(ma.find("config_hash")) == mb.substr(mb.find("config_hash")));
  fs::remove_all(a);
  fs::remove_all(b);
}

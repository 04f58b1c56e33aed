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

// YAML configuration files. Sections mirror SystemConfig; values are given in
// the units the scenario tables use (dBm, dB, degrees, meters) and converted
// to linear SI exactly once, here.
//
//   system:     n_t, k_users, p_max_dbm, theta_t_deg, rcs
//   thresholds: gamma_s_dbm | gamma_s_db, gamma_se_dbm | gamma_se_db
//   noise:      sigma2_user_dbm, sigma2_target_dbm, sigma2_bs_dbm
//   geometry:   d_bu, d_ut (lists, one entry per user), d_bt,
//               ple_bu, ple_bt, ple_ut, c0_db
//   algorithm:  delta, max_iters, rank_tol, solver_tol, init_rho, baseline_mu
//   seed:       unsigned integer
//
// Every key is optional and falls back to default_config(). If k_users is
// set without distance lists, the three-user pattern is cycled. Unknown keys
// are rejected.

#ifndef ISAC_CONFIG_IO_HPP_
#define ISAC_CONFIG_IO_HPP_

#include <cstdint>
#include <string>

#include "isac/scenario.hpp"

namespace isac {

/// Parse YAML text. Throws ConfigError naming the offending field (for
/// example "system.k_users") on malformed, unknown or invalid entries.
SystemConfig parse_config(const std::string& text);

/// Read and parse a file. A missing file is reported as field "config".
SystemConfig load_config(const std::string& path);

/// Inverse of parse_config in the same schema. Thresholds are written with
/// the *_dbm keys.
std::string dump_config(const SystemConfig& cfg);

/// 64-bit FNV-1a of dump_config(cfg); used to tag result manifests.
std::uint64_t config_hash(const SystemConfig& cfg);

}  // namespace isac

#endif  // ISAC_CONFIG_IO_HPP_

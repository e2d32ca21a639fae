/**
 * @file config.hpp
 * @brief Scenario configuration: parsing, validation, power resolution, and
 *        canonical serialization.
 *
 * Config files are flat UTF-8 `key = value` text with `#` comments. Keys match
 * the field names below. The desired source transmits 1 W; the noise power
 * follows from snr_db and the interferer powers from inr_db, so the input SNR
 * is swept by adjusting only the noise power.
 */
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace relaybeam {

struct ScenarioConfig {
  int M = 8;  // relays
  int K = 3;  // sources (desired first)
  double snr_db = 10.0;
  double inr_db = 10.0;
  // Strong-over-weak power split between the interferers; their summed power
  // is preserved. 1 means equal powers.
  double interferer_power_ratio = 1.0;
  double pt_dbw = 1.0;        // total relay transmit power budget
  double epsilon_max = 0.5;   // channel mismatch level
  double rho = 2.0;           // path loss exponent
  double L_db = 10.0;         // path loss at the destination
  double sigma_s_db = 3.0;    // shadowing spread
  int snapshots = 100;
  int trials = 500;
  int n_components = 0;       // 0 = auto (95% spectrum mass)
  bool g_mismatch = false;    // also perturb the relay->destination channel
  bool paper_literal_eq33 = false;  // published solver form without the P_T factor
  bool static_channels = true;      // hold F, g fixed within a trial
  bool time_averaged_sweep = false; // sweep readout: snapshot-averaged SINR
  std::uint64_t seed = 12345;
  std::string sweep_axis = "pt_dbw";  // pt_dbw | snr_db | snapshots
  std::string sweep_grid = "1:5:1";   // start:stop:step or comma list

  double desired_power_w() const { return 1.0; }
  double noise_power_w() const;
  double pt_w() const;
  // Length-K source powers in watts: desired first, then interferers.
  Eigen::VectorXd source_powers_w() const;
};

// Parses `key = value` text. Unknown keys, malformed values, and out-of-range
// settings raise config_error naming the key. `require_all` demands the core
// keys (M, K, snr_db, inr_db, pt_dbw, epsilon_max, snapshots, trials, seed).
ScenarioConfig parse_config(const std::string& text, bool require_all = true);
ScenarioConfig load_config_file(const std::string& path,
                                bool require_all = true);

// Applies `--key value` style overrides on top of an existing config.
void apply_overrides(ScenarioConfig& cfg,
                     const std::map<std::string, std::string>& overrides);

void validate(const ScenarioConfig& cfg);

// Canonical `key = value` serialization with every key materialized; parsing
// it back reproduces the config exactly.
std::string serialize_config(const ScenarioConfig& cfg);

// Numeric sweep grid: "a:b:step" (inclusive) or "v1,v2,...". Empty result or
// malformed text raises config_error on the given key name.
std::vector<double> parse_grid(const std::string& text,
                               const std::string& key = "sweep_grid");

}  // namespace relaybeam

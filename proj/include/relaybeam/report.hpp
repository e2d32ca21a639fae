/**
 * @file report.hpp
 * @brief CSV / gnuplot output and the replayable run manifest.
 *
 * CSV schema (RFC 4180, LF line endings, UTF-8, 9 significant digits):
 *   algorithm,axis_name,axis_value,sinr_db,trials,snapshots,seed
 * The manifest is itself a valid config file with every default materialized,
 * prefixed by `#` metadata comments; feeding it back through `run --config`
 * reproduces the CSV byte for byte.
 */
#pragma once

#include <string>
#include <vector>

#include "relaybeam/simulator.hpp"

namespace relaybeam {

inline constexpr const char* kToolVersion = "relaybeam 0.1.0";

std::string format_sig9(double v);
std::string csv_quote(const std::string& field);

std::string report_to_csv(const SinrReport& report);
std::string report_to_dat(const SinrReport& report);

struct RunManifest {
  ScenarioConfig config;
  std::string version = kToolVersion;
  std::string started;   // ISO 8601 UTC
  std::string finished;  // ISO 8601 UTC
  std::vector<std::string> outputs;
};

std::string manifest_text(const RunManifest& manifest);

std::string utc_timestamp();

void write_file(const std::string& path, const std::string& content);

}  // namespace relaybeam

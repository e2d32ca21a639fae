#include "relaybeam/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relaybeam {

std::string format_sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string report_to_csv(const SinrReport& report) {
  std::ostringstream os;
  os << "algorithm,axis_name,axis_value,sinr_db,trials,snapshots,seed\n";
  for (const auto& series : report.series) {
    for (std::size_t i = 0; i < report.axis.size(); ++i) {
      os << csv_quote(series.algorithm) << ',' << csv_quote(report.axis_name)
         << ',' << format_sig9(report.axis[i]) << ','
         << format_sig9(series.sinr_db[i]) << ',' << report.config.trials
         << ',' << report.config.snapshots << ',' << report.config.seed
         << '\n';
    }
  }
  return os.str();
}

std::string report_to_dat(const SinrReport& report) {
  std::ostringstream os;
  os << "# " << report.axis_name << " sinr_db   (one block per algorithm)\n";
  bool first = true;
  for (const auto& series : report.series) {
    if (!first) os << "\n\n";
    first = false;
    os << "# algorithm: " << series.algorithm << '\n';
    for (std::size_t i = 0; i < report.axis.size(); ++i)
      os << format_sig9(report.axis[i]) << ' '
         << format_sig9(series.sinr_db[i]) << '\n';
  }
  return os.str();
}

std::string manifest_text(const RunManifest& manifest) {
  std::ostringstream os;
  os << "# run manifest (valid config file; replay with: relaybeam run"
        " --config <this file>)\n";
  os << "# version: " << manifest.version << '\n';
  os << "# started: " << manifest.started << '\n';
  os << "# finished: " << manifest.finished << '\n';
  for (const auto& out : manifest.outputs) os << "# output: " << out << '\n';
  os << serialize_config(manifest.config);
  return os.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(),
            static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace relaybeam

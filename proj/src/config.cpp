#include "relaybeam/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "relaybeam/errors.hpp"
#include "relaybeam/types.hpp"

namespace relaybeam {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d))
      throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw config_error(key, "expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(i);
  } catch (const std::exception&) {
    throw config_error(key, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(i);
  } catch (const std::exception&) {
    throw config_error(key, "expected an unsigned integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw config_error(key, "expected a boolean, got '" + v + "'");
}

// One setter per key keeps parse/override/serialize in a single table.
struct KeyHandler {
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const std::vector<std::pair<std::string, KeyHandler>>& key_table() {
  static const std::vector<std::pair<std::string, KeyHandler>> table = {
      {"M",
       {[](ScenarioConfig& c, const std::string& v) { c.M = to_int("M", v); },
        [](const ScenarioConfig& c) { return std::to_string(c.M); }}},
      {"K",
       {[](ScenarioConfig& c, const std::string& v) { c.K = to_int("K", v); },
        [](const ScenarioConfig& c) { return std::to_string(c.K); }}},
      {"snr_db",
       {[](ScenarioConfig& c, const std::string& v) {
          c.snr_db = to_double("snr_db", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.snr_db); }}},
      {"inr_db",
       {[](ScenarioConfig& c, const std::string& v) {
          c.inr_db = to_double("inr_db", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.inr_db); }}},
      {"interferer_power_ratio",
       {[](ScenarioConfig& c, const std::string& v) {
          c.interferer_power_ratio = to_double("interferer_power_ratio", v);
        },
        [](const ScenarioConfig& c) {
          return fmt_double(c.interferer_power_ratio);
        }}},
      {"pt_dbw",
       {[](ScenarioConfig& c, const std::string& v) {
          c.pt_dbw = to_double("pt_dbw", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.pt_dbw); }}},
      {"epsilon_max",
       {[](ScenarioConfig& c, const std::string& v) {
          c.epsilon_max = to_double("epsilon_max", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.epsilon_max); }}},
      {"rho",
       {[](ScenarioConfig& c, const std::string& v) {
          c.rho = to_double("rho", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.rho); }}},
      {"L_db",
       {[](ScenarioConfig& c, const std::string& v) {
          c.L_db = to_double("L_db", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.L_db); }}},
      {"sigma_s_db",
       {[](ScenarioConfig& c, const std::string& v) {
          c.sigma_s_db = to_double("sigma_s_db", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.sigma_s_db); }}},
      {"snapshots",
       {[](ScenarioConfig& c, const std::string& v) {
          c.snapshots = to_int("snapshots", v);
        },
        [](const ScenarioConfig& c) { return std::to_string(c.snapshots); }}},
      {"trials",
       {[](ScenarioConfig& c, const std::string& v) {
          c.trials = to_int("trials", v);
        },
        [](const ScenarioConfig& c) { return std::to_string(c.trials); }}},
      {"n_components",
       {[](ScenarioConfig& c, const std::string& v) {
          c.n_components = (v == "auto") ? 0 : to_int("n_components", v);
        },
        [](const ScenarioConfig& c) {
          return c.n_components == 0 ? std::string("auto")
                                     : std::to_string(c.n_components);
        }}},
      {"g_mismatch",
       {[](ScenarioConfig& c, const std::string& v) {
          c.g_mismatch = to_bool("g_mismatch", v);
        },
        [](const ScenarioConfig& c) {
          return c.g_mismatch ? "true" : "false";
        }}},
      {"paper_literal_eq33",
       {[](ScenarioConfig& c, const std::string& v) {
          c.paper_literal_eq33 = to_bool("paper_literal_eq33", v);
        },
        [](const ScenarioConfig& c) {
          return c.paper_literal_eq33 ? "true" : "false";
        }}},
      {"static_channels",
       {[](ScenarioConfig& c, const std::string& v) {
          c.static_channels = to_bool("static_channels", v);
        },
        [](const ScenarioConfig& c) {
          return c.static_channels ? "true" : "false";
        }}},
      {"time_averaged_sweep",
       {[](ScenarioConfig& c, const std::string& v) {
          c.time_averaged_sweep = to_bool("time_averaged_sweep", v);
        },
        [](const ScenarioConfig& c) {
          return c.time_averaged_sweep ? "true" : "false";
        }}},
      {"seed",
       {[](ScenarioConfig& c, const std::string& v) {
          c.seed = to_u64("seed", v);
        },
        [](const ScenarioConfig& c) { return std::to_string(c.seed); }}},
      {"sweep_axis",
       {[](ScenarioConfig& c, const std::string& v) { c.sweep_axis = v; },
        [](const ScenarioConfig& c) { return c.sweep_axis; }}},
      {"sweep_grid",
       {[](ScenarioConfig& c, const std::string& v) { c.sweep_grid = v; },
        [](const ScenarioConfig& c) { return c.sweep_grid; }}},
  };
  return table;
}

const KeyHandler* find_key(const std::string& key) {
  for (const auto& [name, handler] : key_table())
    if (name == key) return &handler;
  return nullptr;
}

const std::set<std::string>& required_keys() {
  static const std::set<std::string> keys = {
      "M",       "K",         "snr_db", "inr_db", "pt_dbw",
      "epsilon_max", "snapshots", "trials", "seed"};
  return keys;
}

}  // namespace

double ScenarioConfig::noise_power_w() const {
  return desired_power_w() / db_to_linear(snr_db);
}

double ScenarioConfig::pt_w() const { return db_to_linear(pt_dbw); }

Eigen::VectorXd ScenarioConfig::source_powers_w() const {
  Eigen::VectorXd p(K);
  p(0) = desired_power_w();
  if (K == 1) return p;
  const double per_interferer = db_to_linear(inr_db) * noise_power_w();
  const double total = per_interferer * (K - 1);
  // The first interferer carries `ratio` units against 1 unit for each of the
  // others; the summed interference power is preserved.
  const double unit = total / (interferer_power_ratio + (K - 2));
  p(1) = interferer_power_ratio * unit;
  for (int k = 2; k < K; ++k) p(k) = unit;
  return p;
}

ScenarioConfig parse_config(const std::string& text, bool require_all) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(line, "line " + std::to_string(line_no) +
                                   ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const KeyHandler* handler = find_key(key);
    if (handler == nullptr) throw config_error(key, "unknown key");
    if (value.empty()) throw config_error(key, "empty value");
    handler->set(cfg, value);
    seen.insert(key);
  }
  if (require_all)
    for (const auto& key : required_keys())
      if (seen.count(key) == 0) throw config_error(key, "missing required key");
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path, bool require_all) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw config_error(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), require_all);
}

void apply_overrides(ScenarioConfig& cfg,
                     const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, value] : overrides) {
    const KeyHandler* handler = find_key(key);
    if (handler == nullptr) throw config_error(key, "unknown key");
    handler->set(cfg, value);
  }
  validate(cfg);
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.M < 1) throw config_error("M", "must be >= 1");
  if (cfg.K < 1) throw config_error("K", "must be >= 1");
  if (cfg.snapshots < 1) throw config_error("snapshots", "must be >= 1");
  if (cfg.trials < 1) throw config_error("trials", "must be >= 1");
  if (!(cfg.epsilon_max > 0))
    throw config_error("epsilon_max", "must be positive");
  if (!(cfg.interferer_power_ratio > 0))
    throw config_error("interferer_power_ratio", "must be positive");
  if (cfg.interferer_power_ratio != 1.0 && cfg.K < 3)
    throw config_error("interferer_power_ratio",
                       "unequal interferer powers need K >= 3");
  if (cfg.sigma_s_db < 0)
    throw config_error("sigma_s_db", "must be nonnegative");
  if (!(cfg.rho > 0)) throw config_error("rho", "must be positive");
  if (cfg.n_components < 0 || cfg.n_components > cfg.M)
    throw config_error("n_components", "must be 'auto' or in [1, M]");
  if (cfg.sweep_axis != "pt_dbw" && cfg.sweep_axis != "snr_db" &&
      cfg.sweep_axis != "snapshots")
    throw config_error("sweep_axis",
                       "must be one of pt_dbw, snr_db, snapshots");
  if (cfg.sweep_axis != "snapshots")
    parse_grid(cfg.sweep_grid);  // throws on malformed or empty grids
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  for (const auto& [name, handler] : key_table())
    os << name << " = " << handler.get(cfg) << "\n";
  return os.str();
}

std::vector<double> parse_grid(const std::string& text,
                               const std::string& key) {
  const std::string s = trim(text);
  if (s.empty()) throw config_error(key, "empty grid");
  std::vector<double> grid;
  if (s.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 0;
    std::vector<std::string> parts;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3)
      throw config_error(key, "range grids use start:stop:step");
    start = to_double(key, parts[0]);
    stop = to_double(key, parts[1]);
    step = to_double(key, parts[2]);
    if (!(step > 0)) throw config_error(key, "step must be positive");
    if (stop < start) throw config_error(key, "stop must be >= start");
    for (double v = start; v <= stop + step * 1e-9; v += step)
      grid.push_back(v);
  } else {
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, ',')) {
      part = trim(part);
      if (part.empty()) throw config_error(key, "empty grid entry");
      grid.push_back(to_double(key, part));
    }
  }
  if (grid.empty()) throw config_error(key, "empty grid");
  return grid;
}

}  // namespace relaybeam

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace relaybeam {

// The projected cross-correlation vector collapsed to numerical zero; the
// caller is expected to fall back to its previous estimate.
struct degenerate_projection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure inside a solve or simulation. The simulator augments the
// message with trial/snapshot coordinates before letting it escape.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration validation failure; `key` names the offending entry.
struct config_error : std::runtime_error {
  std::string key;
  config_error(std::string key_name, const std::string& what)
      : std::runtime_error("config key '" + key_name + "': " + what),
        key(std::move(key_name)) {}
};

}  // namespace relaybeam

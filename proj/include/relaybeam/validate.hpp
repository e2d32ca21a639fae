/**
 * @file validate.hpp
 * @brief Self-contained invariant and oracle checks behind `relaybeam
 *        validate`: projector laws, recursion/batch equivalence, quadrature
 *        and grid-search oracles, solver consistency, Monte Carlo SINR
 *        cross-checks, and determinism.
 */
#pragma once

#include <string>
#include <vector>

#include "relaybeam/config.hpp"

namespace relaybeam {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured value vs bound
};

struct ValidateOptions {
  // Checks honor the solver flags of this config (notably paper_literal_eq33
  // and pt_dbw, whose combination flags the solver-consistency discrepancy).
  ScenarioConfig config;
  // Test hook: name of a check whose inputs get deliberately corrupted.
  std::string inject_fault;
};

std::vector<CheckResult> run_validation(const ValidateOptions& options);

}  // namespace relaybeam

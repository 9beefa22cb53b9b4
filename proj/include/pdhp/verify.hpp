#pragma once

#include <string>
#include <vector>

#include "pdhp/config.hpp"

namespace pdhp {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Known self-check names, in execution order: gaussian-identities,
// gradient-checks, closed-form-control, quadrature-argmin, scg.
std::vector<std::string> known_checks();

// Runs the named checks (all when the filter is empty) against the given
// configuration. Throws ConfigError for unknown names.
std::vector<CheckResult> run_checks(const ExperimentConfig& cfg,
                                    const std::vector<std::string>& filter);

}  // namespace pdhp

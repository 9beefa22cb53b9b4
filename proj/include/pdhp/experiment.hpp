#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdhp/config.hpp"
#include "pdhp/sysid.hpp"
#include "pdhp/trainer.hpp"

namespace pdhp {

// Library-level pieces of the experiment pipeline; the CLI wraps these in
// exit-code handling, and tests call them directly.

struct IdentifyResult {
  ForwardModel model;
  HoldoutReport holdout;
};

IdentifyResult identify_from_config(const ExperimentConfig& cfg);

TrainingRun train_method(const ForwardModel& model, const ExperimentConfig& cfg,
                         const std::string& method);  // "prob" or "dhp"

// Closed-loop trajectory metrics for the regulation task, with the state
// folded by the sign of x0 so excursions past zero count as overshoot.
struct TrajectoryMetrics {
  double peak_overshoot = 0.0;   // farthest excursion past 0
  double peak_undershoot = 0.0;  // return swing after the first crossing
  int settling_step = -1;        // first step from which |x| stays < 0.3
};

TrajectoryMetrics trajectory_metrics(const std::vector<Vector>& states,
                                     double x0);

// Command entry points; all return process exit codes
// (0 ok, 1 check/experiment failure, 2 usage/config error).
int cmd_identify(const std::string& config_path, const std::string& out_path);
int cmd_train(const std::string& config_path, const std::string& archive_path,
              const std::string& method);
int cmd_simulate(const std::string& archive_path, const std::string& method,
                 std::optional<double> x0, std::optional<int> steps,
                 std::optional<std::uint64_t> seed, const std::string& out_csv,
                 const std::string& plot_svg);
int cmd_compare(const std::string& archive_prob, const std::string& archive_dhp,
                std::optional<double> x0, std::optional<int> steps,
                const std::vector<std::uint64_t>& seeds,
                const std::string& out_csv, const std::string& plot_svg);
int cmd_verify(const std::string& config_path,
               const std::vector<std::string>& checks);

}  // namespace pdhp

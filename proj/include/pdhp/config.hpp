#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdhp/trainer.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Raised for malformed config files, unknown keys, out-of-range values,
// and usage errors; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment configuration with section prefixes
// (e.g. train.cycles=3). Every key has a default; files override.
struct ExperimentConfig {
  std::string plant_preset = "paper-benchmark";
  std::uint64_t seed = 1;

  // system identification
  int sysid_samples = 2000;
  int sysid_holdout_samples = 500;
  int sysid_h_bases = 15;
  int sysid_g_bases = 6;
  bool sysid_h_bias = true;
  bool sysid_g_bias = true;
  double sysid_width_scale = 1.0;
  double sysid_x_low = -4.0;
  double sysid_x_high = 4.0;
  double sysid_u_low = -3.0;
  double sysid_u_high = 3.0;
  std::string sysid_dataset_csv;  // optional export path

  // training (both methods)
  TrainConfig train;
  std::string train_log_csv = "training_log.csv";

  // evaluation
  double eval_x0 = 2.0;
  int eval_steps = 50;
  std::vector<std::uint64_t> eval_seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  bool parallel = true;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Normalized key=value serialization (every key, fixed order); this is the
// snapshot stored in archives and reparsed by later commands.
std::string serialize_config(const ExperimentConfig& cfg);

// Range checks beyond parsing; throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

}  // namespace pdhp

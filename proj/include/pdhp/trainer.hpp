#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pdhp/action.hpp"
#include "pdhp/batch.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

struct TrainConfig {
  int num_states = 200;
  double state_low = -4.0;
  double state_high = 4.0;
  int cycles = 3;
  int scg_max_iter = 10000;
  double tol_objective = 1e-3;
  double tol_weights = 1e-3;
  int action_bases = 15;
  bool action_bias = true;
  int critic_bases = 6;
  bool critic_bias = false;
  double width_scale = 1.0;
  double critic_width_scale = 2.0;  // 0 inherits width_scale
  double gamma_init = 0.01;
  SolveOptions solve;
  bool check_gradients = false;  // validate SCG gradients against differences
  Exec exec = Exec::parallel;
  std::uint64_t seed = 1;
};

struct PhaseRecord {
  int cycle = 0;
  std::string phase;  // "critic" or "action"
  int iterations = 0;
  double final_objective = 0.0;
  double weight_delta = 0.0;
  int excluded_states = 0;
};

struct TrainLogRow {
  int cycle = 0;
  std::string phase;
  int iteration = 0;
  double objective = 0.0;
  double weight_delta = 0.0;
};

struct TrainingRun {
  std::vector<Vector> state_samples;
  std::vector<PhaseRecord> phases;
  std::vector<TrainLogRow> log;
  std::vector<Matrix> gamma_history;
  RandomizedController controller;
  CriticModel critic;
};

// Target and solve providers; the conventional baseline swaps these in and
// reuses the same alternating loop.
struct TrainOps {
  std::function<std::vector<Vector>(std::span<const Vector>,
                                    const RandomizedController&,
                                    const CriticModel&, Exec)>
      targets;
  std::function<std::vector<SolveReport>(std::span<const Vector>,
                                         const RandomizedController&,
                                         const CriticModel&, Exec)>
      solves;
  bool update_gamma_after_action = true;
};

TrainOps probabilistic_ops(const ForwardModel& model,
                           const SolveOptions& solve);

// Targets computed once at phase start with frozen networks, then the
// critic weights minimize the summed squared error via SCG.
CriticModel train_critic_phase(TrainingRun& run, const ForwardModel& model,
                               const RandomizedController& controller,
                               const CriticModel& critic,
                               const TrainConfig& cfg, const TrainOps& ops,
                               int cycle);

// Solves the optimal control at every sampled state, fits the action net to
// the solutions via SCG, and (for the probabilistic method) refreshes gamma
// from the fit residuals. Unconverged solves are excluded with a warning;
// more than 10% failures aborts the phase.
RandomizedController train_action_phase(TrainingRun& run,
                                        const ForwardModel& model,
                                        const RandomizedController& controller,
                                        const CriticModel& critic,
                                        const TrainConfig& cfg,
                                        const TrainOps& ops, int cycle);

// Initializes both networks (fan-in scaled Gaussian weights), samples the
// training states, and alternates critic/action phases for cfg.cycles.
TrainingRun run_training_core(const ForwardModel& model, const TrainConfig& cfg,
                              const TrainOps& ops);

TrainingRun run_training(const ForwardModel& model, const TrainConfig& cfg);

}  // namespace pdhp

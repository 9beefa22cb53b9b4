#pragma once

#include "pdhp/action.hpp"
#include "pdhp/trainer.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Quadratic cost weights of the conventional (deterministic) DHP baseline:
// U_d(x_hat, u_hat) = x_hat^T Q x_hat + u_hat^T R u_hat. Defaults match the
// probabilistic partial cost so the comparison isolates the probabilistic
// terms: Q = sigma^-1, R = gamma_init^-1.
struct DhpConfig {
  Matrix cost_state_weight;    // Q
  Matrix cost_control_weight;  // R
};

DhpConfig default_dhp_config(const ForwardModel& model, double gamma_init);

// Deterministic critic target, everything evaluated at the mean successor
// x_hat = h + g u_hat:
//   2 x_hat^T Q (h' + g' u) + 2 x_hat^T Q g W psi' + 2 u^T R W psi'
//   + lambda(x_hat)^T (h' + g' u) + lambda(x_hat)^T g W psi'.
Vector dhp_critic_target(const ForwardModel& model,
                         const RandomizedController& controller,
                         const CriticModel& critic, const Vector& x,
                         const DhpConfig& cfg);

// Root of 2 g^T Q x_hat(u) + 2 R u + g^T lambda(x_hat(u)) = 0 via the same
// damped fixed-point / bracketing machinery as the probabilistic solver.
SolveReport dhp_solve_control(const ForwardModel& model,
                              const CriticModel& critic, const Vector& x,
                              const DhpConfig& cfg, const SolveOptions& opt);

// Mirrors run_training with the deterministic targets and solves; the same
// seed produces the same initial networks and state samples. Gamma stays at
// its initial value (the baseline has no residual-covariance concept).
TrainingRun run_dhp_training(const ForwardModel& model, const TrainConfig& cfg);

}  // namespace pdhp

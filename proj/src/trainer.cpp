#include "pdhp/trainer.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "pdhp/controller.hpp"
#include "pdhp/rng.hpp"
#include "pdhp/scg.hpp"

namespace pdhp {

namespace {

// Least-squares objective ||W Phi - T||_F^2 on flattened weights.
ScgObjective linear_fit_objective(const Matrix& phi, const Matrix& targets) {
  const Eigen::Index out = targets.rows();
  const Eigen::Index cols = phi.rows();
  return [&phi, &targets, out, cols](const Vector& w, Vector& grad) {
    const Eigen::Map<const Matrix> weights(w.data(), out, cols);
    const Matrix err = weights * phi - targets;
    grad.resize(w.size());
    Eigen::Map<Matrix>(grad.data(), out, cols) = 2.0 * err * phi.transpose();
    return err.squaredNorm();
  };
}

void check_gradients_fd(const ScgObjective& objective, const Vector& w0,
                        std::uint64_t seed) {
  Rng rng(seed);
  const double step = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    Vector w = w0;
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] += rng.normal();
    Vector grad(w.size());
    objective(w, grad);
    Vector dummy(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      Vector wp = w, wm = w;
      wp[i] += step;
      wm[i] -= step;
      const double fd =
          (objective(wp, dummy) - objective(wm, dummy)) / (2.0 * step);
      const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1.0});
      if (std::abs(fd - grad[i]) > 1e-4 * scale) {
        std::ostringstream msg;
        msg << "gradient check failed: coordinate " << i << " analytic "
            << grad[i] << " vs finite difference " << fd;
        throw std::runtime_error(msg.str());
      }
    }
  }
}

struct FitResult {
  Matrix weights;
  ScgReport report;
};

FitResult fit_weights(TrainingRun& run, const Matrix& phi,
                      const Matrix& targets, const Matrix& w_init,
                      const TrainConfig& cfg, int cycle, const char* phase) {
  const ScgObjective objective = linear_fit_objective(phi, targets);
  Vector w0(w_init.size());
  Eigen::Map<Matrix>(w0.data(), w_init.rows(), w_init.cols()) = w_init;
  if (cfg.check_gradients)
    check_gradients_fd(objective, w0, mix_seed(cfg.seed, 0xfdc4ecu));

  ScgOptions opt;
  opt.max_iter = cfg.scg_max_iter;
  opt.tol_objective = cfg.tol_objective;
  opt.tol_weights = cfg.tol_weights;
  auto trace = [&run, cycle, phase](int iter, double value, double dw) {
    run.log.push_back({cycle, phase, iter, value, dw});
  };
  ScgResult result = scg_minimize(objective, std::move(w0), opt, trace);

  FitResult fit;
  fit.weights = Eigen::Map<const Matrix>(result.weights.data(), w_init.rows(),
                                         w_init.cols());
  fit.report = result.report;
  return fit;
}

}  // namespace

TrainOps probabilistic_ops(const ForwardModel& model,
                           const SolveOptions& solve) {
  TrainOps ops;
  ops.targets = [&model](std::span<const Vector> states,
                         const RandomizedController& controller,
                         const CriticModel& critic, Exec exec) {
    return critic_targets(model, controller, critic, states, exec);
  };
  ops.solves = [&model, solve](std::span<const Vector> states,
                               const RandomizedController& controller,
                               const CriticModel& critic, Exec exec) {
    return solve_controls(model, controller, critic, states, solve, exec);
  };
  ops.update_gamma_after_action = true;
  return ops;
}

CriticModel train_critic_phase(TrainingRun& run, const ForwardModel& model,
                               const RandomizedController& controller,
                               const CriticModel& critic,
                               const TrainConfig& cfg, const TrainOps& ops,
                               int cycle) {
  const std::span<const Vector> states(run.state_samples);
  const std::vector<Vector> targets =
      ops.targets(states, controller, critic, cfg.exec);

  Matrix target_matrix(model.state_dim, targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i)
    target_matrix.col(static_cast<Eigen::Index>(i)) = targets[i];
  const Matrix phi = activation_matrix(critic.net, states, cfg.exec);

  const FitResult fit = fit_weights(run, phi, target_matrix,
                                    critic.net.weights, cfg, cycle, "critic");
  CriticModel updated = critic;
  updated.net.weights = fit.weights;
  run.phases.push_back({cycle, "critic", fit.report.iterations,
                        fit.report.final_value, fit.report.last_weight_delta,
                        0});
  return updated;
}

RandomizedController train_action_phase(TrainingRun& run,
                                        const ForwardModel& model,
                                        const RandomizedController& controller,
                                        const CriticModel& critic,
                                        const TrainConfig& cfg,
                                        const TrainOps& ops, int cycle) {
  const std::span<const Vector> states(run.state_samples);
  const std::vector<SolveReport> reports =
      ops.solves(states, controller, critic, cfg.exec);

  std::vector<Vector> included_states;
  std::vector<Vector> solutions;
  included_states.reserve(states.size());
  solutions.reserve(states.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].converged) {
      included_states.push_back(states[i]);
      solutions.push_back(reports[i].u_star);
    } else {
      std::cerr << "warning: control solve did not converge at state "
                << states[i].transpose() << " (residual "
                << reports[i].residual_norm << "); state excluded\n";
    }
  }
  const int excluded = static_cast<int>(states.size() - included_states.size());
  if (10 * excluded > static_cast<int>(states.size())) {
    std::ostringstream msg;
    msg << "action phase aborted: " << excluded << " of " << states.size()
        << " control solves failed to converge";
    throw std::runtime_error(msg.str());
  }

  Matrix target_matrix(model.control_dim, solutions.size());
  for (std::size_t i = 0; i < solutions.size(); ++i)
    target_matrix.col(static_cast<Eigen::Index>(i)) = solutions[i];
  const Matrix psi =
      activation_matrix(controller.net, included_states, cfg.exec);

  const FitResult fit = fit_weights(run, psi, target_matrix,
                                    controller.net.weights, cfg, cycle,
                                    "action");
  RandomizedController updated = controller;
  updated.net.weights = fit.weights;

  if (ops.update_gamma_after_action) {
    std::vector<Vector> residuals;
    residuals.reserve(solutions.size());
    for (std::size_t i = 0; i < solutions.size(); ++i)
      residuals.push_back(solutions[i] -
                          Vector(fit.weights * psi.col(i)));
    set_gamma(updated, update_gamma(residuals));
  }
  run.gamma_history.push_back(updated.gamma);
  run.phases.push_back({cycle, "action", fit.report.iterations,
                        fit.report.final_value, fit.report.last_weight_delta,
                        excluded});
  return updated;
}

TrainingRun run_training_core(const ForwardModel& model, const TrainConfig& cfg,
                              const TrainOps& ops) {
  if (cfg.num_states < 1)
    throw std::invalid_argument("run_training: num_states must be >= 1");
  if (!(cfg.state_low < cfg.state_high))
    throw std::invalid_argument("run_training: bad state range");

  const int n = model.state_dim;
  const int r = model.control_dim;
  const Vector lo = Vector::Constant(n, cfg.state_low);
  const Vector hi = Vector::Constant(n, cfg.state_high);

  TrainingRun run;
  run.state_samples.reserve(cfg.num_states);
  Rng state_rng(mix_seed(cfg.seed, seed_tag::train_states));
  for (int i = 0; i < cfg.num_states; ++i)
    run.state_samples.push_back(state_rng.uniform_vector(lo, hi));

  RbfNetwork action_net = init_weights(
      make_rbf(place_centers(lo, hi, cfg.action_bases, cfg.width_scale), r,
               cfg.action_bias),
      mix_seed(cfg.seed, seed_tag::action_init));
  run.controller = make_controller(
      std::move(action_net), cfg.gamma_init * Matrix::Identity(r, r));

  const double critic_width =
      cfg.critic_width_scale > 0.0 ? cfg.critic_width_scale : cfg.width_scale;
  run.critic.net = init_weights(
      make_rbf(place_centers(lo, hi, cfg.critic_bases, critic_width), n,
               cfg.critic_bias),
      mix_seed(cfg.seed, seed_tag::critic_init));

  for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
    run.critic = train_critic_phase(run, model, run.controller, run.critic,
                                    cfg, ops, cycle);
    run.controller = train_action_phase(run, model, run.controller, run.critic,
                                        cfg, ops, cycle);
  }
  return run;
}

TrainingRun run_training(const ForwardModel& model, const TrainConfig& cfg) {
  return run_training_core(model, cfg, probabilistic_ops(model, cfg.solve));
}

}  // namespace pdhp

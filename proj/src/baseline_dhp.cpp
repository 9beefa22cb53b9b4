#include "pdhp/baseline_dhp.hpp"

#include "pdhp/gaussian_algebra.hpp"

namespace pdhp {

DhpConfig default_dhp_config(const ForwardModel& model, double gamma_init) {
  DhpConfig cfg;
  cfg.cost_state_weight = model.sigma_precision;
  cfg.cost_control_weight =
      Matrix::Identity(model.control_dim, model.control_dim) / gamma_init;
  return cfg;
}

Vector dhp_critic_target(const ForwardModel& model,
                         const RandomizedController& controller,
                         const CriticModel& critic, const Vector& x,
                         const DhpConfig& cfg) {
  const NetEval ctrl = net_eval(controller.net, x);
  const Vector& u_hat = ctrl.output;
  const Matrix& w_psi_prime = ctrl.jacobian;

  const ModelEval ev = model_predict(model, x, u_hat);
  const Matrix closed_loop = ev.h_prime + contract_g_prime(ev.g_prime, u_hat);
  const Vector lambda_next = net_eval(critic.net, ev.x_hat).output;

  const Eigen::RowVectorXd state_part =
      2.0 * ev.x_hat.transpose() * cfg.cost_state_weight;
  Vector target =
      (state_part * closed_loop).transpose() +
      (state_part * ev.g * w_psi_prime).transpose() +
      (2.0 * u_hat.transpose() * cfg.cost_control_weight * w_psi_prime)
          .transpose() +
      (lambda_next.transpose() * closed_loop).transpose() +
      (lambda_next.transpose() * ev.g * w_psi_prime).transpose();
  return target;
}

SolveReport dhp_solve_control(const ForwardModel& model,
                              const CriticModel& critic, const Vector& x,
                              const DhpConfig& cfg, const SolveOptions& opt) {
  const Vector zero_u = Vector::Zero(model.control_dim);
  const ModelEval ev = model_predict(model, x, zero_u);
  const Matrix m = ev.g.transpose() * cfg.cost_state_weight * ev.g +
                   cfg.cost_control_weight;
  const Vector lin = ev.g.transpose() * (cfg.cost_state_weight * ev.h);
  auto coupling = [&](const Vector& u) {
    const Vector x_hat = ev.h + ev.g * u;
    return Vector(ev.g.transpose() * net_eval(critic.net, x_hat).output);
  };
  return solve_coupled_root(m, lin, coupling, opt);
}

TrainingRun run_dhp_training(const ForwardModel& model, const TrainConfig& cfg) {
  const DhpConfig dhp = default_dhp_config(model, cfg.gamma_init);
  TrainOps ops;
  ops.targets = [&model, dhp](std::span<const Vector> states,
                              const RandomizedController& controller,
                              const CriticModel& critic, Exec exec) {
    const std::function<Vector(const Vector&)> fn = [&](const Vector& x) {
      return dhp_critic_target(model, controller, critic, x, dhp);
    };
    return map_states<Vector>(states, fn, exec);
  };
  ops.solves = [&model, dhp, solve = cfg.solve](
                   std::span<const Vector> states,
                   const RandomizedController&, const CriticModel& critic,
                   Exec exec) {
    const std::function<SolveReport(const Vector&)> fn = [&](const Vector& x) {
      return dhp_solve_control(model, critic, x, dhp, solve);
    };
    return map_states<SolveReport>(states, fn, exec);
  };
  ops.update_gamma_after_action = false;
  return run_training_core(model, cfg, ops);
}

}  // namespace pdhp

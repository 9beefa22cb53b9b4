#include "pdhp/critic.hpp"

#include <cmath>
#include <stdexcept>

#include "pdhp/gaussian_algebra.hpp"
#include "pdhp/testhooks.hpp"

namespace pdhp {

IdealSpec regulation_ideal(const ForwardModel& model,
                           const RandomizedController& controller) {
  IdealSpec ideal;
  ideal.ideal_state_mean = Vector::Zero(model.state_dim);
  ideal.ideal_state_cov = model.sigma;
  ideal.ideal_control_mean = Vector::Zero(model.control_dim);
  ideal.ideal_control_cov = controller.ideal_gamma;
  return ideal;
}

DigammaBundle compute_digamma(const ForwardModel& model,
                              const CriticModel& critic,
                              const Matrix& gamma_precision, const Vector& x,
                              const Vector& u_hat) {
  const RbfNetwork& net = critic.net;
  if (net.output_dim() != model.state_dim)
    throw std::invalid_argument("compute_digamma: critic output dim != n");

  const NetEval he = net_eval(model.h_net, x);
  const Vector h = he.output;
  const NetEval ge = net_eval(model.g_net, x);
  const Matrix g = Eigen::Map<const Matrix>(ge.output.data(), model.state_dim,
                                            model.control_dim);

  const int cols = net.num_columns();
  DigammaBundle bundle;
  bundle.digamma.resize(cols);
  bundle.H.resize(cols);
  bundle.Omega.resize(cols);
  for (int l = 0; l < net.num_bases(); ++l) {
    const Matrix gamma_l =
        spd_inverse(net.width_precisions[l], "critic width precision");
    const Matrix a_precision = spd_inverse(model.sigma + gamma_l, "sigma+gamma_l");
    const CompletedSquare cs = complete_square_in_control(
        h, g, net.centers[l], a_precision, gamma_precision, u_hat);
    bundle.digamma[l] = std::exp(-cs.constant);
    bundle.H[l] = cs.center;
    bundle.Omega[l] = cs.omega;
  }
  if (net.has_bias) {
    // A constant basis integrates to its weight; the control integral then
    // evaluates at the controller mean.
    const int l = net.num_bases();
    bundle.digamma[l] = 1.0;
    bundle.H[l] = u_hat;
    bundle.Omega[l] = gamma_precision;
  }
  return bundle;
}

Vector weighted_critic_columns(const CriticModel& critic,
                               const Vector& digamma) {
  return critic.net.weights * digamma;
}

CriticTargetTerms critic_target_terms(const ForwardModel& model,
                                      const RandomizedController& controller,
                                      const CriticModel& critic,
                                      const Vector& x) {
  counters::critic_target_evals.fetch_add(1, std::memory_order_relaxed);

  const NetEval ctrl = net_eval(controller.net, x);
  const Vector u_hat = ctrl.output;
  const Matrix w_psi_prime = ctrl.jacobian;  // r x n

  const ModelEval ev = model_predict(model, x, u_hat);
  const Matrix& sigma_inv = model.sigma_precision;
  const DigammaBundle dg = compute_digamma(
      model, critic, controller.gamma_precision, x, u_hat);

  const Eigen::RowVectorXd common =
      2.0 * ev.x_hat.transpose() * sigma_inv;  // 1 x n

  CriticTargetTerms terms;
  terms.term1 =
      (common * (ev.h_prime + contract_g_prime(ev.g_prime, u_hat))).transpose();
  terms.term2 = (common * ev.g * w_psi_prime).transpose();
  // The control penalty weighs against the ideal distribution.
  terms.term3 = (2.0 * u_hat.transpose() * controller.ideal_gamma_precision *
                 w_psi_prime)
                    .transpose();

  const int n = model.state_dim;
  terms.term4 = Vector::Zero(n);
  for (int l = 0; l < critic.net.num_columns(); ++l) {
    const Vector chi_l = critic.net.weights.col(l);
    terms.term4 += dg.digamma[l] *
                   ((ev.h_prime + contract_g_prime(ev.g_prime, dg.H[l]))
                        .transpose() *
                    chi_l);
  }
  const Vector chi_digamma = weighted_critic_columns(critic, dg.digamma);
  terms.term5 =
      (chi_digamma.transpose() * ev.g * w_psi_prime).transpose();

  terms.total =
      terms.term1 + terms.term2 + terms.term3 + terms.term4 + terms.term5;
  if (!terms.total.allFinite())
    throw std::runtime_error("critic_target: non-finite target (diverged digamma)");
  return terms;
}

Vector critic_target(const ForwardModel& model,
                     const RandomizedController& controller,
                     const CriticModel& critic, const Vector& x) {
  return critic_target_terms(model, controller, critic, x).total;
}

}  // namespace pdhp

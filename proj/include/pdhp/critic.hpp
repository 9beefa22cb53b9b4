#pragma once

#include <vector>

#include "pdhp/controller.hpp"
#include "pdhp/sysid.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Critic network lambda[x] = chi phi(x) approximating the state derivative
// of the optimal cost-to-go. Weight column l pairs with Gaussian basis l;
// a bias column, when present, acts as a constant contribution.
struct CriticModel {
  RbfNetwork net;
};

// Regulation target distributions; of the fields only the covariances enter
// the closed forms (they equal the model and controller covariances).
struct IdealSpec {
  Vector ideal_state_mean;
  Matrix ideal_state_cov;
  Vector ideal_control_mean;
  Matrix ideal_control_cov;
};

IdealSpec regulation_ideal(const ForwardModel& model,
                           const RandomizedController& controller);

// Per-critic-basis results of completing the square in the control:
// digamma[l] = exp(-c_l) in (0, 1], centers H_l and curvatures Omega_l.
// When the critic has a bias column, its entry is digamma = 1, H = u_hat,
// Omega = gamma_precision.
struct DigammaBundle {
  Vector digamma;
  std::vector<Vector> H;
  std::vector<Matrix> Omega;
};

DigammaBundle compute_digamma(const ForwardModel& model,
                              const CriticModel& critic,
                              const Matrix& gamma_precision, const Vector& x,
                              const Vector& u_hat);

struct CriticTargetTerms {
  Vector term1;  // 2 (h + g u)^T S^-1 (h' + g' u)
  Vector term2;  // 2 (h + g u)^T S^-1 g W psi'
  Vector term3;  // 2 u^T G^-1 W psi'
  Vector term4;  // sum_l digamma_l chi_l^T (h' + g' H_l)
  Vector term5;  // sum_l digamma_l chi_l^T g W psi'
  Vector total;
};

CriticTargetTerms critic_target_terms(const ForwardModel& model,
                                      const RandomizedController& controller,
                                      const CriticModel& critic,
                                      const Vector& x);

Vector critic_target(const ForwardModel& model,
                     const RandomizedController& controller,
                     const CriticModel& critic, const Vector& x);

// sum_l digamma_l chi_col_l; the critic contribution shared with the
// control-optimality residual.
Vector weighted_critic_columns(const CriticModel& critic,
                               const Vector& digamma);

}  // namespace pdhp

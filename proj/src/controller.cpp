#include "pdhp/controller.hpp"

#include <stdexcept>

#include "pdhp/gaussian_algebra.hpp"

namespace pdhp {

void set_gamma(RandomizedController& controller, Matrix gamma) {
  controller.gamma_precision = spd_inverse(gamma, "controller gamma");
  controller.gamma_chol = Eigen::LLT<Matrix>(gamma).matrixL();
  controller.gamma = std::move(gamma);
}

RandomizedController make_controller(RbfNetwork net, Matrix gamma) {
  validate(net);
  RandomizedController controller;
  controller.net = std::move(net);
  set_gamma(controller, std::move(gamma));
  controller.ideal_gamma = controller.gamma;
  controller.ideal_gamma_precision = controller.gamma_precision;
  return controller;
}

Vector mean_control(const RandomizedController& controller, const Vector& x) {
  return net_eval(controller.net, x).output;
}

Vector sample_control(const RandomizedController& controller, const Vector& x,
                      Rng& rng) {
  return rng.gaussian(mean_control(controller, x), controller.gamma_chol);
}

Matrix update_gamma(const std::vector<Vector>& residuals) {
  if (residuals.empty())
    throw std::invalid_argument("update_gamma: no residuals");
  const int r = static_cast<int>(residuals.front().size());
  Matrix gamma = Matrix::Zero(r, r);
  for (const Vector& resid : residuals) gamma += resid * resid.transpose();
  gamma /= static_cast<double>(residuals.size());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gamma);
  const Vector clamped = eig.eigenvalues().cwiseMax(1e-8);
  gamma = eig.eigenvectors() * clamped.asDiagonal() *
          eig.eigenvectors().transpose();
  return 0.5 * (gamma + gamma.transpose());
}

}  // namespace pdhp

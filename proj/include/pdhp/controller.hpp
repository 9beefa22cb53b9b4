#pragma once

#include <vector>

#include "pdhp/rbf.hpp"
#include "pdhp/rng.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Randomized controller c(u | x) = N(W psi(x), gamma), paired with the
// ideal controller distribution N(0, ideal_gamma). The ideal covariance is
// the fixed control-penalty weight of the design; gamma is the residual
// covariance that training refreshes. They start out equal.
struct RandomizedController {
  RbfNetwork net;  // r outputs
  Matrix gamma;
  Matrix gamma_precision;
  Matrix gamma_chol;  // lower factor for sampling
  Matrix ideal_gamma;
  Matrix ideal_gamma_precision;
};

RandomizedController make_controller(RbfNetwork net, Matrix gamma);

// Replaces gamma and the cached factorizations; the ideal covariance stays.
void set_gamma(RandomizedController& controller, Matrix gamma);

Vector mean_control(const RandomizedController& controller, const Vector& x);

Vector sample_control(const RandomizedController& controller, const Vector& x,
                      Rng& rng);

// Mean outer product of the residuals, floored at 1e-8 I.
Matrix update_gamma(const std::vector<Vector>& residuals);

}  // namespace pdhp

#pragma once

#include <functional>

#include "pdhp/types.hpp"

namespace pdhp {

// Objective returning the value and filling the gradient in place.
using ScgObjective = std::function<double(const Vector& w, Vector& grad)>;

// Called once per accepted iteration with the new objective value and the
// max-norm of the weight update; feeds the training log.
using ScgTrace = std::function<void(int iter, double value, double weight_delta)>;

struct ScgOptions {
  int max_iter = 10000;
  double tol_objective = 1e-3;  // |delta F| between accepted iterates
  double tol_weights = 1e-3;    // |delta w|_inf between accepted iterates
};

struct ScgReport {
  int iterations = 0;
  double final_value = 0.0;
  bool converged = false;  // both tolerances met before max_iter
  double last_objective_delta = 0.0;
  double last_weight_delta = 0.0;
};

struct ScgResult {
  Vector weights;  // best-seen iterate
  ScgReport report;
};

// Moller's scaled conjugate gradient (Hessian-free, adaptive scaling).
// Throws std::runtime_error on a non-finite objective or gradient, naming
// the iterate. The returned weights are the best seen, so the value never
// exceeds the objective at w0.
ScgResult scg_minimize(const ScgObjective& objective, Vector w0,
                       const ScgOptions& options = {},
                       const ScgTrace& trace = {});

}  // namespace pdhp

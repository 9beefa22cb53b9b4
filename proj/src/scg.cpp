#include "pdhp/scg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdhp {

namespace {

double checked_eval(const ScgObjective& objective, const Vector& w,
                    Vector& grad, int iter) {
  const double value = objective(w, grad);
  if (!std::isfinite(value) || !grad.allFinite()) {
    std::ostringstream msg;
    msg << "scg_minimize: non-finite objective or gradient at iteration "
        << iter;
    throw std::runtime_error(msg.str());
  }
  return value;
}

}  // namespace

ScgResult scg_minimize(const ScgObjective& objective, Vector w0,
                       const ScgOptions& options, const ScgTrace& trace) {
  const int dim = static_cast<int>(w0.size());
  const double sigma0 = 1e-4;
  double lambda = 1e-6;
  double lambda_bar = 0.0;

  Vector w = std::move(w0);
  Vector grad(dim);
  double f = checked_eval(objective, w, grad, 0);

  ScgResult result;
  result.weights = w;
  result.report.final_value = f;
  double best_f = f;

  Vector r = -grad;
  Vector p = r;
  bool success = true;
  double delta = 0.0;
  Vector scratch_grad(dim);
  Vector step_grad(dim);

  for (int k = 1; k <= options.max_iter; ++k) {
    result.report.iterations = k;
    const double p_sq = p.squaredNorm();
    if (p_sq == 0.0) {
      // Zero gradient: nothing can change, both deltas vanish.
      result.report.converged = true;
      break;
    }

    if (success) {
      // Hessian-vector product by differencing the gradient.
      const double sigma = sigma0 / std::sqrt(p_sq);
      checked_eval(objective, w + sigma * p, scratch_grad, k);
      delta = p.dot(scratch_grad - grad) / sigma;
    }

    delta += (lambda - lambda_bar) * p_sq;
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / p_sq);
      delta = -delta + lambda * p_sq;
      lambda = lambda_bar;
    }

    const double mu = p.dot(r);
    if (mu <= 0.0) {
      // Not a descent direction; restart along the gradient.
      p = r;
      success = true;
      lambda_bar = 0.0;
      continue;
    }
    const double alpha = mu / delta;

    Vector w_new = w + alpha * p;
    const double f_new = checked_eval(objective, w_new, step_grad, k);
    const double comparison = 2.0 * delta * (f - f_new) / (mu * mu);

    if (comparison >= 0.0) {
      const double df = std::abs(f - f_new);
      const double dw = (alpha * p).cwiseAbs().maxCoeff();
      w = std::move(w_new);
      f = f_new;
      grad = step_grad;
      const Vector r_new = -grad;
      lambda_bar = 0.0;
      success = true;
      if (f < best_f) {
        best_f = f;
        result.weights = w;
      }
      if (k % dim == 0) {
        p = r_new;
      } else {
        const double beta = (r_new.squaredNorm() - r_new.dot(r)) / mu;
        p = r_new + beta * p;
      }
      r = r_new;
      if (comparison >= 0.75) lambda *= 0.25;

      if (trace) trace(k, f, dw);
      result.report.last_objective_delta = df;
      result.report.last_weight_delta = dw;
      if (df < options.tol_objective && dw < options.tol_weights) {
        result.report.converged = true;
        break;
      }
    } else {
      lambda_bar = lambda;
      success = false;
    }

    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p_sq;
    if (lambda > 1e150) break;  // scaling blew up; report best seen
  }

  result.report.final_value = best_f;
  return result;
}

}  // namespace pdhp

#include "pdhp/action.hpp"

#include <cmath>
#include <stdexcept>

#include "pdhp/gaussian_algebra.hpp"

namespace pdhp {

Vector optimality_residual(const ForwardModel& model,
                           const RandomizedController& controller,
                           const CriticModel& critic, const Vector& x,
                           const Vector& u_hat) {
  const ModelEval ev = model_predict(model, x, u_hat);
  const DigammaBundle dg = compute_digamma(
      model, critic, controller.gamma_precision, x, u_hat);
  const Vector chi_digamma = weighted_critic_columns(critic, dg.digamma);
  return 2.0 * ev.g.transpose() * (model.sigma_precision * ev.x_hat) +
         2.0 * controller.ideal_gamma_precision * u_hat +
         ev.g.transpose() * chi_digamma;
}

namespace {

double residual_norm(const Matrix& m, const Vector& lin,
                     const std::function<Vector(const Vector&)>& coupling,
                     const Vector& u, Vector* residual = nullptr) {
  Vector r = 2.0 * (m * u + lin) + coupling(u);
  const double norm = r.norm();
  if (residual) *residual = std::move(r);
  return norm;
}

// Expanding bracket + bisection for the scalar residual.
bool bisect_scalar(const Matrix& m, const Vector& lin,
                   const std::function<Vector(const Vector&)>& coupling,
                   double tol, SolveReport& report) {
  auto r_at = [&](double u) {
    Vector uv(1);
    uv[0] = u;
    return (2.0 * (m * uv + lin) + coupling(uv))[0];
  };
  double center = report.u_star[0];
  double width = std::max(1.0, std::abs(center));
  double lo = center - width;
  double hi = center + width;
  double r_lo = r_at(lo);
  double r_hi = r_at(hi);
  report.iterations += 2;
  while (std::signbit(r_lo) == std::signbit(r_hi) && width < 1e6) {
    width *= 2.0;
    lo = center - width;
    hi = center + width;
    r_lo = r_at(lo);
    r_hi = r_at(hi);
    report.iterations += 2;
  }
  if (std::signbit(r_lo) == std::signbit(r_hi)) return false;

  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r_mid = r_at(mid);
    ++report.iterations;
    if (std::abs(r_mid) <= tol) {
      report.u_star[0] = mid;
      report.residual_norm = std::abs(r_mid);
      report.converged = true;
      report.method = SolveMethod::bracketed;
      return true;
    }
    if (std::signbit(r_mid) == std::signbit(r_lo)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return false;
}

}  // namespace

SolveReport solve_coupled_root(
    const Matrix& m, const Vector& lin,
    const std::function<Vector(const Vector&)>& coupling,
    const SolveOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve: tol must be > 0");
  const int r = static_cast<int>(lin.size());
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve: base matrix not SPD");

  SolveReport report;
  report.u_star = opt.u0.size() == r ? opt.u0 : Vector::Zero(r);

  double norm = residual_norm(m, lin, coupling, report.u_star);
  if (norm <= opt.tol) {
    report.residual_norm = norm;
    report.converged = true;
    return report;
  }

  double damping = opt.damping;
  const double damping_floor = opt.damping / 64.0;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    const Vector mapped = -llt.solve(lin + 0.5 * coupling(report.u_star));
    const Vector candidate =
        (1.0 - damping) * report.u_star + damping * mapped;
    const double cand_norm = residual_norm(m, lin, coupling, candidate);
    report.iterations = iter;
    if (cand_norm <= opt.tol) {
      report.u_star = candidate;
      report.residual_norm = cand_norm;
      report.converged = true;
      return report;
    }
    if (cand_norm < norm) {
      report.u_star = candidate;
      norm = cand_norm;
    } else {
      damping *= 0.5;
      if (damping < damping_floor) break;
    }
  }

  report.residual_norm = norm;
  if (r == 1 && bisect_scalar(m, lin, coupling, opt.tol, report)) return report;
  report.converged = false;
  return report;
}

SolveReport solve_optimal_control(const ForwardModel& model,
                                  const RandomizedController& controller,
                                  const CriticModel& critic, const Vector& x,
                                  const SolveOptions& opt) {
  const Vector zero_u = Vector::Zero(model.control_dim);
  const ModelEval ev = model_predict(model, x, zero_u);
  const Matrix m = ev.g.transpose() * model.sigma_precision * ev.g +
                   controller.ideal_gamma_precision;
  const Vector lin = ev.g.transpose() * (model.sigma_precision * ev.h);
  auto coupling = [&](const Vector& u) {
    const DigammaBundle dg = compute_digamma(
        model, critic, controller.gamma_precision, x, u);
    return Vector(ev.g.transpose() * weighted_critic_columns(critic, dg.digamma));
  };
  return solve_coupled_root(m, lin, coupling, opt);
}

}  // namespace pdhp

#include "pdhp/fpd_oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pdhp {

namespace {

void require_scalar(const ForwardModel& model) {
  if (model.state_dim != 1 || model.control_dim != 1)
    throw std::invalid_argument("fpd_oracle: scalar problems only");
}

struct ScalarModel {
  double h = 0.0;
  double g = 0.0;
  double sigma = 0.0;      // no-1/2 convention; density variance sigma/2
  double sigma_inv = 0.0;
};

ScalarModel scalar_model(const ForwardModel& model, const IdealSpec& ideal,
                         double x) {
  require_scalar(model);
  const double sigma = model.sigma(0, 0);
  if (std::abs(ideal.ideal_state_cov(0, 0) - sigma) > 1e-12 * sigma)
    throw std::invalid_argument(
        "fpd_oracle: ideal state covariance must equal the model covariance");
  Vector xv(1);
  xv[0] = x;
  const NetEval he = net_eval(model.h_net, xv);
  const NetEval ge = net_eval(model.g_net, xv);
  return {he.output[0], ge.output[0], sigma, 1.0 / sigma};
}

// Quadrature of s(x'|u,x) * [partial state cost - ln_gamma_next(x')] over a
// window of grid nodes covering 10 standard deviations of the density.
template <typename Continuation>
double beta_quadrature(const ScalarModel& sm, double u,
                       const Continuation& ln_gamma_next,
                       const QuadratureGrid& grid) {
  const double x_hat = sm.h + sm.g * u;
  const double var = 0.5 * sm.sigma;  // sampling variance of exp[-(.)^2/sigma]
  const double std_dev = std::sqrt(var);
  const double reach = 10.0 * std_dev;

  int i_lo = static_cast<int>(std::ceil((x_hat - reach - grid.x_lo) / grid.x_step));
  int i_hi = static_cast<int>(std::floor((x_hat + reach - grid.x_lo) / grid.x_step));
  i_lo = std::max(i_lo, 0);
  i_hi = std::min(i_hi, grid.x_count() - 1);
  if (i_hi - i_lo < 2)
    throw std::runtime_error("fpd_oracle: grid does not cover the density");

  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
  double mass = 0.0;
  double value = 0.0;
  for (int i = i_lo; i <= i_hi; ++i) {
    const double xp = grid.x_node(i);
    const double w =
        (i == i_lo || i == i_hi) ? 0.5 * grid.x_step : grid.x_step;
    const double density = norm * std::exp(-0.5 * (xp - x_hat) * (xp - x_hat) / var);
    const double ln_ratio =
        2.0 * x_hat * sm.sigma_inv * xp - x_hat * x_hat * sm.sigma_inv;
    mass += w * density;
    value += w * density * (ln_ratio - ln_gamma_next(i, xp));
  }
  if (std::abs(mass - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "fpd_oracle: grid too narrow, density mass " << mass
        << " deviates from 1 by " << std::abs(mass - 1.0);
    throw std::runtime_error(msg.str());
  }
  return value;
}

// Trapezoid prefix integral of the critic output over the grid nodes;
// entry i approximates Int_{x_lo}^{x_i} lambda, so -ln gamma(x_i) up to a
// constant.
std::vector<double> critic_cumulative(const CriticModel& critic,
                                      const QuadratureGrid& grid,
                                      Exec exec = Exec::parallel) {
  const int count = grid.x_count();
  std::vector<double> lambda(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i) {
      Vector xv(1);
      xv[0] = grid.x_node(i);
      lambda[i] = net_eval(critic.net, xv).output[0];
    }
  } else {
    for (int i = 0; i < count; ++i) {
      Vector xv(1);
      xv[0] = grid.x_node(i);
      lambda[i] = net_eval(critic.net, xv).output[0];
    }
  }
  std::vector<double> cum(count);
  cum[0] = 0.0;
  for (int i = 1; i < count; ++i)
    cum[i] = cum[i - 1] + 0.5 * (lambda[i - 1] + lambda[i]) * grid.x_step;
  return cum;
}

double control_penalty(const IdealSpec& ideal, double u) {
  return u * u / ideal.ideal_control_cov(0, 0);
}

// Scans the u grid for the minimizer of fn; errors at the boundary.
template <typename Fn>
int scan_u_grid(const QuadratureGrid& grid, Exec exec, const Fn& fn,
                std::vector<double>* values_out = nullptr) {
  const int count = grid.u_count();
  std::vector<double> values(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i) values[i] = fn(grid.u_node(i));
  } else {
    for (int i = 0; i < count; ++i) values[i] = fn(grid.u_node(i));
  }
  int best = 0;
  for (int i = 1; i < count; ++i)
    if (values[i] < values[best]) best = i;
  if (best == 0 || best == count - 1)
    throw std::runtime_error(
        "fpd_oracle: objective minimum at u-grid boundary; widen the grid");
  if (values_out) *values_out = std::move(values);
  return best;
}

template <typename Fn>
double golden_section(const Fn& fn, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

QuadratureGrid make_grid(double x_lo, double x_hi, double x_step, double u_lo,
                         double u_hi, double u_step) {
  if (!(x_step > 0.0) || !(u_step > 0.0) || !(x_lo < x_hi) || !(u_lo < u_hi))
    throw std::invalid_argument("make_grid: bad bounds or spacing");
  return {x_lo, x_hi, x_step, u_lo, u_hi, u_step};
}

double beta(const ForwardModel& model, const IdealSpec& ideal,
            const std::function<double(double)>& ln_gamma_next, double u,
            double x, const QuadratureGrid& grid) {
  const ScalarModel sm = scalar_model(model, ideal, x);
  return beta_quadrature(
      sm, u, [&](int, double xp) { return ln_gamma_next(xp); }, grid);
}

double one_step_optimal_u(const ForwardModel& model, const IdealSpec& ideal,
                          double x, const QuadratureGrid& grid, Exec exec) {
  const ScalarModel sm = scalar_model(model, ideal, x);
  auto objective = [&](double u) {
    return control_penalty(ideal, u) +
           beta_quadrature(sm, u, [](int, double) { return 0.0; }, grid);
  };
  const int best = scan_u_grid(grid, exec, objective);
  return golden_section(objective, grid.u_node(best - 1),
                        grid.u_node(best + 1), 1e-10);
}

double beta_with_critic(const ForwardModel& model, const IdealSpec& ideal,
                        const CriticModel& critic,
                        const RandomizedController& controller, double u,
                        double x, const QuadratureGrid& grid) {
  if (std::abs(ideal.ideal_control_cov(0, 0) - controller.ideal_gamma(0, 0)) >
      1e-12 * controller.ideal_gamma(0, 0))
    throw std::invalid_argument(
        "fpd_oracle: ideal control covariance must match the controller's");
  const ScalarModel sm = scalar_model(model, ideal, x);
  const std::vector<double> cum = critic_cumulative(critic, grid);
  return beta_quadrature(
      sm, u, [&](int i, double) { return -cum[i]; }, grid);
}

double argmin_one_step_objective_with_critic(
    const ForwardModel& model, const IdealSpec& ideal,
    const CriticModel& critic, const RandomizedController& controller,
    double x, const QuadratureGrid& grid, Exec exec) {
  if (std::abs(ideal.ideal_control_cov(0, 0) - controller.ideal_gamma(0, 0)) >
      1e-12 * controller.ideal_gamma(0, 0))
    throw std::invalid_argument(
        "fpd_oracle: ideal control covariance must match the controller's");
  const ScalarModel sm = scalar_model(model, ideal, x);
  const std::vector<double> cum = critic_cumulative(critic, grid, exec);
  auto objective = [&](double u) {
    return control_penalty(ideal, u) +
           beta_quadrature(sm, u, [&](int i, double) { return -cum[i]; }, grid);
  };
  const int best = scan_u_grid(grid, exec, objective);
  return grid.u_node(best);
}

}  // namespace pdhp

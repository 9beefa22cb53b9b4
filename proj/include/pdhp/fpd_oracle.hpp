#pragma once

#include <functional>

#include "pdhp/controller.hpp"
#include "pdhp/critic.hpp"
#include "pdhp/sysid.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Uniform trapezoid grids for the desk-scale (scalar) quadrature oracle.
struct QuadratureGrid {
  double x_lo = -12.0;
  double x_hi = 12.0;
  double x_step = 0.005;
  double u_lo = -3.0;
  double u_hi = 3.0;
  double u_step = 1e-3;

  int x_count() const { return static_cast<int>((x_hi - x_lo) / x_step) + 1; }
  int u_count() const { return static_cast<int>((u_hi - u_lo) / u_step) + 1; }
  double x_node(int i) const { return x_lo + i * x_step; }
  double u_node(int i) const { return u_lo + i * u_step; }
};

QuadratureGrid make_grid(double x_lo, double x_hi, double x_step, double u_lo,
                         double u_hi, double u_step);

// beta(u, x) = Int s(x'|u,x) [ln(s / ideal s) - ln_gamma_next(x')] dx' by
// trapezoid quadrature, with s the normalized Gaussian N(h+gu, sigma/2)
// matching the no-1/2 exponent convention and ln(s/ideal s) in closed form.
// Throws when the integration window loses more than 1e-8 of the density
// mass (grid too narrow). Scalar problems only.
double beta(const ForwardModel& model, const IdealSpec& ideal,
            const std::function<double(double)>& ln_gamma_next, double u,
            double x, const QuadratureGrid& grid);

// Minimizer over the u grid of the one-step objective
// u^2 Gamma^-1 + beta(u, x) with zero continuation, refined by
// golden-section around the best node. Errors when the minimum sits on the
// grid boundary.
double one_step_optimal_u(const ForwardModel& model, const IdealSpec& ideal,
                          double x, const QuadratureGrid& grid,
                          Exec exec = Exec::parallel);

// beta with the continuation -ln gamma(x') reconstructed (up to an additive
// constant that cancels in argmin comparisons) by integrating the critic
// output lambda = d(-ln gamma)/dx from 0 to x'.
double beta_with_critic(const ForwardModel& model, const IdealSpec& ideal,
                        const CriticModel& critic,
                        const RandomizedController& controller, double u,
                        double x, const QuadratureGrid& grid);

// Grid argmin over u of u^2 Gamma^-1 + beta_with_critic(u, x); the oracle
// counterpart of solve_optimal_control at a trained critic.
double argmin_one_step_objective_with_critic(
    const ForwardModel& model, const IdealSpec& ideal,
    const CriticModel& critic, const RandomizedController& controller,
    double x, const QuadratureGrid& grid, Exec exec = Exec::parallel);

}  // namespace pdhp

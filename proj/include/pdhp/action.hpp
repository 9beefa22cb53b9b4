#pragma once

#include <functional>

#include "pdhp/critic.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

enum class SolveMethod { fixed_point, bracketed };

struct SolveReport {
  Vector u_star;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
  SolveMethod method = SolveMethod::fixed_point;
};

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 100;
  double damping = 1.0;  // halved on residual increase, down to 2^-6
  Vector u0;             // empty means zero
};

// R(u) = 2 g^T S^-1 (h + g u) + 2 G^-1 u + g^T chi digamma(u).
Vector optimality_residual(const ForwardModel& model,
                           const RandomizedController& controller,
                           const CriticModel& critic, const Vector& x,
                           const Vector& u_hat);

// Damped fixed point u <- (1-d) u - d M^-1 (lin + coupling(u)/2) for the
// residual R(u) = 2 (M u + lin) + coupling(u) with SPD M; falls back to an
// expanding-bracket bisection in the scalar case. Shared by the
// probabilistic and conventional solvers.
SolveReport solve_coupled_root(
    const Matrix& m, const Vector& lin,
    const std::function<Vector(const Vector&)>& coupling,
    const SolveOptions& opt);

SolveReport solve_optimal_control(const ForwardModel& model,
                                  const RandomizedController& controller,
                                  const CriticModel& critic, const Vector& x,
                                  const SolveOptions& opt = {});

}  // namespace pdhp

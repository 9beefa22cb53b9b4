#pragma once

#include <utility>

#include "pdhp/types.hpp"

namespace pdhp {

// Unnormalized Gaussian factor exp[-(x - mean)^T precision (x - mean)].
// All exponents in this codebase carry no 1/2 factor; the normalized
// density matching such a factor has sampling covariance precision^-1 / 2.
struct GaussianQuadratic {
  Vector mean;
  Matrix precision;
};

// Result of completing the square in the control variable:
//   (h + g u - z)^T A (h + g u - z) + (u - u_hat)^T P (u - u_hat)
//     = (u - center)^T omega (u - center) + constant
struct CompletedSquare {
  Matrix omega;
  Vector center;
  double constant = 0.0;
};

// Throws std::invalid_argument unless m is symmetric (to 1e-12 relative)
// and positive definite (smallest eigenvalue > -1e-10 * scale and LLT
// succeeds). `what` names the offending input in the message.
void require_spd(const Matrix& m, const char* what);

Matrix spd_inverse(const Matrix& m, const char* what);

// Value of the quadratic form (x - mean)^T precision (x - mean).
double quadratic_value(const GaussianQuadratic& q, const Vector& x);

// Combines two quadratics over the same variable:
//   q1(x) + q2(x) = combined(x) + residual_constant  for all x,
// with combined.precision = P1 + P2 and
// residual_constant = (m1 - m2)^T (P1^-1 + P2^-1)^-1 (m1 - m2).
std::pair<GaussianQuadratic, double> combine_quadratics(
    const GaussianQuadratic& q1, const GaussianQuadratic& q2);

// omega = g^T A g + P, center = omega^-1 [g^T A (z - h) + P u_hat],
// constant = (z-h)^T A (z-h) + u_hat^T P u_hat - center^T omega center,
// where A = a_precision and P = gamma_precision.
CompletedSquare complete_square_in_control(const Vector& h, const Matrix& g,
                                           const Vector& z,
                                           const Matrix& a_precision,
                                           const Matrix& gamma_precision,
                                           const Vector& u_hat);

// Expectation of (offset + linear_map x) when x carries the normalized
// density associated with q: offset + linear_map * q.mean.
Vector gaussian_linear_moment(const GaussianQuadratic& q,
                              const Matrix& linear_map, const Vector& offset);

}  // namespace pdhp

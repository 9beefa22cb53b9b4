#include "pdhp/gaussian_algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pdhp/testhooks.hpp"

namespace pdhp {

namespace {

[[noreturn]] void fail(const char* what, const char* why) {
  std::ostringstream msg;
  msg << what << ": " << why;
  throw std::invalid_argument(msg.str());
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) fail(what, "dimension mismatch");
}

}  // namespace

void require_spd(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) fail(what, "not square");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0)) fail(what, "not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(what, "eigendecomposition failed");
  const double min_eig = eig.eigenvalues().minCoeff();
  if (!(min_eig > 1e-10 * std::max(scale, 0.0)) || !(min_eig > 0.0))
    fail(what, "not positive definite");
}

Matrix spd_inverse(const Matrix& m, const char* what) {
  require_spd(m, what);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) fail(what, "Cholesky factorization failed");
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

double quadratic_value(const GaussianQuadratic& q, const Vector& x) {
  require_same_dim(q.mean, x, "quadratic_value");
  const Vector d = x - q.mean;
  return d.dot(q.precision * d);
}

std::pair<GaussianQuadratic, double> combine_quadratics(
    const GaussianQuadratic& q1, const GaussianQuadratic& q2) {
  require_same_dim(q1.mean, q2.mean, "combine_quadratics");
  require_spd(q1.precision, "combine_quadratics: q1.precision");
  require_spd(q2.precision, "combine_quadratics: q2.precision");

  GaussianQuadratic combined;
  combined.precision = q1.precision + q2.precision;
  Eigen::LLT<Matrix> llt(combined.precision);
  combined.mean =
      llt.solve(q1.precision * q1.mean + q2.precision * q2.mean);

  // (m1 - m2)^T (P1^-1 + P2^-1)^-1 (m1 - m2)
  const Matrix cov_sum = spd_inverse(q1.precision, "combine_quadratics") +
                         spd_inverse(q2.precision, "combine_quadratics");
  const Vector diff = q1.mean - q2.mean;
  const double residual =
      diff.dot(Eigen::LLT<Matrix>(cov_sum).solve(diff));
  return {std::move(combined), residual};
}

CompletedSquare complete_square_in_control(const Vector& h, const Matrix& g,
                                           const Vector& z,
                                           const Matrix& a_precision,
                                           const Matrix& gamma_precision,
                                           const Vector& u_hat) {
  const auto n = h.size();
  const auto r = u_hat.size();
  if (g.rows() != n || g.cols() != r || z.size() != n ||
      a_precision.rows() != n || gamma_precision.rows() != r)
    fail("complete_square_in_control", "dimension mismatch");
  require_spd(a_precision, "complete_square_in_control: a_precision");
  require_spd(gamma_precision, "complete_square_in_control: gamma_precision");

  const double gamma_sign =
      testhooks::corrupt_complete_square_sign.load() ? -1.0 : 1.0;

  CompletedSquare out;
  out.omega =
      g.transpose() * a_precision * g + gamma_sign * gamma_precision;
  Eigen::LLT<Matrix> llt(out.omega);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("complete_square_in_control: singular omega");
  // center - u_hat = omega^-1 g^T A (z - h - g u_hat); evaluating the
  // constant at the center keeps it a sum of nonnegative quadratics, free
  // of the cancellation the expanded three-term form suffers when the
  // control precision is large.
  const Vector offset =
      llt.solve(g.transpose() * (a_precision * (z - h - g * u_hat)));
  out.center = u_hat + offset;
  const Vector e = h + g * out.center - z;
  out.constant = e.dot(a_precision * e) +
                 gamma_sign * offset.dot(gamma_precision * offset);
  if (!std::isfinite(out.constant))
    throw std::runtime_error("complete_square_in_control: non-finite constant");
  return out;
}

Vector gaussian_linear_moment(const GaussianQuadratic& q,
                              const Matrix& linear_map, const Vector& offset) {
  if (linear_map.cols() != q.mean.size() || linear_map.rows() != offset.size())
    fail("gaussian_linear_moment", "dimension mismatch");
  return offset + linear_map * q.mean;
}

}  // namespace pdhp

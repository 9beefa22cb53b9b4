#include <doctest.h>

#include <cmath>

#include "pdhp/gaussian_algebra.hpp"
#include "pdhp/rng.hpp"
#include "test_util.hpp"

using namespace pdhp;
using testutil::random_spd;

namespace {

// Independent numerical minimizer (compass search); used to check the
// residual constant of combine_quadratics without reusing its algebra.
template <typename Fn>
double pattern_search_min(const Fn& fn, Vector x) {
  double step = 1.0;
  double best = fn(x);
  while (step > 1e-9) {
    bool improved = false;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      for (double dir : {1.0, -1.0}) {
        Vector probe = x;
        probe[k] += dir * step;
        const double value = fn(probe);
        if (value < best) {
          best = value;
          x = probe;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

TEST_CASE("combine_quadratics symmetric unit case") {
  GaussianQuadratic q{Vector::Zero(1), Matrix::Identity(1, 1)};
  const auto [combined, residual] = combine_quadratics(q, q);
  CHECK(combined.mean[0] == doctest::Approx(0.0));
  CHECK(combined.precision(0, 0) == doctest::Approx(2.0));
  CHECK(residual == doctest::Approx(0.0));
}

TEST_CASE("combine_quadratics shifted means") {
  GaussianQuadratic q1{Vector::Constant(1, 1.0), Matrix::Identity(1, 1)};
  GaussianQuadratic q2{Vector::Zero(1), Matrix::Identity(1, 1)};
  const auto [combined, residual] = combine_quadratics(q1, q2);
  CHECK(combined.mean[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(combined.precision(0, 0) == doctest::Approx(2.0));
  CHECK(residual == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("combine_quadratics pointwise identity at random inputs") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2;
    GaussianQuadratic q1{rng.normal_vector(d), random_spd(rng, d)};
    GaussianQuadratic q2{rng.normal_vector(d), random_spd(rng, d)};
    const auto [combined, residual] = combine_quadratics(q1, q2);
    CHECK(combined.precision.isApprox(q1.precision + q2.precision, 1e-14));
    for (int probe = 0; probe < 100; ++probe) {
      const Vector x = 3.0 * rng.normal_vector(d);
      const double lhs = quadratic_value(q1, x) + quadratic_value(q2, x);
      const double rhs = quadratic_value(combined, x) + residual;
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("combine_quadratics is symmetric in its arguments") {
  Rng rng(102);
  for (int d : {1, 2}) {
    GaussianQuadratic q1{rng.normal_vector(d), random_spd(rng, d)};
    GaussianQuadratic q2{rng.normal_vector(d), random_spd(rng, d)};
    const auto [c12, r12] = combine_quadratics(q1, q2);
    const auto [c21, r21] = combine_quadratics(q2, q1);
    CHECK(std::abs(r12 - r21) <= 1e-12);
    CHECK((c12.mean - c21.mean).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((c12.precision - c21.precision).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("combine_quadratics residual equals the gap between numeric minima") {
  Rng rng(103);
  for (int d : {1, 2}) {
    GaussianQuadratic q1{rng.normal_vector(d), random_spd(rng, d)};
    GaussianQuadratic q2{rng.normal_vector(d), random_spd(rng, d)};
    const auto [combined, residual] = combine_quadratics(q1, q2);
    auto sum_fn = [&](const Vector& x) {
      return quadratic_value(q1, x) + quadratic_value(q2, x);
    };
    auto combined_fn = [&](const Vector& x) {
      return quadratic_value(combined, x);
    };
    const double min_sum = pattern_search_min(sum_fn, Vector::Zero(d));
    const double min_combined = pattern_search_min(combined_fn, Vector::Zero(d));
    CHECK(std::abs(residual - (min_sum - min_combined)) <= 1e-8);
  }
}

TEST_CASE("combine_quadratics rejects bad input") {
  GaussianQuadratic q1{Vector::Zero(2), Matrix::Identity(2, 2)};
  GaussianQuadratic q2{Vector::Zero(1), Matrix::Identity(1, 1)};
  CHECK_THROWS_AS(combine_quadratics(q1, q2), std::invalid_argument);

  Matrix indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  GaussianQuadratic q3{Vector::Zero(2), indefinite};
  CHECK_THROWS_AS(combine_quadratics(q3, q3), std::invalid_argument);

  Matrix asymmetric(2, 2);
  asymmetric << 1.0, 0.5, -0.5, 1.0;
  GaussianQuadratic q4{Vector::Zero(2), asymmetric};
  CHECK_THROWS_AS(combine_quadratics(q4, q4), std::invalid_argument);
}

TEST_CASE("complete_square_in_control vanishing constant case") {
  const Vector h = Vector::Constant(1, 0.7);
  const Matrix g = Matrix::Constant(1, 1, 2.0);
  const CompletedSquare cs = complete_square_in_control(
      h, g, h, Matrix::Identity(1, 1), Matrix::Identity(1, 1),
      Vector::Zero(1));
  CHECK(cs.center[0] == doctest::Approx(0.0));
  CHECK(cs.constant == doctest::Approx(0.0));
  CHECK(std::exp(-cs.constant) == doctest::Approx(1.0));
}

TEST_CASE("complete_square_in_control worked scalar instance") {
  const CompletedSquare cs = complete_square_in_control(
      Vector::Constant(1, 1.0), Matrix::Constant(1, 1, 2.0), Vector::Zero(1),
      Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1));
  CHECK(cs.omega(0, 0) == doctest::Approx(5.0));
  CHECK(cs.center[0] == doctest::Approx(-0.4));
  CHECK(cs.constant == doctest::Approx(0.2));
}

TEST_CASE("complete_square_in_control pointwise identity") {
  Rng rng(104);
  for (auto [n, r] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vector h = rng.normal_vector(n);
      Matrix g(n, r);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = rng.normal();
      const Vector z = rng.normal_vector(n);
      const Matrix a = random_spd(rng, n);
      const Matrix gamma_precision = random_spd(rng, r);
      const Vector u_hat = rng.normal_vector(r);
      const CompletedSquare cs =
          complete_square_in_control(h, g, z, a, gamma_precision, u_hat);
      for (int probe = 0; probe < 100; ++probe) {
        const Vector u = 3.0 * rng.normal_vector(r);
        const Vector e = h + g * u - z;
        const Vector du = u - u_hat;
        const double lhs = e.dot(a * e) + du.dot(gamma_precision * du);
        const Vector dc = u - cs.center;
        const double rhs = dc.dot(cs.omega * dc) + cs.constant;
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST_CASE("gaussian_linear_moment basics") {
  GaussianQuadratic q{Vector::Zero(2), Matrix::Identity(2, 2)};
  CHECK(gaussian_linear_moment(q, Matrix::Identity(2, 2), Vector::Zero(2))
            .isZero());

  GaussianQuadratic q2{Vector(2), Matrix::Identity(2, 2)};
  q2.mean << 1.0, 2.0;
  Matrix map(2, 2);
  map << 2.0, 0.0, 0.0, 3.0;
  Vector offset(2);
  offset << 1.0, 1.0;
  const Vector moment = gaussian_linear_moment(q2, map, offset);
  CHECK(moment[0] == doctest::Approx(3.0));
  CHECK(moment[1] == doctest::Approx(7.0));

  CHECK_THROWS_AS(
      gaussian_linear_moment(q2, Matrix::Identity(3, 3), Vector::Zero(3)),
      std::invalid_argument);
}

TEST_CASE("gaussian_linear_moment agrees with quadrature") {
  // d=1, mean 0.5, precision 1 (density variance 1/2), map 4, offset -2.
  GaussianQuadratic q{Vector::Constant(1, 0.5), Matrix::Identity(1, 1)};
  const Vector moment = gaussian_linear_moment(
      q, Matrix::Constant(1, 1, 4.0), Vector::Constant(1, -2.0));
  CHECK(moment[0] == doctest::Approx(0.0).epsilon(1e-12));

  const double var = 0.5;
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
  const double step = 1e-4;
  double integral = 0.0;
  for (double x = 0.5 - 10.0; x <= 0.5 + 10.0; x += step) {
    const double density =
        norm * std::exp(-0.5 * (x - 0.5) * (x - 0.5) / var);
    integral += step * density * (-2.0 + 4.0 * x);
  }
  CHECK(std::abs(integral - moment[0]) <= 1e-6);
}

#include <doctest.h>

#include "pdhp/batch.hpp"
#include "pdhp/plant.hpp"
#include "pdhp/rng.hpp"
#include "test_util.hpp"

using namespace pdhp;

namespace {

struct Fixture {
  ForwardModel model;
  RandomizedController controller;
  CriticModel critic;
  std::vector<Vector> states;
};

Fixture make_fixture() {
  Fixture f;
  const IdDataset data = generate_dataset(
      benchmark_plant(), 1200, Vector::Constant(1, -4.0),
      Vector::Constant(1, 4.0), Vector::Constant(1, -3.0),
      Vector::Constant(1, 3.0), 51);
  SysidOptions opt;
  opt.x_lo = Vector::Constant(1, -4.0);
  opt.x_hi = Vector::Constant(1, 4.0);
  f.model = fit_forward_model(data, opt);

  const Vector lo = Vector::Constant(1, -4.0);
  const Vector hi = Vector::Constant(1, 4.0);
  f.controller = make_controller(
      init_weights(make_rbf(place_centers(lo, hi, 6, 1.0), 1, true), 52),
      Matrix::Constant(1, 1, 0.01));
  f.critic.net =
      init_weights(make_rbf(place_centers(lo, hi, 6, 1.0), 1, false), 53);
  f.critic.net.weights *= 150.0;

  Rng rng(54);
  for (int i = 0; i < 500; ++i)
    f.states.push_back(Vector::Constant(1, rng.uniform(-4.0, 4.0)));
  return f;
}

}  // namespace

TEST_CASE("parallel critic targets are bit-identical to the serial reference") {
  const Fixture f = make_fixture();
  const auto serial =
      critic_targets(f.model, f.controller, f.critic, f.states, Exec::serial);
  const auto parallel = critic_targets(f.model, f.controller, f.critic,
                                       f.states, Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i] == parallel[i]);
}

TEST_CASE("parallel control solves are bit-identical to the serial reference") {
  const Fixture f = make_fixture();
  const SolveOptions opt;
  const auto serial = solve_controls(f.model, f.controller, f.critic, f.states,
                                     opt, Exec::serial);
  const auto parallel = solve_controls(f.model, f.controller, f.critic,
                                       f.states, opt, Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].u_star == parallel[i].u_star);
    CHECK(serial[i].iterations == parallel[i].iterations);
    CHECK(serial[i].converged == parallel[i].converged);
  }
}

TEST_CASE("parallel activation matrices are bit-identical") {
  const Fixture f = make_fixture();
  const Matrix serial =
      activation_matrix(f.controller.net, f.states, Exec::serial);
  const Matrix parallel =
      activation_matrix(f.controller.net, f.states, Exec::parallel);
  CHECK(serial == parallel);
  CHECK(serial.rows() == f.controller.net.num_columns());
  CHECK(serial.cols() == static_cast<Eigen::Index>(f.states.size()));
}

TEST_CASE("exceptions inside the parallel loop surface to the caller") {
  const Fixture f = make_fixture();
  std::vector<Vector> bad = f.states;
  bad[bad.size() / 2] = Vector::Zero(2);  // wrong dimension
  CHECK_THROWS_AS(
      critic_targets(f.model, f.controller, f.critic, bad, Exec::parallel),
      std::invalid_argument);
  CHECK_THROWS_AS(
      critic_targets(f.model, f.controller, f.critic, bad, Exec::serial),
      std::invalid_argument);
}

// Timing comparison of the OpenMP batch kernels against their serial
// reference implementations, plus a bitwise agreement check.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "pdhp/batch.hpp"
#include "pdhp/config.hpp"
#include "pdhp/experiment.hpp"
#include "pdhp/fpd_oracle.hpp"
#include "pdhp/rng.hpp"
#include "pdhp/trainer.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::vector<pdhp::Vector> sample_states(int count) {
  pdhp::Rng rng(424242);
  std::vector<pdhp::Vector> states;
  states.reserve(count);
  for (int i = 0; i < count; ++i)
    states.push_back(pdhp::Vector::Constant(1, rng.uniform(-4.0, 4.0)));
  return states;
}

double max_vector_diff(const std::vector<pdhp::Vector>& a,
                       const std::vector<pdhp::Vector>& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return diff;
}

void report(const char* name, double serial_ms, double parallel_ms,
            double max_diff) {
  std::printf("%-18s %10.1f ms %10.1f ms   x%.2f   max|diff| %.3g\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick =
      argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int n_targets = quick ? 400 : 20000;
  const int n_solves = quick ? 200 : 4000;
  const int n_phi = quick ? 4000 : 400000;

  pdhp::ExperimentConfig cfg;
  cfg.sysid_holdout_samples = 0;
  if (quick) cfg.sysid_samples = 500;
  const pdhp::ForwardModel model = pdhp::identify_from_config(cfg).model;

  pdhp::TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  const pdhp::Vector lo = pdhp::Vector::Constant(1, tc.state_low);
  const pdhp::Vector hi = pdhp::Vector::Constant(1, tc.state_high);
  pdhp::RandomizedController controller = pdhp::make_controller(
      pdhp::init_weights(
          pdhp::make_rbf(
              pdhp::place_centers(lo, hi, tc.action_bases, tc.width_scale), 1,
              true),
          11),
      pdhp::Matrix::Constant(1, 1, tc.gamma_init));
  pdhp::CriticModel critic{pdhp::init_weights(
      pdhp::make_rbf(
          pdhp::place_centers(lo, hi, tc.critic_bases, tc.width_scale), 1,
          false),
      12)};
  // Critic weights at the scale training produces.
  critic.net.weights *= 100.0;

  std::printf("%-18s %13s %13s %8s\n", "kernel", "serial", "parallel",
              "speedup");

  {
    const auto states = sample_states(n_targets);
    auto t0 = Clock::now();
    const auto serial = pdhp::critic_targets(model, controller, critic, states,
                                             pdhp::Exec::serial);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto parallel = pdhp::critic_targets(model, controller, critic,
                                               states, pdhp::Exec::parallel);
    report("critic_targets", serial_ms, ms_since(t0),
           max_vector_diff(serial, parallel));
  }
  {
    const auto states = sample_states(n_solves);
    const pdhp::SolveOptions opt;
    auto t0 = Clock::now();
    const auto serial = pdhp::solve_controls(model, controller, critic, states,
                                             opt, pdhp::Exec::serial);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto parallel = pdhp::solve_controls(model, controller, critic,
                                               states, opt, pdhp::Exec::parallel);
    double diff = 0.0;
    for (std::size_t i = 0; i < serial.size(); ++i)
      diff = std::max(diff,
                      std::abs(serial[i].u_star[0] - parallel[i].u_star[0]));
    report("solve_controls", serial_ms, ms_since(t0), diff);
  }
  {
    const auto states = sample_states(n_phi);
    auto t0 = Clock::now();
    const pdhp::Matrix serial =
        pdhp::activation_matrix(model.h_net, states, pdhp::Exec::serial);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const pdhp::Matrix parallel =
        pdhp::activation_matrix(model.h_net, states, pdhp::Exec::parallel);
    report("activation_matrix", serial_ms, ms_since(t0),
           (serial - parallel).cwiseAbs().maxCoeff());
  }
  {
    const pdhp::IdealSpec ideal = pdhp::regulation_ideal(model, controller);
    const pdhp::QuadratureGrid grid = pdhp::make_grid(
        -12.0, 12.0, 0.005, -3.0, 3.0, quick ? 1e-2 : 1e-3);
    auto t0 = Clock::now();
    const double serial = pdhp::argmin_one_step_objective_with_critic(
        model, ideal, critic, controller, 2.0, grid, pdhp::Exec::serial);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const double parallel = pdhp::argmin_one_step_objective_with_critic(
        model, ideal, critic, controller, 2.0, grid, pdhp::Exec::parallel);
    report("oracle_argmin", serial_ms, ms_since(t0),
           std::abs(serial - parallel));
  }
  return 0;
}

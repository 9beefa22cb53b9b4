#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdhp/rng.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// True stochastic plant x_t = h(x_{t-1}) + g(x_{t-1}) u_t + eps_t with
// eps_t ~ N(0, noise_covariance) under standard sampling semantics.
struct PlantSpec {
  std::string name;
  int state_dim = 1;
  int control_dim = 1;
  std::function<Vector(const Vector&)> h_true;
  std::function<Matrix(const Vector&)> g_true;  // n x r
  Matrix noise_covariance;
  Matrix noise_chol;  // lower Cholesky factor; zero matrix when noise is off
};

struct Trajectory {
  std::vector<Vector> states;    // x_0 .. x_T
  std::vector<Vector> controls;  // u_1 .. u_T
  std::uint64_t seed = 0;
};

PlantSpec make_plant(std::string name, int state_dim, int control_dim,
                     std::function<Vector(const Vector&)> h,
                     std::function<Matrix(const Vector&)> g,
                     Matrix noise_covariance);

// x_{t+1} = sin(x) + cos(3x) + (2 + cos(x)) u + eps, eps ~ N(0, 0.01).
PlantSpec benchmark_plant();

// Registry keyed by the config's plant preset string; throws on unknown names.
PlantSpec plant_by_name(const std::string& name);

PlantSpec without_noise(PlantSpec spec);

Vector plant_step(const PlantSpec& spec, const Vector& x, const Vector& u,
                  Rng& rng);

// Closed-loop rollout. The noise at step t is drawn from a substream
// derived from (seed, t), so paired rollouts with different policies see
// identical noise sequences.
Trajectory simulate(const PlantSpec& spec,
                    const std::function<Vector(const Vector&)>& policy,
                    const Vector& x0, int steps, std::uint64_t seed);

}  // namespace pdhp

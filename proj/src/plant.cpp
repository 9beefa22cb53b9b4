#include "pdhp/plant.hpp"

#include <cmath>
#include <stdexcept>

#include "pdhp/gaussian_algebra.hpp"

namespace pdhp {

PlantSpec make_plant(std::string name, int state_dim, int control_dim,
                     std::function<Vector(const Vector&)> h,
                     std::function<Matrix(const Vector&)> g,
                     Matrix noise_covariance) {
  PlantSpec spec;
  spec.name = std::move(name);
  spec.state_dim = state_dim;
  spec.control_dim = control_dim;
  spec.h_true = std::move(h);
  spec.g_true = std::move(g);
  if (noise_covariance.rows() != state_dim ||
      noise_covariance.cols() != state_dim)
    throw std::invalid_argument("make_plant: bad noise covariance shape");
  if (noise_covariance.isZero(0.0)) {
    spec.noise_chol = Matrix::Zero(state_dim, state_dim);
  } else {
    require_spd(noise_covariance, "plant noise covariance");
    spec.noise_chol =
        Eigen::LLT<Matrix>(noise_covariance).matrixL();
  }
  spec.noise_covariance = std::move(noise_covariance);
  return spec;
}

PlantSpec benchmark_plant() {
  auto h = [](const Vector& x) {
    Vector out(1);
    out[0] = std::sin(x[0]) + std::cos(3.0 * x[0]);
    return out;
  };
  auto g = [](const Vector& x) {
    Matrix out(1, 1);
    out(0, 0) = 2.0 + std::cos(x[0]);
    return out;
  };
  Matrix cov(1, 1);
  cov(0, 0) = 0.01;
  return make_plant("paper-benchmark", 1, 1, h, g, std::move(cov));
}

PlantSpec plant_by_name(const std::string& name) {
  if (name == "paper-benchmark") return benchmark_plant();
  throw std::invalid_argument("unknown plant preset: " + name);
}

PlantSpec without_noise(PlantSpec spec) {
  spec.noise_covariance.setZero();
  spec.noise_chol.setZero();
  return spec;
}

Vector plant_step(const PlantSpec& spec, const Vector& x, const Vector& u,
                  Rng& rng) {
  if (x.size() != spec.state_dim || u.size() != spec.control_dim)
    throw std::invalid_argument("plant_step: dimension mismatch");
  Vector next = spec.h_true(x) + spec.g_true(x) * u;
  if (!spec.noise_chol.isZero(0.0))
    next += spec.noise_chol * rng.normal_vector(spec.state_dim);
  return next;
}

Trajectory simulate(const PlantSpec& spec,
                    const std::function<Vector(const Vector&)>& policy,
                    const Vector& x0, int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
  Trajectory traj;
  traj.seed = seed;
  traj.states.reserve(steps + 1);
  traj.controls.reserve(steps);
  traj.states.push_back(x0);
  const std::uint64_t stream = mix_seed(seed, seed_tag::plant_noise);
  Vector x = x0;
  for (int t = 1; t <= steps; ++t) {
    Vector u = policy(x);
    if (u.size() != spec.control_dim)
      throw std::invalid_argument("simulate: policy returned wrong dimension");
    Rng step_rng(mix_seed(stream, static_cast<std::uint64_t>(t)));
    x = plant_step(spec, x, u, step_rng);
    traj.controls.push_back(std::move(u));
    traj.states.push_back(x);
  }
  return traj;
}

}  // namespace pdhp

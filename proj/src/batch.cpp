#include "pdhp/batch.hpp"

#include <exception>
#include <stdexcept>

namespace pdhp {

namespace {

// Runs the loop body over [0, count), serial or OpenMP. The body must only
// write to its own slot.
template <typename Body>
void for_each_index(std::size_t count, Exec exec, const Body& body) {
  std::vector<std::exception_ptr> errors(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(count); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace

template <typename T>
std::vector<T> map_states(std::span<const Vector> states,
                          const std::function<T(const Vector&)>& fn,
                          Exec exec) {
  std::vector<T> out(states.size());
  for_each_index(states.size(), exec,
                 [&](std::size_t i) { out[i] = fn(states[i]); });
  return out;
}

template std::vector<Vector> map_states<Vector>(
    std::span<const Vector>, const std::function<Vector(const Vector&)>&, Exec);
template std::vector<SolveReport> map_states<SolveReport>(
    std::span<const Vector>, const std::function<SolveReport(const Vector&)>&,
    Exec);

std::vector<Vector> critic_targets(const ForwardModel& model,
                                   const RandomizedController& controller,
                                   const CriticModel& critic,
                                   std::span<const Vector> states, Exec exec) {
  std::vector<Vector> out(states.size());
  for_each_index(states.size(), exec, [&](std::size_t i) {
    out[i] = critic_target(model, controller, critic, states[i]);
  });
  return out;
}

std::vector<SolveReport> solve_controls(const ForwardModel& model,
                                        const RandomizedController& controller,
                                        const CriticModel& critic,
                                        std::span<const Vector> states,
                                        const SolveOptions& opt, Exec exec) {
  std::vector<SolveReport> out(states.size());
  for_each_index(states.size(), exec, [&](std::size_t i) {
    out[i] = solve_optimal_control(model, controller, critic, states[i], opt);
  });
  return out;
}

Matrix activation_matrix(const RbfNetwork& net, std::span<const Vector> states,
                         Exec exec) {
  Matrix phi(net.num_columns(), states.size());
  for_each_index(states.size(), exec, [&](std::size_t i) {
    phi.col(static_cast<Eigen::Index>(i)) = activation_vector(net, states[i]);
  });
  return phi;
}

}  // namespace pdhp

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pdhp/action.hpp"
#include "pdhp/critic.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Applies fn to every state, writing results into preassigned slots so the
// parallel path is bit-identical to the serial reference. Exceptions raised
// by fn are collected and the first one is rethrown after the loop.
template <typename T>
std::vector<T> map_states(std::span<const Vector> states,
                          const std::function<T(const Vector&)>& fn,
                          Exec exec);

// Per-state critic targets (embarrassingly parallel over the batch).
std::vector<Vector> critic_targets(const ForwardModel& model,
                                   const RandomizedController& controller,
                                   const CriticModel& critic,
                                   std::span<const Vector> states, Exec exec);

// Per-state optimal-control solves.
std::vector<SolveReport> solve_controls(const ForwardModel& model,
                                        const RandomizedController& controller,
                                        const CriticModel& critic,
                                        std::span<const Vector> states,
                                        const SolveOptions& opt, Exec exec);

// Column i holds the activation vector (with bias entry when configured)
// of states[i]; this is the design matrix the training phases reuse.
Matrix activation_matrix(const RbfNetwork& net, std::span<const Vector> states,
                         Exec exec);

}  // namespace pdhp

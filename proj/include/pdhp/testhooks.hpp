#pragma once

#include <atomic>
#include <cstdint>

namespace pdhp::testhooks {

// Flips the sign of the control-precision term inside the
// completing-the-square identity. Exists so the verify command's
// self-checks can be shown to catch a corrupted build.
inline std::atomic<bool> corrupt_complete_square_sign{false};

}  // namespace pdhp::testhooks

namespace pdhp::counters {

// Number of critic-target evaluations since process start. Training tests
// use it to prove targets are computed exactly once per state and phase.
inline std::atomic<std::uint64_t> critic_target_evals{0};

}  // namespace pdhp::counters

#pragma once

#include <Eigen/Dense>

namespace pdhp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Execution policy for the batch kernels. Serial is the reference
// implementation; parallel must produce bit-identical results.
enum class Exec { serial, parallel };

}  // namespace pdhp

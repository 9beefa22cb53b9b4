#pragma once

#include <cstdint>
#include <vector>

#include "pdhp/types.hpp"

namespace pdhp {

// RBF network with Gaussian bases exp[-(x - mu_j)^T rho_j^-1 (x - mu_j)]
// and linear output weights. Widths are stored as precisions rho_j^-1.
// When has_bias is set, a constant basis occupies the LAST weight column.
struct RbfNetwork {
  std::vector<Vector> centers;
  std::vector<Matrix> width_precisions;
  Matrix weights;  // output_dim x (num_bases + has_bias)
  bool has_bias = false;

  int input_dim() const {
    return centers.empty() ? 0 : static_cast<int>(centers.front().size());
  }
  int num_bases() const { return static_cast<int>(centers.size()); }
  int num_columns() const { return num_bases() + (has_bias ? 1 : 0); }
  int output_dim() const { return static_cast<int>(weights.rows()); }
};

struct BasisActivation {
  Vector values;          // num_bases, each in (0, 1]
  Matrix input_jacobian;  // num_bases x d, row j = d psi_j / d x
};

struct NetEval {
  Vector output;    // output_dim
  Matrix jacobian;  // output_dim x d
};

// Throws std::invalid_argument when sizes are inconsistent or a width
// precision is not SPD.
void validate(const RbfNetwork& net);

BasisActivation basis_eval(const RbfNetwork& net, const Vector& x);

NetEval net_eval(const RbfNetwork& net, const Vector& x);

// Basis vector including the trailing 1 for the bias column; this is the
// regressor the weights multiply.
Vector activation_vector(const RbfNetwork& net, const Vector& x);

// Zero-mean Gaussian weights with std 1/sqrt(fan_in), fan_in = number of
// weight columns. Deterministic per seed.
RbfNetwork init_weights(RbfNetwork net, std::uint64_t seed);

struct CenterLayout {
  std::vector<Vector> centers;
  std::vector<Matrix> width_precisions;
};

// Uniform grid of `count` centers per axis over [lo, hi] with isotropic
// widths of standard scale width_scale * grid spacing (precision =
// 1/scale^2 in the no-1/2 exponent convention). count == 1 places a single
// center at the midpoint.
CenterLayout place_centers(const Vector& lo, const Vector& hi, int count,
                           double width_scale);

RbfNetwork make_rbf(CenterLayout layout, int output_dim, bool bias);

}  // namespace pdhp

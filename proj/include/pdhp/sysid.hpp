#pragma once

#include <cstdint>
#include <vector>

#include "pdhp/plant.hpp"
#include "pdhp/rbf.hpp"
#include "pdhp/types.hpp"

namespace pdhp {

// Identified Gaussian forward model: x_t ~ N(h(x) + g(x) u, sigma).
// g_net has n*r outputs reshaped column-major into an n x r matrix.
struct ForwardModel {
  RbfNetwork h_net;
  RbfNetwork g_net;
  Matrix sigma;
  Matrix sigma_precision;
  int state_dim = 1;
  int control_dim = 1;
};

struct IdRecord {
  Vector x_prev;
  Vector u;
  Vector x_next;
};

struct IdDataset {
  std::vector<IdRecord> records;
  int state_dim = 1;
  int control_dim = 1;
};

IdDataset generate_dataset(const PlantSpec& spec, int num_samples,
                           const Vector& x_lo, const Vector& x_hi,
                           const Vector& u_lo, const Vector& u_hi,
                           std::uint64_t seed);

struct SysidOptions {
  int h_bases = 15;
  int g_bases = 6;
  bool h_bias = true;
  bool g_bias = true;
  double width_scale = 1.0;
  Vector x_lo;  // center placement range
  Vector x_hi;
};

// Joint linear least squares of the h and g weights on the regressor
// [psi_h(x); psi_g(x) (x) u] against x_next; sigma is the mean residual
// outer product, floored at 1e-8 I. Throws on a rank-deficient regressor.
ForwardModel fit_forward_model(const IdDataset& data, const SysidOptions& opt);

struct ModelEval {
  Vector x_hat;                 // h + g u
  Vector h;                     // n
  Matrix g;                     // n x r
  Matrix h_prime;               // n x n, d h / d x
  std::vector<Matrix> g_prime;  // n entries, g_prime[k] = d g / d x_k (n x r)
};

ModelEval model_predict(const ForwardModel& model, const Vector& x,
                        const Vector& u);

// Contraction (g' v)_{i,k} = sum_j g_prime[k](i, j) v_j, the derivative of
// g(x) v with respect to x.
Matrix contract_g_prime(const std::vector<Matrix>& g_prime, const Vector& v);

// Diagnostics on records not used for the fit.
struct HoldoutReport {
  double rms = 0.0;
  double max_abs_residual = 0.0;  // empirical approximation bound
};

HoldoutReport evaluate_holdout(const ForwardModel& model,
                               const IdDataset& holdout);

}  // namespace pdhp

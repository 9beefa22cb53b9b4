#include "pdhp/rbf.hpp"

#include <cmath>
#include <stdexcept>

#include "pdhp/gaussian_algebra.hpp"
#include "pdhp/rng.hpp"

namespace pdhp {

void validate(const RbfNetwork& net) {
  if (net.centers.size() != net.width_precisions.size())
    throw std::invalid_argument("rbf: centers/widths count mismatch");
  if (net.weights.cols() != net.num_columns())
    throw std::invalid_argument("rbf: weight columns do not match bases");
  const int d = net.input_dim();
  for (std::size_t j = 0; j < net.centers.size(); ++j) {
    if (net.centers[j].size() != d)
      throw std::invalid_argument("rbf: center dimension mismatch");
    require_spd(net.width_precisions[j], "rbf width precision");
  }
}

BasisActivation basis_eval(const RbfNetwork& net, const Vector& x) {
  const int d = net.input_dim();
  if (x.size() != d) throw std::invalid_argument("basis_eval: bad input dim");
  const int b = net.num_bases();
  BasisActivation act;
  act.values.resize(b);
  act.input_jacobian.resize(b, d);
  for (int j = 0; j < b; ++j) {
    const Vector diff = x - net.centers[j];
    const Vector pd = net.width_precisions[j] * diff;
    const double v = std::exp(-diff.dot(pd));
    act.values[j] = v;
    act.input_jacobian.row(j) = -2.0 * v * pd.transpose();
  }
  return act;
}

Vector activation_vector(const RbfNetwork& net, const Vector& x) {
  const BasisActivation act = basis_eval(net, x);
  if (!net.has_bias) return act.values;
  Vector phi(net.num_columns());
  phi.head(net.num_bases()) = act.values;
  phi[net.num_bases()] = 1.0;
  return phi;
}

NetEval net_eval(const RbfNetwork& net, const Vector& x) {
  const BasisActivation act = basis_eval(net, x);
  NetEval out;
  out.output = net.weights.leftCols(net.num_bases()) * act.values;
  if (net.has_bias) out.output += net.weights.col(net.num_bases());
  out.jacobian = net.weights.leftCols(net.num_bases()) * act.input_jacobian;
  return out;
}

RbfNetwork init_weights(RbfNetwork net, std::uint64_t seed) {
  const int fan_in = net.num_columns();
  const double std_dev = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Rng rng(seed);
  for (Eigen::Index i = 0; i < net.weights.rows(); ++i)
    for (Eigen::Index j = 0; j < net.weights.cols(); ++j)
      net.weights(i, j) = std_dev * rng.normal();
  return net;
}

CenterLayout place_centers(const Vector& lo, const Vector& hi, int count,
                           double width_scale) {
  const int d = static_cast<int>(lo.size());
  if (hi.size() != d) throw std::invalid_argument("place_centers: bad bounds");
  if (count < 1) throw std::invalid_argument("place_centers: count must be >= 1");
  if (!(width_scale > 0.0))
    throw std::invalid_argument("place_centers: width_scale must be > 0");
  for (int k = 0; k < d; ++k)
    if (!(lo[k] < hi[k]))
      throw std::invalid_argument("place_centers: lo must be < hi");

  // Per-axis spacing; with a single center the full range stands in for it.
  Vector spacing(d);
  for (int k = 0; k < d; ++k)
    spacing[k] = (hi[k] - lo[k]) / static_cast<double>(std::max(count - 1, 1));
  const double mean_spacing = spacing.mean();
  const double scale = width_scale * mean_spacing;
  const Matrix precision = Matrix::Identity(d, d) / (scale * scale);

  CenterLayout layout;
  const long total = static_cast<long>(std::pow(count, d));
  layout.centers.reserve(total);
  layout.width_precisions.reserve(total);
  std::vector<int> idx(d, 0);
  for (long c = 0; c < total; ++c) {
    Vector center(d);
    for (int k = 0; k < d; ++k)
      center[k] = count == 1 ? 0.5 * (lo[k] + hi[k]) : lo[k] + idx[k] * spacing[k];
    layout.centers.push_back(center);
    layout.width_precisions.push_back(precision);
    for (int k = 0; k < d; ++k) {
      if (++idx[k] < count) break;
      idx[k] = 0;
    }
  }
  return layout;
}

RbfNetwork make_rbf(CenterLayout layout, int output_dim, bool bias) {
  RbfNetwork net;
  net.centers = std::move(layout.centers);
  net.width_precisions = std::move(layout.width_precisions);
  net.has_bias = bias;
  net.weights = Matrix::Zero(output_dim, net.num_columns());
  validate(net);
  return net;
}

}  // namespace pdhp

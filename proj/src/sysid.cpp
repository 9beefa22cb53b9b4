#include "pdhp/sysid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pdhp/gaussian_algebra.hpp"

namespace pdhp {

IdDataset generate_dataset(const PlantSpec& spec, int num_samples,
                           const Vector& x_lo, const Vector& x_hi,
                           const Vector& u_lo, const Vector& u_hi,
                           std::uint64_t seed) {
  if (num_samples < 1)
    throw std::invalid_argument("generate_dataset: num_samples must be >= 1");
  for (int k = 0; k < x_lo.size(); ++k)
    if (!(x_lo[k] < x_hi[k]))
      throw std::invalid_argument("generate_dataset: degenerate x range");
  for (int k = 0; k < u_lo.size(); ++k)
    if (!(u_lo[k] < u_hi[k]))
      throw std::invalid_argument("generate_dataset: degenerate u range");

  IdDataset data;
  data.state_dim = spec.state_dim;
  data.control_dim = spec.control_dim;
  data.records.resize(num_samples);
  // Per-record substreams keep generation order-independent.
  for (int i = 0; i < num_samples; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    IdRecord& rec = data.records[i];
    rec.x_prev = rng.uniform_vector(x_lo, x_hi);
    rec.u = rng.uniform_vector(u_lo, u_hi);
    rec.x_next = plant_step(spec, rec.x_prev, rec.u, rng);
  }
  return data;
}

ForwardModel fit_forward_model(const IdDataset& data, const SysidOptions& opt) {
  const int n = data.state_dim;
  const int r = data.control_dim;
  const int records = static_cast<int>(data.records.size());

  RbfNetwork h_net = make_rbf(
      place_centers(opt.x_lo, opt.x_hi, opt.h_bases, opt.width_scale), n,
      opt.h_bias);
  RbfNetwork g_net = make_rbf(
      place_centers(opt.x_lo, opt.x_hi, opt.g_bases, opt.width_scale), n * r,
      opt.g_bias);

  const int ch = h_net.num_columns();
  const int cg = g_net.num_columns();
  const int cols = ch + r * cg;
  if (records < cols) {
    std::ostringstream msg;
    msg << "fit_forward_model: " << records << " records cannot determine "
        << cols << " weights";
    throw std::invalid_argument(msg.str());
  }

  // x_next_i = sum_b Hw[i,b] psi_h,b + sum_{j,b} Gw[i + j n, b] psi_g,b u_j,
  // so every output component shares the regressor [psi_h; psi_g (x) u].
  Matrix regressor(records, cols);
  Matrix targets(records, n);
  for (int i = 0; i < records; ++i) {
    const IdRecord& rec = data.records[i];
    regressor.row(i).head(ch) = activation_vector(h_net, rec.x_prev);
    const Vector phi_g = activation_vector(g_net, rec.x_prev);
    for (int j = 0; j < r; ++j)
      regressor.row(i).segment(ch + j * cg, cg) = rec.u[j] * phi_g;
    targets.row(i) = rec.x_next.transpose();
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(regressor);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) {
    std::ostringstream msg;
    msg << "fit_forward_model: regressor rank " << qr.rank() << " < " << cols
        << " columns (" << ch << " for h, " << r * cg
        << " for g); widen the excitation ranges or reduce bases";
    throw std::runtime_error(msg.str());
  }
  const Matrix solution = qr.solve(targets);  // cols x n

  for (int i = 0; i < n; ++i)
    h_net.weights.row(i) = solution.col(i).head(ch).transpose();
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i)
      g_net.weights.row(i + j * n) =
          solution.col(i).segment(ch + j * cg, cg).transpose();

  ForwardModel model;
  model.h_net = std::move(h_net);
  model.g_net = std::move(g_net);
  model.state_dim = n;
  model.control_dim = r;

  Matrix sigma = Matrix::Zero(n, n);
  for (int i = 0; i < records; ++i) {
    const Vector resid =
        targets.row(i).transpose() - (regressor.row(i) * solution).transpose();
    sigma += resid * resid.transpose();
  }
  sigma /= static_cast<double>(records);
  // Floor keeps sigma invertible on noise-free plants.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  const Vector clamped = eig.eigenvalues().cwiseMax(1e-8);
  model.sigma = eig.eigenvectors() * clamped.asDiagonal() *
                eig.eigenvectors().transpose();
  model.sigma = 0.5 * (model.sigma + model.sigma.transpose());
  model.sigma_precision = spd_inverse(model.sigma, "sigma");
  return model;
}

ModelEval model_predict(const ForwardModel& model, const Vector& x,
                        const Vector& u) {
  const int n = model.state_dim;
  const int r = model.control_dim;
  if (x.size() != n || u.size() != r)
    throw std::invalid_argument("model_predict: dimension mismatch");

  const NetEval he = net_eval(model.h_net, x);
  const NetEval ge = net_eval(model.g_net, x);

  ModelEval out;
  out.h = he.output;
  out.h_prime = he.jacobian;
  out.g = Eigen::Map<const Matrix>(ge.output.data(), n, r);
  out.g_prime.reserve(n);
  for (int k = 0; k < n; ++k) {
    const Vector col = ge.jacobian.col(k);
    out.g_prime.push_back(Eigen::Map<const Matrix>(col.data(), n, r));
  }
  out.x_hat = out.h + out.g * u;
  return out;
}

Matrix contract_g_prime(const std::vector<Matrix>& g_prime, const Vector& v) {
  const int n = static_cast<int>(g_prime.size());
  Matrix out(n == 0 ? 0 : g_prime.front().rows(), n);
  for (int k = 0; k < n; ++k) out.col(k) = g_prime[k] * v;
  return out;
}

HoldoutReport evaluate_holdout(const ForwardModel& model,
                               const IdDataset& holdout) {
  HoldoutReport report;
  if (holdout.records.empty()) return report;
  double sum_sq = 0.0;
  for (const IdRecord& rec : holdout.records) {
    const ModelEval ev = model_predict(model, rec.x_prev, rec.u);
    const Vector resid = rec.x_next - ev.x_hat;
    sum_sq += resid.squaredNorm();
    report.max_abs_residual =
        std::max(report.max_abs_residual, resid.cwiseAbs().maxCoeff());
  }
  report.rms = std::sqrt(sum_sq / static_cast<double>(holdout.records.size()));
  return report;
}

}  // namespace pdhp

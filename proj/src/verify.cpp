#include "pdhp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "pdhp/action.hpp"
#include "pdhp/experiment.hpp"
#include "pdhp/fpd_oracle.hpp"
#include "pdhp/gaussian_algebra.hpp"
#include "pdhp/rng.hpp"
#include "pdhp/scg.hpp"

namespace pdhp {

namespace {

Matrix random_spd(Rng& rng, int d) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  Matrix m = a.transpose() * a + 0.3 * Matrix::Identity(d, d);
  return 0.5 * (m + m.transpose());
}

struct Tracker {
  double worst = 0.0;
  bool ok = true;
  void observe(double err, double tol) {
    worst = std::max(worst, err);
    ok = ok && err <= tol;
  }
};

CheckResult check_gaussian_identities() {
  CheckResult result{"gaussian-identities", false, ""};
  Tracker combine, complete, symmetry;
  Rng rng(20260801);

  for (int d : {1, 2}) {
    for (int trial = 0; trial < 10; ++trial) {
      GaussianQuadratic q1{rng.normal_vector(d), random_spd(rng, d)};
      GaussianQuadratic q2{rng.normal_vector(d), random_spd(rng, d)};
      const auto [combined, residual] = combine_quadratics(q1, q2);
      const auto [swapped, residual_swapped] = combine_quadratics(q2, q1);
      symmetry.observe(std::abs(residual - residual_swapped), 1e-12);
      symmetry.observe(
          (combined.mean - swapped.mean).cwiseAbs().maxCoeff(), 1e-12);
      for (int probe = 0; probe < 100; ++probe) {
        const Vector x = 3.0 * rng.normal_vector(d);
        const double lhs = quadratic_value(q1, x) + quadratic_value(q2, x);
        const double rhs = quadratic_value(combined, x) + residual;
        combine.observe(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)),
                        1e-10);
      }
    }
  }

  for (auto [n, r] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vector h = rng.normal_vector(n);
      Matrix g(n, r);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = rng.normal();
      const Vector z = rng.normal_vector(n);
      const Matrix a = random_spd(rng, n);
      const Matrix gp = random_spd(rng, r);
      const Vector u_hat = rng.normal_vector(r);
      const CompletedSquare cs =
          complete_square_in_control(h, g, z, a, gp, u_hat);
      for (int probe = 0; probe < 100; ++probe) {
        const Vector u = 3.0 * rng.normal_vector(r);
        const Vector e = h + g * u - z;
        const Vector du = u - u_hat;
        const double lhs = e.dot(a * e) + du.dot(gp * du);
        const Vector dc = u - cs.center;
        const double rhs = dc.dot(cs.omega * dc) + cs.constant;
        complete.observe(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)),
                         1e-10);
      }
    }
  }

  result.pass = combine.ok && complete.ok && symmetry.ok;
  std::ostringstream detail;
  detail << "combine err " << combine.worst << ", complete-square err "
         << complete.worst << ", symmetry err " << symmetry.worst;
  result.detail = detail.str();
  return result;
}

CheckResult check_gradients(const ExperimentConfig& cfg) {
  CheckResult result{"gradient-checks", false, ""};
  Tracker tracker;
  Rng rng(20260802);
  const double step = 1e-6;

  for (int d : {1, 2}) {
    RbfNetwork net = make_rbf(
        place_centers(Vector::Constant(d, -2.0), Vector::Constant(d, 2.0), 3,
                      1.0),
        2, true);
    net = init_weights(std::move(net), 7);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x = 2.0 * rng.normal_vector(d);
      const NetEval eval = net_eval(net, x);
      for (int k = 0; k < d; ++k) {
        Vector xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        const Vector fd =
            (net_eval(net, xp).output - net_eval(net, xm).output) /
            (2.0 * step);
        for (int i = 0; i < eval.output.size(); ++i) {
          const double scale =
              std::max({std::abs(fd[i]), std::abs(eval.jacobian(i, k)), 1.0});
          tracker.observe(std::abs(fd[i] - eval.jacobian(i, k)) / scale, 1e-5);
        }
      }
    }
  }

  // Model derivatives on the identified benchmark.
  ExperimentConfig quick = cfg;
  quick.sysid_holdout_samples = 0;
  const ForwardModel model = identify_from_config(quick).model;
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = Vector::Constant(1, rng.uniform(-3.5, 3.5));
    const Vector u = Vector::Constant(1, rng.uniform(-1.0, 1.0));
    const ModelEval ev = model_predict(model, x, u);
    Vector xp = x, xm = x;
    xp[0] += step;
    xm[0] -= step;
    const ModelEval evp = model_predict(model, xp, u);
    const ModelEval evm = model_predict(model, xm, u);
    const double fd_h = (evp.h[0] - evm.h[0]) / (2.0 * step);
    const double fd_g = (evp.g(0, 0) - evm.g(0, 0)) / (2.0 * step);
    tracker.observe(std::abs(fd_h - ev.h_prime(0, 0)) /
                        std::max({std::abs(fd_h), 1.0}),
                    1e-5);
    tracker.observe(std::abs(fd_g - ev.g_prime[0](0, 0)) /
                        std::max({std::abs(fd_g), 1.0}),
                    1e-5);
  }

  result.pass = tracker.ok;
  std::ostringstream detail;
  detail << "max relative jacobian error " << tracker.worst;
  result.detail = detail.str();
  return result;
}

// Forward model with constant h and g and prescribed covariance; lets the
// closed forms be dialed in exactly.
ForwardModel constant_model(double h, double g, double sigma) {
  ForwardModel model;
  const Vector lo = Vector::Constant(1, -1.0);
  const Vector hi = Vector::Constant(1, 1.0);
  model.h_net = make_rbf(place_centers(lo, hi, 1, 1.0), 1, true);
  model.h_net.weights << 0.0, h;
  model.g_net = make_rbf(place_centers(lo, hi, 1, 1.0), 1, true);
  model.g_net.weights << 0.0, g;
  model.sigma = Matrix::Constant(1, 1, sigma);
  model.sigma_precision = Matrix::Constant(1, 1, 1.0 / sigma);
  model.state_dim = 1;
  model.control_dim = 1;
  return model;
}

RandomizedController zero_controller(double gamma) {
  const Vector lo = Vector::Constant(1, -4.0);
  const Vector hi = Vector::Constant(1, 4.0);
  return make_controller(make_rbf(place_centers(lo, hi, 6, 1.0), 1, true),
                         Matrix::Constant(1, 1, gamma));
}

CriticModel zero_critic() {
  const Vector lo = Vector::Constant(1, -4.0);
  const Vector hi = Vector::Constant(1, 4.0);
  return CriticModel{make_rbf(place_centers(lo, hi, 6, 1.0), 1, false)};
}

CheckResult check_closed_form_control() {
  CheckResult result{"closed-form-control", false, ""};
  Tracker tracker;
  Rng rng(20260803);

  {
    // Worked instance h=1, g=2, sigma=gamma=0.01 -> u* = -0.4.
    const ForwardModel model = constant_model(1.0, 2.0, 0.01);
    const RandomizedController controller = zero_controller(0.01);
    const CriticModel critic = zero_critic();
    const SolveReport report = solve_optimal_control(
        model, controller, critic, Vector::Constant(1, 0.5), {});
    tracker.observe(std::abs(report.u_star[0] + 0.4), 1e-12);
    tracker.observe(report.converged ? 0.0 : 1.0, 0.5);
  }
  {
    // h = 0 keeps the origin optimal.
    const ForwardModel model = constant_model(0.0, 2.0, 0.01);
    const SolveReport report =
        solve_optimal_control(model, zero_controller(0.01), zero_critic(),
                              Vector::Constant(1, 0.0), {});
    tracker.observe(std::abs(report.u_star[0]), 1e-12);
  }
  for (int trial = 0; trial < 25; ++trial) {
    const double h = rng.uniform(-2.0, 2.0);
    const double g = rng.uniform(0.5, 3.0);
    const double sigma = rng.uniform(0.005, 0.05);
    const double gamma = rng.uniform(0.005, 0.05);
    const ForwardModel model = constant_model(h, g, sigma);
    const SolveReport report =
        solve_optimal_control(model, zero_controller(gamma), zero_critic(),
                              Vector::Constant(1, 0.3), {});
    const double expected = -(g / sigma * h) / (g * g / sigma + 1.0 / gamma);
    tracker.observe(std::abs(report.u_star[0] - expected) /
                        std::max(1.0, std::abs(expected)),
                    1e-10);
  }

  result.pass = tracker.ok;
  std::ostringstream detail;
  detail << "max closed-form deviation " << tracker.worst;
  result.detail = detail.str();
  return result;
}

CheckResult check_quadrature_argmin(const ExperimentConfig& cfg) {
  CheckResult result{"quadrature-argmin", false, ""};
  Tracker tracker;

  ExperimentConfig quick = cfg;
  quick.sysid_holdout_samples = 0;
  const ForwardModel model = identify_from_config(quick).model;
  const RandomizedController controller =
      zero_controller(cfg.train.gamma_init);
  const CriticModel critic = zero_critic();
  const IdealSpec ideal = regulation_ideal(model, controller);
  const QuadratureGrid grid = make_grid(-12.0, 12.0, 0.005, -3.0, 3.0, 1e-3);

  const double sigma = model.sigma(0, 0);
  for (double x : {-3.0, -1.0, 0.5, 2.0, 3.5}) {
    Vector xv(1);
    xv[0] = x;
    const NetEval he = net_eval(model.h_net, xv);
    const NetEval ge = net_eval(model.g_net, xv);
    const double h = he.output[0];
    const double g = ge.output[0];

    // beta with zero continuation equals x_hat^2 / sigma.
    const double u_probe = -0.3;
    const double b = beta(
        model, ideal, [](double) { return 0.0; }, u_probe, x, grid);
    const double x_hat = h + g * u_probe;
    tracker.observe(std::abs(b - x_hat * x_hat / sigma) /
                        std::max(1.0, std::abs(b)),
                    1e-8);

    // quadrature argmin vs the chi = 0 closed form and the solver.
    const double closed =
        -(g / sigma * h) / (g * g / sigma + 1.0 / cfg.train.gamma_init);
    const double oracle_u = one_step_optimal_u(model, ideal, x, grid);
    tracker.observe(std::abs(oracle_u - closed), 1e-6);
    const SolveReport report =
        solve_optimal_control(model, controller, critic, xv, {});
    tracker.observe(std::abs(oracle_u - report.u_star[0]), 1e-6);
  }

  result.pass = tracker.ok;
  std::ostringstream detail;
  detail << "max argmin deviation " << tracker.worst;
  result.detail = detail.str();
  return result;
}

CheckResult check_scg() {
  CheckResult result{"scg", false, ""};
  Tracker tracker;

  {
    // Convex quadratic to 1e-6 within 50 iterations.
    Vector target(3);
    target << 1.0, -2.0, 0.5;
    auto objective = [&](const Vector& w, Vector& grad) {
      grad = 2.0 * (w - target);
      return (w - target).squaredNorm();
    };
    ScgOptions opt;
    opt.max_iter = 50;
    opt.tol_objective = 1e-14;
    opt.tol_weights = 1e-14;
    const ScgResult res = scg_minimize(objective, Vector::Zero(3), opt);
    tracker.observe((res.weights - target).norm(), 1e-6);
    tracker.observe(res.report.iterations <= 50 ? 0.0 : 1.0, 0.5);
  }
  {
    // Constant objective terminates immediately.
    auto objective = [](const Vector&, Vector& grad) {
      grad = Vector::Zero(2);
      return 3.0;
    };
    const ScgResult res = scg_minimize(objective, Vector::Zero(2), {});
    tracker.observe(res.report.iterations == 1 ? 0.0 : 1.0, 0.5);
    tracker.observe(res.report.converged ? 0.0 : 1.0, 0.5);
  }
  {
    // Rosenbrock from (-1.2, 1) reaches f < 1e-6 within 10000 iterations.
    auto objective = [](const Vector& w, Vector& grad) {
      const double a = w[0], b = w[1];
      grad.resize(2);
      grad[0] = -400.0 * a * (b - a * a) - 2.0 * (1.0 - a);
      grad[1] = 200.0 * (b - a * a);
      const double t1 = b - a * a;
      const double t2 = 1.0 - a;
      return 100.0 * t1 * t1 + t2 * t2;
    };
    Vector w0(2);
    w0 << -1.2, 1.0;
    ScgOptions opt;
    opt.max_iter = 10000;
    opt.tol_objective = 1e-16;
    opt.tol_weights = 1e-16;
    const ScgResult res = scg_minimize(objective, w0, opt);
    tracker.observe(res.report.final_value, 1e-6);
  }

  result.pass = tracker.ok;
  std::ostringstream detail;
  detail << "worst residual " << tracker.worst;
  result.detail = detail.str();
  return result;
}

}  // namespace

std::vector<std::string> known_checks() {
  return {"gaussian-identities", "gradient-checks", "closed-form-control",
          "quadrature-argmin", "scg"};
}

std::vector<CheckResult> run_checks(const ExperimentConfig& cfg,
                                    const std::vector<std::string>& filter) {
  const std::vector<std::string> known = known_checks();
  for (const std::string& name : filter)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ConfigError("unknown check name '" + name + "'");
  auto selected = [&](const char* name) {
    return filter.empty() ||
           std::find(filter.begin(), filter.end(), name) != filter.end();
  };

  std::vector<CheckResult> results;
  auto guard = [&](const char* name,
                   const std::function<CheckResult()>& check) {
    if (!selected(name)) return;
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("exception: ") + e.what()});
    }
  };

  guard("gaussian-identities", [] { return check_gaussian_identities(); });
  guard("gradient-checks", [&] { return check_gradients(cfg); });
  guard("closed-form-control", [] { return check_closed_form_control(); });
  guard("quadrature-argmin", [&] { return check_quadrature_argmin(cfg); });
  guard("scg", [] { return check_scg(); });
  return results;
}

}  // namespace pdhp

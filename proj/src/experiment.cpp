#include "pdhp/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pdhp/archive.hpp"
#include "pdhp/baseline_dhp.hpp"
#include "pdhp/plant.hpp"
#include "pdhp/svg_plot.hpp"
#include "pdhp/textio.hpp"
#include "pdhp/verify.hpp"

namespace pdhp {

namespace {

constexpr double kSettlingBand = 0.3;

PlantSpec plant_from_preset(const std::string& name) {
  try {
    return plant_by_name(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

void write_dataset_csv(const std::string& path, const IdDataset& data) {
  std::ofstream out = open_output(path);
  auto group = [&](const char* name, int dim, bool leading_comma) {
    for (int k = 0; k < dim; ++k) {
      if (leading_comma || k > 0) out << ',';
      out << name;
      if (dim > 1) out << '_' << k;
    }
  };
  group("x_prev", data.state_dim, false);
  group("u", data.control_dim, true);
  group("x_next", data.state_dim, true);
  out << '\n';
  for (const IdRecord& rec : data.records) {
    for (int k = 0; k < data.state_dim; ++k) {
      if (k) out << ',';
      out << format_double(rec.x_prev[k]);
    }
    for (int k = 0; k < data.control_dim; ++k)
      out << ',' << format_double(rec.u[k]);
    for (int k = 0; k < data.state_dim; ++k)
      out << ',' << format_double(rec.x_next[k]);
    out << '\n';
  }
}

void write_training_log(const std::string& path, const TrainingRun& run) {
  std::ofstream out = open_output(path);
  out << "cycle,phase,iteration,objective,weight_delta\n";
  for (const TrainLogRow& row : run.log)
    out << row.cycle << ',' << row.phase << ',' << row.iteration << ','
        << format_double(row.objective) << ','
        << format_double(row.weight_delta) << '\n';
}

void write_trajectory_csv(std::ofstream& out, const Trajectory& traj,
                          const std::string& method, std::uint64_t seed,
                          bool header) {
  const int n = static_cast<int>(traj.states.front().size());
  const int r = traj.controls.empty()
                    ? 1
                    : static_cast<int>(traj.controls.front().size());
  if (header) {
    out << "step";
    for (int k = 0; k < n; ++k) {
      out << ",x";
      if (n > 1) out << '_' << k;
    }
    for (int k = 0; k < r; ++k) {
      out << ",u";
      if (r > 1) out << '_' << k;
    }
    out << ",method,seed\n";
  }
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (int k = 0; k < n; ++k)
      out << ',' << format_double(traj.states[t][k]);
    for (int k = 0; k < r; ++k) {
      out << ',';
      if (t > 0) out << format_double(traj.controls[t - 1][k]);
    }
    out << ',' << method << ',' << seed << '\n';
  }
}

ExperimentConfig config_for_archive(const ModelArchive& archive,
                                    const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  return parse_config_text(archive.config_text);
}

const RandomizedController& controller_for_method(const ModelArchive& archive,
                                                  const std::string& method) {
  if (method == "prob") {
    if (!archive.prob_controller)
      throw ConfigError("archive has no trained probabilistic controller");
    return *archive.prob_controller;
  }
  if (method == "dhp") {
    if (!archive.dhp_controller)
      throw ConfigError("archive has no trained dhp controller");
    return *archive.dhp_controller;
  }
  throw ConfigError("unknown method '" + method + "' (expected prob or dhp)");
}

int run_command(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

IdentifyResult identify_from_config(const ExperimentConfig& cfg) {
  const PlantSpec plant = plant_from_preset(cfg.plant_preset);
  const int n = plant.state_dim;
  const int r = plant.control_dim;
  const Vector x_lo = Vector::Constant(n, cfg.sysid_x_low);
  const Vector x_hi = Vector::Constant(n, cfg.sysid_x_high);
  const Vector u_lo = Vector::Constant(r, cfg.sysid_u_low);
  const Vector u_hi = Vector::Constant(r, cfg.sysid_u_high);

  const IdDataset data =
      generate_dataset(plant, cfg.sysid_samples, x_lo, x_hi, u_lo, u_hi,
                       mix_seed(cfg.seed, seed_tag::sysid_data));
  if (!cfg.sysid_dataset_csv.empty())
    write_dataset_csv(cfg.sysid_dataset_csv, data);

  SysidOptions opt;
  opt.h_bases = cfg.sysid_h_bases;
  opt.g_bases = cfg.sysid_g_bases;
  opt.h_bias = cfg.sysid_h_bias;
  opt.g_bias = cfg.sysid_g_bias;
  opt.width_scale = cfg.sysid_width_scale;
  opt.x_lo = x_lo;
  opt.x_hi = x_hi;

  IdentifyResult result;
  result.model = fit_forward_model(data, opt);
  if (cfg.sysid_holdout_samples > 0) {
    const IdDataset holdout =
        generate_dataset(plant, cfg.sysid_holdout_samples, x_lo, x_hi, u_lo,
                         u_hi, mix_seed(cfg.seed, seed_tag::sysid_holdout));
    result.holdout = evaluate_holdout(result.model, holdout);
  }
  return result;
}

TrainingRun train_method(const ForwardModel& model, const ExperimentConfig& cfg,
                         const std::string& method) {
  TrainConfig train = cfg.train;
  train.seed = cfg.seed;
  train.exec = cfg.parallel ? Exec::parallel : Exec::serial;
  if (method == "prob") return run_training(model, train);
  if (method == "dhp") return run_dhp_training(model, train);
  throw ConfigError("unknown method '" + method + "' (expected prob or dhp)");
}

TrajectoryMetrics trajectory_metrics(const std::vector<Vector>& states,
                                     double x0) {
  TrajectoryMetrics metrics;
  const double sign = x0 >= 0.0 ? 1.0 : -1.0;
  int first_cross = -1;
  for (std::size_t t = 1; t < states.size(); ++t) {
    const double y = sign * states[t][0];
    if (y < 0.0) {
      metrics.peak_overshoot = std::max(metrics.peak_overshoot, -y);
      if (first_cross < 0) first_cross = static_cast<int>(t);
    }
    if (first_cross >= 0 && static_cast<int>(t) >= first_cross)
      metrics.peak_undershoot = std::max(metrics.peak_undershoot, y);
  }
  for (int t = static_cast<int>(states.size()) - 1; t >= 0; --t) {
    if (std::abs(states[t][0]) >= kSettlingBand) break;
    metrics.settling_step = t;
  }
  return metrics;
}

int cmd_identify(const std::string& config_path, const std::string& out_path) {
  return run_command([&] {
    const ExperimentConfig cfg = load_config(config_path);
    const IdentifyResult result = identify_from_config(cfg);

    std::cout << "identified forward model (" << cfg.sysid_h_bases << "/"
              << cfg.sysid_g_bases << " bases, " << cfg.sysid_samples
              << " samples)\n";
    std::cout << "sigma =";
    for (Eigen::Index i = 0; i < result.model.sigma.rows(); ++i)
      for (Eigen::Index j = 0; j < result.model.sigma.cols(); ++j)
        std::cout << ' ' << format_double(result.model.sigma(i, j));
    std::cout << '\n';
    std::cout << "holdout rms = " << format_double(result.holdout.rms) << '\n';
    std::cout << "holdout max |residual| = "
              << format_double(result.holdout.max_abs_residual) << '\n';

    ModelArchive archive;
    archive.plant_name = cfg.plant_preset;
    archive.seed = cfg.seed;
    archive.config_text = serialize_config(cfg);
    archive.forward = result.model;
    save_archive(archive, out_path);
    std::cout << "wrote " << out_path << '\n';
    return 0;
  });
}

int cmd_train(const std::string& config_path, const std::string& archive_path,
              const std::string& method) {
  return run_command([&] {
    ModelArchive archive = load_archive(archive_path);
    if (!archive.forward)
      throw ConfigError("archive has no forward model; run identify first");
    const ExperimentConfig cfg = config_for_archive(archive, config_path);

    const TrainingRun run = train_method(*archive.forward, cfg, method);
    write_training_log(cfg.train_log_csv, run);

    if (method == "prob") {
      archive.prob_controller = run.controller;
      archive.prob_critic = run.critic;
    } else {
      archive.dhp_controller = run.controller;
      archive.dhp_critic = run.critic;
    }
    save_archive(archive, archive_path);

    for (const PhaseRecord& phase : run.phases)
      std::cout << "cycle " << phase.cycle << ' ' << phase.phase << ": "
                << phase.iterations << " iterations, objective "
                << format_double(phase.final_objective) << ", excluded "
                << phase.excluded_states << '\n';
    if (method == "prob" && !run.gamma_history.empty())
      std::cout << "final gamma = "
                << format_double(run.gamma_history.back()(0, 0)) << '\n';
    std::cout << "updated " << archive_path << " [" << method << "], log in "
              << cfg.train_log_csv << '\n';
    return 0;
  });
}

int cmd_simulate(const std::string& archive_path, const std::string& method,
                 std::optional<double> x0, std::optional<int> steps,
                 std::optional<std::uint64_t> seed, const std::string& out_csv,
                 const std::string& plot_svg) {
  return run_command([&] {
    const ModelArchive archive = load_archive(archive_path);
    const ExperimentConfig cfg = config_for_archive(archive, "");
    const RandomizedController& controller =
        controller_for_method(archive, method);
    const PlantSpec plant = plant_from_preset(archive.plant_name);

    const double start = x0.value_or(cfg.eval_x0);
    const int horizon = steps.value_or(cfg.eval_steps);
    const std::uint64_t run_seed = seed.value_or(cfg.eval_seeds.front());
    if (horizon < 1) throw ConfigError("steps must be >= 1");

    auto policy = [&](const Vector& x) { return mean_control(controller, x); };
    const Trajectory traj =
        simulate(plant, policy, Vector::Constant(plant.state_dim, start),
                 horizon, run_seed);

    std::ofstream out = open_output(out_csv);
    write_trajectory_csv(out, traj, method, run_seed, true);
    std::cout << "wrote " << out_csv << " (" << traj.states.size()
              << " state rows)\n";

    if (!plot_svg.empty()) {
      PlotSeries state{"state x", "#1f77b4", {}};
      PlotSeries control{"control u", "#d62728", {}};
      for (const Vector& x : traj.states) state.values.push_back(x[0]);
      control.values.push_back(0.0);
      for (const Vector& u : traj.controls) control.values.push_back(u[0]);
      write_svg_chart(plot_svg, "closed-loop trajectory (" + method + ")",
                      {state, control});
      std::cout << "wrote " << plot_svg << '\n';
    }
    return 0;
  });
}

int cmd_compare(const std::string& archive_prob, const std::string& archive_dhp,
                std::optional<double> x0, std::optional<int> steps,
                const std::vector<std::uint64_t>& seeds,
                const std::string& out_csv, const std::string& plot_svg) {
  return run_command([&] {
    const ModelArchive a_prob = load_archive(archive_prob);
    const ModelArchive a_dhp = load_archive(archive_dhp);
    if (a_prob.plant_name != a_dhp.plant_name)
      throw ConfigError("archives use different plant presets: " +
                        a_prob.plant_name + " vs " + a_dhp.plant_name);
    const RandomizedController& prob = controller_for_method(a_prob, "prob");
    const RandomizedController& dhp = controller_for_method(a_dhp, "dhp");
    const ExperimentConfig cfg = config_for_archive(a_prob, "");
    const PlantSpec plant = plant_from_preset(a_prob.plant_name);

    const double start = x0.value_or(cfg.eval_x0);
    const int horizon = steps.value_or(cfg.eval_steps);
    const std::vector<std::uint64_t>& seed_list =
        seeds.empty() ? cfg.eval_seeds : seeds;
    if (horizon < 1) throw ConfigError("steps must be >= 1");

    // Paired rollouts with identical per-step noise substreams (same seed,
    // different policy); seeds fan out over worker threads and the rows are
    // written afterwards in seed order.
    const Vector x0_vec = Vector::Constant(plant.state_dim, start);
    std::vector<Trajectory> prob_trajs(seed_list.size());
    std::vector<Trajectory> dhp_trajs(seed_list.size());
    const long seed_count = static_cast<long>(seed_list.size());
#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (long i = 0; i < seed_count; ++i) {
      prob_trajs[i] = simulate(
          plant, [&](const Vector& x) { return mean_control(prob, x); },
          x0_vec, horizon, seed_list[i]);
      dhp_trajs[i] = simulate(
          plant, [&](const Vector& x) { return mean_control(dhp, x); },
          x0_vec, horizon, seed_list[i]);
    }

    std::ofstream out = open_output(out_csv);
    out << "seed,method,peak_overshoot,peak_undershoot,settling_step\n";
    double mean_over_prob = 0.0, mean_over_dhp = 0.0;
    for (std::size_t i = 0; i < seed_list.size(); ++i) {
      const TrajectoryMetrics mp =
          trajectory_metrics(prob_trajs[i].states, start);
      const TrajectoryMetrics md =
          trajectory_metrics(dhp_trajs[i].states, start);
      out << seed_list[i] << ",prob," << format_double(mp.peak_overshoot)
          << ',' << format_double(mp.peak_undershoot) << ','
          << mp.settling_step << '\n';
      out << seed_list[i] << ",dhp," << format_double(md.peak_overshoot)
          << ',' << format_double(md.peak_undershoot) << ','
          << md.settling_step << '\n';
      mean_over_prob += mp.peak_overshoot;
      mean_over_dhp += md.peak_overshoot;
    }
    mean_over_prob /= static_cast<double>(seed_list.size());
    mean_over_dhp /= static_cast<double>(seed_list.size());
    std::cout << "mean peak overshoot: prob " << format_double(mean_over_prob)
              << ", dhp " << format_double(mean_over_dhp) << '\n';
    std::cout << "wrote " << out_csv << '\n';

    if (!plot_svg.empty()) {
      PlotSeries sp{"prob state", "#1f77b4", {}};
      PlotSeries sd{"dhp state", "#d62728", {}};
      for (const Vector& x : prob_trajs.front().states)
        sp.values.push_back(x[0]);
      for (const Vector& x : dhp_trajs.front().states)
        sd.values.push_back(x[0]);
      write_svg_chart(plot_svg, "state comparison, seed " +
                                    std::to_string(seed_list.front()),
                      {sp, sd});
      std::cout << "wrote " << plot_svg << '\n';
    }
    return 0;
  });
}

int cmd_verify(const std::string& config_path,
               const std::vector<std::string>& checks) {
  return run_command([&] {
    const ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    const std::vector<CheckResult> results = run_checks(cfg, checks);
    std::size_t width = 0;
    for (const CheckResult& res : results)
      width = std::max(width, res.name.size());
    bool all_pass = true;
    for (const CheckResult& res : results) {
      std::cout << (res.pass ? "PASS  " : "FAIL  ") << res.name
                << std::string(width - res.name.size() + 2, ' ') << res.detail
                << '\n';
      all_pass = all_pass && res.pass;
    }
    std::cout << (all_pass ? "all checks passed" : "checks FAILED") << '\n';
    return all_pass ? 0 : 1;
  });
}

}  // namespace pdhp

#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdhp/experiment.hpp"
#include "pdhp/testhooks.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Probabilistic adaptive-critic controller design for nonlinear "
      "stochastic plants: identify a Gaussian forward model, train critic "
      "and action RBF networks, and evaluate closed-loop regulation."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string plot_path;
  std::string method = "prob";
  std::vector<std::string> archives;
  std::optional<double> x0;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> checks;
  bool inject_sign_fault = false;

  CLI::App* identify =
      app.add_subcommand("identify", "fit the forward model from plant data");
  identify->add_option("--config", config_path, "experiment config file")
      ->required();
  identify->add_option("--out", out_path, "output model archive")->required();

  CLI::App* train = app.add_subcommand(
      "train", "train the critic and action networks into an archive");
  train->add_option("--config", config_path,
                    "config file (default: the archive's snapshot)");
  train->add_option("--archive", archives, "model archive to update")
      ->required()
      ->expected(1);
  train->add_option("--method", method, "prob or dhp")
      ->check(CLI::IsMember({"prob", "dhp"}));

  CLI::App* simulate =
      app.add_subcommand("simulate", "closed-loop rollout on the true plant");
  simulate->add_option("--archive", archives, "trained model archive")
      ->required()
      ->expected(1);
  simulate->add_option("--method", method, "prob or dhp")
      ->check(CLI::IsMember({"prob", "dhp"}));
  simulate->add_option("--x0", x0, "initial state");
  simulate->add_option("--steps", steps, "rollout length");
  simulate->add_option("--seed", seed, "noise seed");
  simulate->add_option("--out", out_path, "trajectory csv")->required();
  simulate->add_option("--plot", plot_path, "optional svg line chart");

  CLI::App* compare = app.add_subcommand(
      "compare", "paired rollouts of both methods under identical noise");
  compare
      ->add_option("--archive", archives,
                   "two archives: probabilistic first, then dhp")
      ->required()
      ->expected(2);
  compare->add_option("--x0", x0, "initial state");
  compare->add_option("--steps", steps, "rollout length");
  compare->add_option("--seeds", seeds, "noise seeds (default: config list)");
  compare->add_option("--out", out_path, "summary csv")->required();
  compare->add_option("--plot", plot_path, "optional svg of the first seed");

  CLI::App* verify =
      app.add_subcommand("verify", "run the numerical self-check table");
  verify->add_option("--config", config_path,
                     "config file (default: built-in benchmark defaults)");
  verify->add_option("--check", checks, "run only the named checks");
  verify
      ->add_flag("--inject-sign-fault", inject_sign_fault,
                 "corrupt the completing-the-square sign (self-test hook)")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (identify->parsed()) return pdhp::cmd_identify(config_path, out_path);
  if (train->parsed())
    return pdhp::cmd_train(config_path, archives.at(0), method);
  if (simulate->parsed())
    return pdhp::cmd_simulate(archives.at(0), method, x0, steps, seed,
                              out_path, plot_path);
  if (compare->parsed())
    return pdhp::cmd_compare(archives.at(0), archives.at(1), x0, steps, seeds,
                             out_path, plot_path);
  if (verify->parsed()) {
    pdhp::testhooks::corrupt_complete_square_sign = inject_sign_fault;
    return pdhp::cmd_verify(config_path, checks);
  }
  return 2;
}

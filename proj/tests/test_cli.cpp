#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pdhp/archive.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = PDHP_CLI_PATH;

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / "pdhp_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args, bool quiet = false) {
  std::string cmd = kCli + " " + args;
  if (quiet) cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string small_config(const Workspace& ws) {
  const std::string path = ws.path("small.cfg");
  write_file(path,
             "seed=5\n"
             "sysid.samples=400\n"
             "sysid.holdout_samples=100\n"
             "train.states=40\n"
             "train.cycles=1\n"
             "train.scg_max_iter=4000\n"
             "train.log_csv=" + ws.path("training_log.csv") + "\n"
             "eval.steps=12\n"
             "eval.seeds=1,2,3\n");
  return path;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("cli end to end") {
  Workspace ws;
  const std::string cfg = small_config(ws);
  const std::string archive = ws.path("model.arch");

  SUBCASE("missing config file exits with the usage code") {
    CHECK(run("identify --config " + ws.path("nope.cfg") + " --out " + archive,
              true) == 2);
  }

  SUBCASE("bad flags exit with the usage code") {
    CHECK(run("identify --config", true) == 2);
    CHECK(run("frobnicate", true) == 2);
    CHECK(run("verify --check not-a-check", true) == 2);
  }

  SUBCASE("pipeline, determinism, and outputs") {
    REQUIRE(run("identify --config " + cfg + " --out " + archive, true) == 0);
    REQUIRE(fs::exists(archive));
    const std::string archive_bytes = slurp(archive);

    // Re-running identify reproduces the archive byte for byte.
    const std::string archive2 = ws.path("model2.arch");
    REQUIRE(run("identify --config " + cfg + " --out " + archive2, true) == 0);
    CHECK(slurp(archive2) == archive_bytes);

    // Training with zero cycles leaves a header-only log.
    const std::string cfg0 = ws.path("zero.cfg");
    write_file(cfg0, slurp(cfg) + "train.cycles=0\n");
    const std::string archive0 = ws.path("model0.arch");
    REQUIRE(run("identify --config " + cfg0 + " --out " + archive0, true) == 0);
    REQUIRE(run("train --config " + cfg0 + " --archive " + archive0 +
                    " --method prob",
                true) == 0);
    CHECK(slurp(ws.path("training_log.csv")) ==
          "cycle,phase,iteration,objective,weight_delta\n");

    // Simulating an untrained method is a usage error.
    CHECK(run("simulate --archive " + archive0 + " --method dhp --out " +
                  ws.path("t.csv"),
              true) == 2);

    // Full train of both methods on the small config.
    REQUIRE(run("train --config " + cfg + " --archive " + archive +
                    " --method prob",
                true) == 0);
    const std::string log_bytes = slurp(ws.path("training_log.csv"));
    CHECK(count_lines(log_bytes) > 1);
    // One critic and one action block per cycle.
    {
      std::istringstream rows(log_bytes);
      std::string line, last_key;
      int blocks = 0;
      std::getline(rows, line);  // header
      while (std::getline(rows, line)) {
        const auto c1 = line.find(',');
        const std::string key = line.substr(0, line.find(',', c1 + 1));
        if (key != last_key) {
          ++blocks;
          last_key = key;
        }
      }
      CHECK(blocks == 2);  // train.cycles=1 in the small config
    }
    REQUIRE(run("train --config " + cfg + " --archive " + archive +
                    " --method dhp",
                true) == 0);

    // Train determinism: write into a copy and compare bytes.
    fs::copy_file(archive2, ws.path("model3.arch"));
    REQUIRE(run("train --config " + cfg + " --archive " + ws.path("model3.arch") +
                    " --method prob",
                true) == 0);
    REQUIRE(run("train --config " + cfg + " --archive " + ws.path("model3.arch") +
                    " --method dhp",
                true) == 0);
    CHECK(slurp(ws.path("model3.arch")) == slurp(archive));

    // Simulate: steps=5 gives 6 state rows (plus header).
    const std::string traj = ws.path("traj.csv");
    REQUIRE(run("simulate --archive " + archive +
                    " --method prob --steps 5 --seed 9 --out " + traj,
                true) == 0);
    const std::string traj_bytes = slurp(traj);
    CHECK(count_lines(traj_bytes) == 7);
    CHECK(traj_bytes.rfind("step,x,u,method,seed\n", 0) == 0);

    REQUIRE(run("simulate --archive " + archive +
                    " --method prob --steps 5 --seed 9 --out " +
                    ws.path("traj_again.csv"),
                true) == 0);
    CHECK(slurp(ws.path("traj_again.csv")) == traj_bytes);

    // Compare: zero steps is rejected; normal runs are deterministic.
    CHECK(run("compare --archive " + archive + " --archive " + archive +
                  " --steps 0 --out " + ws.path("cmp.csv"),
              true) == 2);
    REQUIRE(run("compare --archive " + archive + " --archive " + archive +
                    " --out " + ws.path("cmp.csv") + " --plot " +
                    ws.path("cmp.svg"),
                true) == 0);
    const std::string cmp_bytes = slurp(ws.path("cmp.csv"));
    CHECK(cmp_bytes.rfind(
              "seed,method,peak_overshoot,peak_undershoot,settling_step\n",
              0) == 0);
    CHECK(count_lines(cmp_bytes) == 1 + 2 * 3);  // header + 2 methods x 3 seeds
    CHECK(fs::exists(ws.path("cmp.svg")));
    REQUIRE(run("compare --archive " + archive + " --archive " + archive +
                    " --out " + ws.path("cmp2.csv"),
                true) == 0);
    CHECK(slurp(ws.path("cmp2.csv")) == cmp_bytes);

    // When both methods carry the same action net, the per-seed summary
    // rows coincide.
    {
      pdhp::ModelArchive twin = pdhp::load_archive(archive);
      twin.dhp_controller = twin.prob_controller;
      pdhp::save_archive(twin, ws.path("twin.arch"));
      REQUIRE(run("compare --archive " + ws.path("twin.arch") +
                      " --archive " + ws.path("twin.arch") + " --out " +
                      ws.path("twin.csv"),
                  true) == 0);
      std::istringstream rows(slurp(ws.path("twin.csv")));
      std::string header, prob_row, dhp_row;
      std::getline(rows, header);
      while (std::getline(rows, prob_row) && std::getline(rows, dhp_row)) {
        const auto strip_method = [](std::string row) {
          const auto first = row.find(',');
          const auto second = row.find(',', first + 1);
          return row.substr(0, first) + row.substr(second);
        };
        CHECK(strip_method(prob_row) == strip_method(dhp_row));
      }
    }

    // Plot output from simulate.
    REQUIRE(run("simulate --archive " + archive +
                    " --method prob --steps 8 --seed 2 --out " +
                    ws.path("p.csv") + " --plot " + ws.path("p.svg"),
                true) == 0);
    CHECK(fs::exists(ws.path("p.svg")));
    CHECK(slurp(ws.path("p.svg")).rfind("<svg", 0) == 0);
  }

  SUBCASE("identify exports the dataset csv when configured") {
    const std::string cfg_csv = ws.path("csv.cfg");
    write_file(cfg_csv, slurp(cfg) + "sysid.dataset_csv=" +
                            ws.path("dataset.csv") + "\n");
    REQUIRE(run("identify --config " + cfg_csv + " --out " +
                    ws.path("csv.arch"),
                true) == 0);
    const std::string data = slurp(ws.path("dataset.csv"));
    CHECK(data.rfind("x_prev,u,x_next\n", 0) == 0);
    CHECK(count_lines(data) == 401);  // header + sysid.samples rows
  }

  SUBCASE("verify subsets and the injected fault") {
    CHECK(run("verify --check scg", true) == 0);
    CHECK(run("verify --check gaussian-identities", true) == 0);
    CHECK(run("verify --check gaussian-identities --inject-sign-fault",
              true) == 1);
    CHECK(run("verify --config " + cfg, true) == 0);
  }
}

#include "pdhp/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pdhp/textio.hpp"

namespace pdhp {

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) seeds.push_back(parse_uint64(t));
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  return seeds;
}

std::string format_seed_list(const std::vector<std::uint64_t>& seeds) {
  std::ostringstream out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out << ',';
    out << seeds[i];
  }
  return out.str();
}

// One table drives parsing, serialization, and the known-key check.
const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"plant.preset", [](auto& c, const auto& v) { c.plant_preset = v; }},
      {"seed",
       [](auto& c, const auto& v) {
         c.seed = parse_uint64(v);
         c.train.seed = c.seed;
       }},
      {"sysid.samples",
       [](auto& c, const auto& v) { c.sysid_samples = (int)parse_int(v); }},
      {"sysid.holdout_samples",
       [](auto& c, const auto& v) {
         c.sysid_holdout_samples = (int)parse_int(v);
       }},
      {"sysid.h_bases",
       [](auto& c, const auto& v) { c.sysid_h_bases = (int)parse_int(v); }},
      {"sysid.g_bases",
       [](auto& c, const auto& v) { c.sysid_g_bases = (int)parse_int(v); }},
      {"sysid.h_bias",
       [](auto& c, const auto& v) { c.sysid_h_bias = parse_bool(v); }},
      {"sysid.g_bias",
       [](auto& c, const auto& v) { c.sysid_g_bias = parse_bool(v); }},
      {"sysid.width_scale",
       [](auto& c, const auto& v) { c.sysid_width_scale = parse_double(v); }},
      {"sysid.x_low",
       [](auto& c, const auto& v) { c.sysid_x_low = parse_double(v); }},
      {"sysid.x_high",
       [](auto& c, const auto& v) { c.sysid_x_high = parse_double(v); }},
      {"sysid.u_low",
       [](auto& c, const auto& v) { c.sysid_u_low = parse_double(v); }},
      {"sysid.u_high",
       [](auto& c, const auto& v) { c.sysid_u_high = parse_double(v); }},
      {"sysid.dataset_csv",
       [](auto& c, const auto& v) { c.sysid_dataset_csv = v; }},
      {"train.states",
       [](auto& c, const auto& v) { c.train.num_states = (int)parse_int(v); }},
      {"train.state_low",
       [](auto& c, const auto& v) { c.train.state_low = parse_double(v); }},
      {"train.state_high",
       [](auto& c, const auto& v) { c.train.state_high = parse_double(v); }},
      {"train.cycles",
       [](auto& c, const auto& v) { c.train.cycles = (int)parse_int(v); }},
      {"train.scg_max_iter",
       [](auto& c, const auto& v) {
         c.train.scg_max_iter = (int)parse_int(v);
       }},
      {"train.tol_objective",
       [](auto& c, const auto& v) { c.train.tol_objective = parse_double(v); }},
      {"train.tol_weights",
       [](auto& c, const auto& v) { c.train.tol_weights = parse_double(v); }},
      {"train.action_bases",
       [](auto& c, const auto& v) {
         c.train.action_bases = (int)parse_int(v);
       }},
      {"train.action_bias",
       [](auto& c, const auto& v) { c.train.action_bias = parse_bool(v); }},
      {"train.critic_bases",
       [](auto& c, const auto& v) {
         c.train.critic_bases = (int)parse_int(v);
       }},
      {"train.critic_bias",
       [](auto& c, const auto& v) { c.train.critic_bias = parse_bool(v); }},
      {"train.width_scale",
       [](auto& c, const auto& v) { c.train.width_scale = parse_double(v); }},
      {"train.critic_width_scale",
       [](auto& c, const auto& v) {
         c.train.critic_width_scale = parse_double(v);
       }},
      {"train.check_gradients",
       [](auto& c, const auto& v) { c.train.check_gradients = parse_bool(v); }},
      {"train.log_csv", [](auto& c, const auto& v) { c.train_log_csv = v; }},
      {"control.gamma_init",
       [](auto& c, const auto& v) { c.train.gamma_init = parse_double(v); }},
      {"control.solver_tol",
       [](auto& c, const auto& v) { c.train.solve.tol = parse_double(v); }},
      {"control.solver_max_iter",
       [](auto& c, const auto& v) {
         c.train.solve.max_iter = (int)parse_int(v);
       }},
      {"control.solver_damping",
       [](auto& c, const auto& v) { c.train.solve.damping = parse_double(v); }},
      {"eval.x0", [](auto& c, const auto& v) { c.eval_x0 = parse_double(v); }},
      {"eval.steps",
       [](auto& c, const auto& v) { c.eval_steps = (int)parse_int(v); }},
      {"eval.seeds",
       [](auto& c, const auto& v) { c.eval_seeds = parse_seed_list(v); }},
      {"run.parallel",
       [](auto& c, const auto& v) {
         c.parallel = parse_bool(v);
         c.train.exec = c.parallel ? Exec::parallel : Exec::serial;
       }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ", key '" +
                        key + "': " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "plant.preset=" << cfg.plant_preset << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "sysid.samples=" << cfg.sysid_samples << '\n';
  out << "sysid.holdout_samples=" << cfg.sysid_holdout_samples << '\n';
  out << "sysid.h_bases=" << cfg.sysid_h_bases << '\n';
  out << "sysid.g_bases=" << cfg.sysid_g_bases << '\n';
  out << "sysid.h_bias=" << (cfg.sysid_h_bias ? "true" : "false") << '\n';
  out << "sysid.g_bias=" << (cfg.sysid_g_bias ? "true" : "false") << '\n';
  out << "sysid.width_scale=" << format_double(cfg.sysid_width_scale) << '\n';
  out << "sysid.x_low=" << format_double(cfg.sysid_x_low) << '\n';
  out << "sysid.x_high=" << format_double(cfg.sysid_x_high) << '\n';
  out << "sysid.u_low=" << format_double(cfg.sysid_u_low) << '\n';
  out << "sysid.u_high=" << format_double(cfg.sysid_u_high) << '\n';
  out << "sysid.dataset_csv=" << cfg.sysid_dataset_csv << '\n';
  out << "train.states=" << cfg.train.num_states << '\n';
  out << "train.state_low=" << format_double(cfg.train.state_low) << '\n';
  out << "train.state_high=" << format_double(cfg.train.state_high) << '\n';
  out << "train.cycles=" << cfg.train.cycles << '\n';
  out << "train.scg_max_iter=" << cfg.train.scg_max_iter << '\n';
  out << "train.tol_objective=" << format_double(cfg.train.tol_objective)
      << '\n';
  out << "train.tol_weights=" << format_double(cfg.train.tol_weights) << '\n';
  out << "train.action_bases=" << cfg.train.action_bases << '\n';
  out << "train.action_bias=" << (cfg.train.action_bias ? "true" : "false")
      << '\n';
  out << "train.critic_bases=" << cfg.train.critic_bases << '\n';
  out << "train.critic_bias=" << (cfg.train.critic_bias ? "true" : "false")
      << '\n';
  out << "train.width_scale=" << format_double(cfg.train.width_scale) << '\n';
  out << "train.critic_width_scale="
      << format_double(cfg.train.critic_width_scale) << '\n';
  out << "train.check_gradients="
      << (cfg.train.check_gradients ? "true" : "false") << '\n';
  out << "train.log_csv=" << cfg.train_log_csv << '\n';
  out << "control.gamma_init=" << format_double(cfg.train.gamma_init) << '\n';
  out << "control.solver_tol=" << format_double(cfg.train.solve.tol) << '\n';
  out << "control.solver_max_iter=" << cfg.train.solve.max_iter << '\n';
  out << "control.solver_damping=" << format_double(cfg.train.solve.damping)
      << '\n';
  out << "eval.x0=" << format_double(cfg.eval_x0) << '\n';
  out << "eval.steps=" << cfg.eval_steps << '\n';
  out << "eval.seeds=" << format_seed_list(cfg.eval_seeds) << '\n';
  out << "run.parallel=" << (cfg.parallel ? "true" : "false") << '\n';
  return out.str();
}

void validate_config(const ExperimentConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config: ") + what);
  };
  require(cfg.sysid_samples >= 1, "sysid.samples must be >= 1");
  require(cfg.sysid_holdout_samples >= 0,
          "sysid.holdout_samples must be >= 0");
  require(cfg.sysid_h_bases >= 1 && cfg.sysid_g_bases >= 1,
          "sysid bases must be >= 1");
  require(cfg.sysid_width_scale > 0, "sysid.width_scale must be > 0");
  require(cfg.sysid_x_low < cfg.sysid_x_high, "sysid x range is degenerate");
  require(cfg.sysid_u_low < cfg.sysid_u_high, "sysid u range is degenerate");
  require(cfg.train.num_states >= 1, "train.states must be >= 1");
  require(cfg.train.state_low < cfg.train.state_high,
          "train state range is degenerate");
  require(cfg.train.cycles >= 0, "train.cycles must be >= 0");
  require(cfg.train.scg_max_iter >= 1, "train.scg_max_iter must be >= 1");
  require(cfg.train.tol_objective > 0, "train.tol_objective must be > 0");
  require(cfg.train.tol_weights > 0, "train.tol_weights must be > 0");
  require(cfg.train.action_bases >= 1 && cfg.train.critic_bases >= 1,
          "train bases must be >= 1");
  require(cfg.train.width_scale > 0, "train.width_scale must be > 0");
  require(cfg.train.critic_width_scale >= 0,
          "train.critic_width_scale must be >= 0");
  require(cfg.train.gamma_init > 0, "control.gamma_init must be > 0");
  require(cfg.train.solve.tol > 0, "control.solver_tol must be > 0");
  require(cfg.train.solve.max_iter >= 1,
          "control.solver_max_iter must be >= 1");
  require(cfg.train.solve.damping > 0 && cfg.train.solve.damping <= 1,
          "control.solver_damping must be in (0, 1]");
  require(cfg.eval_steps >= 1, "eval.steps must be >= 1");
  require(!cfg.eval_seeds.empty(), "eval.seeds must not be empty");
}

}  // namespace pdhp

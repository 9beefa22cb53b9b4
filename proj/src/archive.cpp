#include "pdhp/archive.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pdhp/gaussian_algebra.hpp"
#include "pdhp/textio.hpp"

namespace pdhp {

namespace {

constexpr const char* kHeader = "pdhp-archive v1";

void emit_matrix(std::ostream& out, const std::string& key, const Matrix& m) {
  out << key << '=' << m.rows() << ' ' << m.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << ' ' << format_double(m(i, j));
  out << '\n';
}

void emit_vector(std::ostream& out, const std::string& key, const Vector& v) {
  out << key << '=' << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out << ' ' << format_double(v[i]);
  out << '\n';
}

void emit_net(std::ostream& out, const std::string& section,
              const RbfNetwork& net) {
  out << '[' << section << "]\n";
  out << "bases=" << net.num_bases() << '\n';
  out << "has_bias=" << (net.has_bias ? "true" : "false") << '\n';
  for (int j = 0; j < net.num_bases(); ++j) {
    emit_vector(out, "center." + std::to_string(j), net.centers[j]);
    emit_matrix(out, "width_precision." + std::to_string(j),
                net.width_precisions[j]);
  }
  emit_matrix(out, "weights", net.weights);
}

// Parsed view: section name -> ordered key/value pairs.
using Section = std::vector<std::pair<std::string, std::string>>;

struct ParsedArchive {
  std::map<std::string, Section> sections;
  std::vector<std::string> order;
};

ParsedArchive parse_sections(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader)
    throw std::runtime_error("archive: missing or unsupported header");
  ParsedArchive parsed;
  std::string current;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '[' && stripped.back() == ']') {
      current = stripped.substr(1, stripped.size() - 2);
      if (parsed.sections.count(current))
        throw std::runtime_error("archive: duplicate section " + current);
      parsed.sections[current] = {};
      parsed.order.push_back(current);
      continue;
    }
    if (current.empty())
      throw std::runtime_error("archive: content before first section");
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("archive: expected key=value, got '" +
                               stripped + "'");
    parsed.sections[current].emplace_back(trim(stripped.substr(0, eq)),
                                          trim(stripped.substr(eq + 1)));
  }
  return parsed;
}

const std::string& find_value(const Section& section, const std::string& key) {
  for (const auto& [k, v] : section)
    if (k == key) return v;
  throw std::runtime_error("archive: missing key " + key);
}

Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("archive: malformed matrix '" + text + "'");
  Matrix m(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> token))
        throw std::runtime_error("archive: truncated matrix");
      m(i, j) = parse_double(token);
    }
  if (in >> token)
    throw std::runtime_error("archive: trailing matrix values");
  return m;
}

Vector parse_vector(const std::string& text) {
  std::istringstream in(text);
  Eigen::Index size = 0;
  if (!(in >> size) || size < 0)
    throw std::runtime_error("archive: malformed vector '" + text + "'");
  Vector v(size);
  std::string token;
  for (Eigen::Index i = 0; i < size; ++i) {
    if (!(in >> token)) throw std::runtime_error("archive: truncated vector");
    v[i] = parse_double(token);
  }
  if (in >> token)
    throw std::runtime_error("archive: trailing vector values");
  return v;
}

RbfNetwork parse_net(const Section& section) {
  RbfNetwork net;
  const int bases = static_cast<int>(parse_int(find_value(section, "bases")));
  net.has_bias = parse_bool(find_value(section, "has_bias"));
  net.centers.reserve(bases);
  net.width_precisions.reserve(bases);
  for (int j = 0; j < bases; ++j) {
    net.centers.push_back(
        parse_vector(find_value(section, "center." + std::to_string(j))));
    net.width_precisions.push_back(parse_matrix(
        find_value(section, "width_precision." + std::to_string(j))));
  }
  net.weights = parse_matrix(find_value(section, "weights"));
  validate(net);
  return net;
}

}  // namespace

std::string archive_to_string(const ModelArchive& archive) {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "[meta]\n";
  out << "plant=" << archive.plant_name << '\n';
  out << "seed=" << archive.seed << '\n';

  out << "[config]\n";
  std::istringstream cfg(archive.config_text);
  std::string line;
  while (std::getline(cfg, line))
    if (!trim(line).empty()) out << line << '\n';

  if (archive.forward) {
    emit_net(out, "forward.h_net", archive.forward->h_net);
    emit_net(out, "forward.g_net", archive.forward->g_net);
    out << "[forward.noise]\n";
    emit_matrix(out, "sigma", archive.forward->sigma);
    out << "dims=" << archive.forward->state_dim << ' '
        << archive.forward->control_dim << '\n';
  }
  if (archive.prob_controller) {
    emit_net(out, "prob.action_net", archive.prob_controller->net);
    out << "[prob.control_noise]\n";
    emit_matrix(out, "gamma", archive.prob_controller->gamma);
    emit_matrix(out, "ideal_gamma", archive.prob_controller->ideal_gamma);
  }
  if (archive.prob_critic)
    emit_net(out, "prob.critic_net", archive.prob_critic->net);
  if (archive.dhp_controller) {
    emit_net(out, "dhp.action_net", archive.dhp_controller->net);
    out << "[dhp.control_noise]\n";
    emit_matrix(out, "gamma", archive.dhp_controller->gamma);
    emit_matrix(out, "ideal_gamma", archive.dhp_controller->ideal_gamma);
  }
  if (archive.dhp_critic)
    emit_net(out, "dhp.critic_net", archive.dhp_critic->net);
  return out.str();
}

ModelArchive archive_from_string(const std::string& text) {
  const ParsedArchive parsed = parse_sections(text);
  ModelArchive archive;

  const auto meta = parsed.sections.find("meta");
  if (meta == parsed.sections.end())
    throw std::runtime_error("archive: missing [meta] section");
  archive.plant_name = find_value(meta->second, "plant");
  archive.seed = parse_uint64(find_value(meta->second, "seed"));

  const auto cfg = parsed.sections.find("config");
  if (cfg == parsed.sections.end())
    throw std::runtime_error("archive: missing [config] section");
  std::ostringstream cfg_text;
  for (const auto& [k, v] : cfg->second) cfg_text << k << '=' << v << '\n';
  archive.config_text = cfg_text.str();

  if (parsed.sections.count("forward.h_net")) {
    ForwardModel model;
    model.h_net = parse_net(parsed.sections.at("forward.h_net"));
    model.g_net = parse_net(parsed.sections.at("forward.g_net"));
    const Section& noise = parsed.sections.at("forward.noise");
    model.sigma = parse_matrix(find_value(noise, "sigma"));
    model.sigma_precision = spd_inverse(model.sigma, "archive sigma");
    std::istringstream dims(find_value(noise, "dims"));
    if (!(dims >> model.state_dim >> model.control_dim))
      throw std::runtime_error("archive: malformed forward dims");
    archive.forward = std::move(model);
  }

  auto load_controller = [&](const char* net_section, const char* noise_section)
      -> std::optional<RandomizedController> {
    if (!parsed.sections.count(net_section)) return std::nullopt;
    RbfNetwork net = parse_net(parsed.sections.at(net_section));
    const Section& noise = parsed.sections.at(noise_section);
    Matrix gamma = parse_matrix(find_value(noise, "gamma"));
    Matrix ideal = parse_matrix(find_value(noise, "ideal_gamma"));
    RandomizedController controller =
        make_controller(std::move(net), std::move(gamma));
    controller.ideal_gamma_precision =
        spd_inverse(ideal, "archive ideal gamma");
    controller.ideal_gamma = std::move(ideal);
    return controller;
  };
  archive.prob_controller =
      load_controller("prob.action_net", "prob.control_noise");
  if (parsed.sections.count("prob.critic_net"))
    archive.prob_critic =
        CriticModel{parse_net(parsed.sections.at("prob.critic_net"))};
  archive.dhp_controller =
      load_controller("dhp.action_net", "dhp.control_noise");
  if (parsed.sections.count("dhp.critic_net"))
    archive.dhp_critic =
        CriticModel{parse_net(parsed.sections.at("dhp.critic_net"))};
  return archive;
}

void save_archive(const ModelArchive& archive, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write archive: " + path);
  out << archive_to_string(archive);
  if (!out) throw std::runtime_error("failed writing archive: " + path);
}

ModelArchive load_archive(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open archive: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return archive_from_string(buffer.str());
}

}  // namespace pdhp

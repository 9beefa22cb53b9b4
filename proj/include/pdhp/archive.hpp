#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pdhp/controller.hpp"
#include "pdhp/critic.hpp"
#include "pdhp/sysid.hpp"

namespace pdhp {

// Versioned sectioned-text container for everything an experiment produces:
// the identified forward model, trained networks per method, the config
// snapshot, and the provenance seed. Numbers are serialized with 17
// significant digits so save/load round-trips bit-exactly.
struct ModelArchive {
  std::string plant_name;
  std::uint64_t seed = 0;
  std::string config_text;

  std::optional<ForwardModel> forward;
  std::optional<RandomizedController> prob_controller;
  std::optional<CriticModel> prob_critic;
  std::optional<RandomizedController> dhp_controller;
  std::optional<CriticModel> dhp_critic;
};

std::string archive_to_string(const ModelArchive& archive);
ModelArchive archive_from_string(const std::string& text);

void save_archive(const ModelArchive& archive, const std::string& path);
ModelArchive load_archive(const std::string& path);

}  // namespace pdhp

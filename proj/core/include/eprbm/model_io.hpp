#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include <nlohmann/json.hpp>

#include "eprbm/epr.hpp"
#include "eprbm/rbm.hpp"
#include "eprbm/trainer.hpp"

namespace eprbm {

/// Contents of a model JSON file. Provenance fields are null for hand-made
/// fixtures such as the published 4x4 machine.
struct ModelFile {
  RbmModel model;
  std::optional<TrainerConfig> trainer;
  std::optional<std::uint64_t> dataset_seed;
  std::optional<DetectorAngles> angles;
};

nlohmann::json trainer_config_to_json(const TrainerConfig& config);

/// Missing keys keep their defaults; unknown keys are rejected.
TrainerConfig trainer_config_from_json(const nlohmann::json& j);

nlohmann::json model_file_to_json(const ModelFile& file);
ModelFile model_file_from_json(const nlohmann::json& j);

void write_model_json(const ModelFile& file, std::ostream& out);
ModelFile read_model_json(std::istream& in);
ModelFile load_model_file(const std::filesystem::path& path);

}  // namespace eprbm

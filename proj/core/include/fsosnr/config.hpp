#pragma once

#include "fsosnr/scenario.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

namespace fsosnr {

/// Overlays `j` onto `base`. Unknown keys and wrong types raise ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& j, ScenarioConfig base = {});
nlohmann::json config_to_json(const ScenarioConfig& cfg);

ScenarioConfig load_config(const std::filesystem::path& path);

} // namespace fsosnr

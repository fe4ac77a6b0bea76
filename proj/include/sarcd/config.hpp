#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sarcd/pipeline.hpp"
#include "sarcd/synth.hpp"

namespace sarcd {

/// Parses a JSON object; omitted fields keep their defaults, unknown fields
/// raise ParameterError.
PipelineConfig parse_pipeline_config(std::string_view json);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string pipeline_config_json(const PipelineConfig& config);

SceneSpec parse_scene_spec(std::string_view json);
SceneSpec load_scene_spec(const std::filesystem::path& path);
std::string scene_spec_json(const SceneSpec& spec);

}  // namespace sarcd

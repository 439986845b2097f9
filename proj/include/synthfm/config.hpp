#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthfm/bezier.hpp"
#include "synthfm/boundary.hpp"
#include "synthfm/noise.hpp"
#include "synthfm/prompts.hpp"
#include "synthfm/scene.hpp"

namespace synthfm {

struct PromptDefaults {
    /// One configuration is drawn uniformly per sample; empty disables prompts.
    std::vector<PromptConfig> configs = kStandardPromptConfigs;
    /// Negative band width in dilation steps; 0 selects default_band_dilation().
    int band_dilation = 0;

    friend bool operator==(const PromptDefaults&, const PromptDefaults&) = default;
};

/// Every knob of the generator. Together with master_seed it fixes every
/// generated byte.
struct GenConfig {
    int image_width = 1024;
    int image_height = 1024;
    std::uint64_t epoch_size = 10000;
    /// Probability that a sample comes from the boundary-aware generator.
    double module_mix = 0.5;
    std::uint64_t master_seed = 0;

    ShapeSamplingSpec shape;
    SceneParams scene;
    NoiseStackSpec noise;
    BoundarySpec boundary;
    PromptDefaults prompts;

    friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

/// Throws ConfigError naming the offending section, field and bound.
void validate(const GenConfig& cfg);

/// Builds a config from a JSON document: absent fields take defaults,
/// unknown keys are rejected by name, and the result is validated.
GenConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GenConfig& cfg);

/// Parses a JSON config file. An empty file yields the defaults.
GenConfig load_config(const std::filesystem::path& path);

/// Compact JSON with sorted keys; equal configs serialize identically.
std::string canonical_config(const GenConfig& cfg);

/// SHA-256 hex of canonical_config().
std::string config_hash(const GenConfig& cfg);

/// Config for the validation stream: same parameters, master seed moved to a
/// fixed offset so its samples never coincide with the training stream.
GenConfig validation_config(const GenConfig& cfg);

} // namespace synthfm

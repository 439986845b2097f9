#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthfm/config.hpp"
#include "synthfm/image.hpp"
#include "synthfm/prompts.hpp"
#include "synthfm/timing.hpp"

namespace synthfm {

enum class ModuleKind { shape, boundary };

const char* to_string(ModuleKind kind);
ModuleKind module_kind_from_string(const std::string& name);

/// One training sample plus everything needed to regenerate it.
struct SampleRecord {
    std::uint64_t sample_index = 0;
    std::uint64_t seed = 0;
    ModuleKind module_kind = ModuleKind::shape;
    ScalarImage image;
    std::vector<BinaryMask> instance_masks;
    std::size_t target_index = 0;
    std::optional<PromptSet> prompts;
    /// Generation parameters (JSON object), written to the per-sample sidecar.
    nlohmann::json meta;
};

/// Per-sample seed: the SplitMix64 finalizer applied to
/// master_seed + 0x9E3779B97F4A7C15 * (sample_index + 1) (mod 2^64).
/// Injective in sample_index for a fixed master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index);

/// Failure while generating one sample; carries its coordinates.
class SampleError : public Error {
public:
    SampleError(const std::string& what, std::uint64_t master_seed, std::uint64_t sample_index)
        : Error("sample " + std::to_string(sample_index) + " (master seed " + std::to_string(master_seed) +
                "): " + what),
          master_seed_(master_seed), sample_index_(sample_index)
    {
    }
    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t sample_index() const noexcept { return sample_index_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t sample_index_;
};

/// Pure function of (cfg, sample_index).
SampleRecord generate_sample(const GenConfig& cfg, std::uint64_t sample_index, StageTimes* times = nullptr);

/// Rebuilds a record from its sidecar metadata. Throws ConfigError when the
/// metadata was produced under a different config.
SampleRecord regenerate(const GenConfig& cfg, const nlohmann::json& meta);

nlohmann::json to_json(const PromptSet& prompts);
PromptSet prompts_from_json(const nlohmann::json& doc);

} // namespace synthfm

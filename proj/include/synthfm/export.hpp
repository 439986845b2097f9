#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "synthfm/config.hpp"
#include "synthfm/sample.hpp"

namespace synthfm {

struct ManifestEntry {
    std::string name;
    std::string sha256;
};

struct ShardManifest {
    std::string config_hash;
    std::uint64_t start = 0;
    std::uint64_t end = 0; ///< exclusive
    std::vector<ManifestEntry> files;
    std::filesystem::path path;
};

class ConfigMismatchError : public Error {
public:
    using Error::Error;
};

/// File name stem of a sample: zero-padded 8-digit index.
std::string sample_stem(std::uint64_t index);

/// Writes {index:08}.img.png (16-bit), {index:08}.mask{k:02}.png (8-bit 0/255)
/// and {index:08}.meta.json for one record; returns the written file names.
std::vector<std::string> write_sample_files(const SampleRecord& record, const std::filesystem::path& out_dir);

/// Generates and writes indices [start, start + count) plus manifest.json.
/// Refuses (ConfigMismatchError) to overwrite a manifest from another config.
ShardManifest export_shard(const GenConfig& cfg, std::uint64_t start, std::uint64_t count,
                           const std::filesystem::path& out_dir, int threads = 1);

ShardManifest read_manifest(const std::filesystem::path& out_dir);

/// Re-hashes every manifest file; returns the names whose checksum differs or that are missing.
std::vector<std::string> verify_shard(const std::filesystem::path& out_dir);

} // namespace synthfm

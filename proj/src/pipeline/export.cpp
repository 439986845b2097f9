#include "synthfm/export.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "synthfm/checksum.hpp"
#include "synthfm/png_io.hpp"

namespace synthfm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out)
        throw IoError("write failed for " + path.string());
}

std::string mask_name(std::uint64_t index, std::size_t k)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, ".mask%02zu.png", k);
    return sample_stem(index) + buf;
}

json manifest_json(const GenConfig& cfg, std::uint64_t start, std::uint64_t end,
                   const std::vector<ManifestEntry>& files)
{
    json list = json::array();
    for (const ManifestEntry& f : files)
        list.push_back({{"name", f.name}, {"sha256", f.sha256}});
    return {
        {"config_hash", config_hash(cfg)},
        {"config", to_json(cfg)},
        {"index_range", {start, end}},
        {"sample_count", end - start},
        {"files", list},
    };
}

} // namespace

std::string sample_stem(std::uint64_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08llu", static_cast<unsigned long long>(index));
    return buf;
}

std::vector<std::string> write_sample_files(const SampleRecord& record, const fs::path& out_dir)
{
    std::vector<std::string> names;
    const std::string stem = sample_stem(record.sample_index);

    names.push_back(stem + ".img.png");
    const auto q = quantize16(record.image);
    write_png_gray16(out_dir / names.back(), record.image.width(), record.image.height(), q);

    for (std::size_t k = 0; k < record.instance_masks.size(); ++k) {
        names.push_back(mask_name(record.sample_index, k));
        write_mask_png(out_dir / names.back(), record.instance_masks[k]);
    }

    names.push_back(stem + ".meta.json");
    write_text(out_dir / names.back(), record.meta.dump(2) + "\n");
    return names;
}

ShardManifest export_shard(const GenConfig& cfg, std::uint64_t start, std::uint64_t count, const fs::path& out_dir,
                           int threads)
{
    if (count == 0)
        throw DomainError("export_shard: empty index range");
    if (start + count < start)
        throw DomainError("export_shard: index range overflows");
    const std::string hash = config_hash(cfg);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        throw IoError("cannot create output directory " + out_dir.string());

    if (fs::exists(out_dir / "manifest.json")) {
        const ShardManifest old = read_manifest(out_dir);
        if (old.config_hash != hash)
            throw ConfigMismatchError("manifest in " + out_dir.string() + " belongs to config " + old.config_hash +
                                      ", refusing to mix with " + hash);
    }

    std::vector<std::vector<ManifestEntry>> per_sample(count);
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load()) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                const SampleRecord rec = generate_sample(cfg, start + i);
                for (const std::string& name : write_sample_files(rec, out_dir))
                    per_sample[i].push_back({name, sha256_file(out_dir / name)});
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);

    ShardManifest manifest;
    manifest.config_hash = hash;
    manifest.start = start;
    manifest.end = start + count;
    for (auto& files : per_sample)
        for (auto& f : files)
            manifest.files.push_back(std::move(f));
    manifest.path = out_dir / "manifest.json";

    const fs::path tmp = out_dir / "manifest.json.tmp";
    write_text(tmp, manifest_json(cfg, manifest.start, manifest.end, manifest.files).dump(2) + "\n");
    fs::rename(tmp, manifest.path, ec);
    if (ec)
        throw IoError("cannot move manifest into place: " + ec.message());
    return manifest;
}

ShardManifest read_manifest(const fs::path& out_dir)
{
    const fs::path path = out_dir / "manifest.json";
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    ShardManifest m;
    m.path = path;
    try {
        const json doc = json::parse(in);
        m.config_hash = doc.at("config_hash").get<std::string>();
        m.start = doc.at("index_range").at(0).get<std::uint64_t>();
        m.end = doc.at("index_range").at(1).get<std::uint64_t>();
        for (const auto& f : doc.at("files"))
            m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>()});
    } catch (const json::exception& e) {
        throw IoError("malformed manifest " + path.string() + ": " + e.what());
    }
    return m;
}

std::vector<std::string> verify_shard(const fs::path& out_dir)
{
    const ShardManifest m = read_manifest(out_dir);
    std::vector<std::string> bad;
    for (const ManifestEntry& f : m.files) {
        const fs::path p = out_dir / f.name;
        if (!fs::exists(p) || sha256_file(p) != f.sha256)
            bad.push_back(f.name);
    }
    return bad;
}

} // namespace synthfm

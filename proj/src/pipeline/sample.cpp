#include "synthfm/sample.hpp"

#include "synthfm/boundary.hpp"
#include "synthfm/scene.hpp"

namespace synthfm {
namespace {

using nlohmann::json;

json noise_json(const std::vector<NoiseSpec>& applied)
{
    json out = json::array();
    for (const NoiseSpec& spec : applied) {
        json entry{{"kind", to_string(kind_of(spec))}};
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, PoissonNoise>) {
                    entry["scale"] = n.scale;
                } else if constexpr (std::is_same_v<T, PerlinNoise>) {
                    entry["base_frequency"] = n.params.base_frequency;
                    entry["octaves"] = n.params.octaves;
                    entry["persistence"] = n.params.persistence;
                    entry["amplitude"] = n.params.amplitude;
                    entry["seed"] = n.params.seed;
                } else {
                    entry["sigma"] = n.sigma;
                }
            },
            spec);
        out.push_back(std::move(entry));
    }
    return out;
}

json pixels_json(const std::vector<Pixel>& pts)
{
    json out = json::array();
    for (const Pixel& p : pts)
        out.push_back({p.x, p.y});
    return out;
}

std::vector<Pixel> pixels_from_json(const json& doc)
{
    std::vector<Pixel> out;
    for (const auto& p : doc)
        out.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    return out;
}

SampleRecord generate_with_seed(const GenConfig& cfg, std::uint64_t sample_index, std::uint64_t seed,
                                StageTimes* times)
{
    const int w = cfg.image_width;
    const int h = cfg.image_height;
    Rng rng(seed);

    SampleRecord rec;
    rec.sample_index = sample_index;
    rec.seed = seed;
    rec.module_kind = rng.bernoulli(cfg.module_mix) ? ModuleKind::boundary : ModuleKind::shape;

    json scene_meta;
    if (rec.module_kind == ModuleKind::shape) {
        ShapeScene scene = compose_shape_scene(rng, cfg.scene, cfg.shape, cfg.noise, w, h, times);
        json instances = json::array();
        for (const ShapeInstance& inst : scene.instances)
            instances.push_back({{"m", inst.m}, {"r", inst.r}, {"offset", inst.offset}});
        scene_meta = {
            {"p", scene.p},
            {"phantom", scene.phantom},
            {"phantom_center", {scene.phantom_center.x, scene.phantom_center.y}},
            {"phantom_radius", scene.phantom_radius},
            {"drawn_shapes", scene.drawn_shapes},
            {"instances", instances},
            {"noise", noise_json(scene.noise)},
        };
        rec.image = std::move(scene.image);
        rec.instance_masks = std::move(scene.instance_masks);
    } else {
        BoundaryScene scene = compose_boundary_scene(rng, cfg.boundary, cfg.noise, w, h, times);
        scene_meta = {
            {"cluster_count", scene.cluster_count},
            {"selected_clusters", scene.selected},
            {"erosion_iterations", scene.iterations},
            {"limit1", scene.limit1},
            {"limit2", scene.limit2},
            {"outlier_fraction", scene.outlier_fraction},
            {"outlier_count", scene.outlier_count},
            {"background_shift", scene.shift},
            {"background_value", scene.background_value},
            {"noise", noise_json(scene.noise)},
        };
        rec.image = std::move(scene.image);
        rec.instance_masks = std::move(scene.instance_masks);
    }
    if (rec.instance_masks.empty())
        throw GenerationError("scene produced no instances", seed);

    {
        ScopedStage stage(times, "prompts");
        rec.target_index = rng.index(rec.instance_masks.size());
        if (!cfg.prompts.configs.empty()) {
            const PromptConfig pc = cfg.prompts.configs[rng.index(cfg.prompts.configs.size())];
            const int band = cfg.prompts.band_dilation > 0 ? cfg.prompts.band_dilation : default_band_dilation(w, h);
            rec.prompts = sample_prompts(rec.instance_masks[rec.target_index], pc, rng, band);
        }
    }

    rec.meta = {
        {"sample_index", sample_index},
        {"master_seed", cfg.master_seed},
        {"seed", seed},
        {"config_hash", config_hash(cfg)},
        {"module_kind", to_string(rec.module_kind)},
        {"width", w},
        {"height", h},
        {"instance_count", rec.instance_masks.size()},
        {"target_index", rec.target_index},
        {"prompts", rec.prompts ? to_json(*rec.prompts) : json(nullptr)},
        {"scene", scene_meta},
    };
    return rec;
}

} // namespace

const char* to_string(ModuleKind kind)
{
    return kind == ModuleKind::shape ? "shape" : "boundary";
}

ModuleKind module_kind_from_string(const std::string& name)
{
    if (name == "shape")
        return ModuleKind::shape;
    if (name == "boundary")
        return ModuleKind::boundary;
    throw DomainError("unknown module kind '" + name + "'");
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index)
{
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (sample_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SampleRecord generate_sample(const GenConfig& cfg, std::uint64_t sample_index, StageTimes* times)
{
    try {
        return generate_with_seed(cfg, sample_index, derive_seed(cfg.master_seed, sample_index), times);
    } catch (const SampleError&) {
        throw;
    } catch (const Error& e) {
        throw SampleError(e.what(), cfg.master_seed, sample_index);
    }
}

SampleRecord regenerate(const GenConfig& cfg, const json& meta)
{
    if (meta.at("config_hash").get<std::string>() != config_hash(cfg))
        throw ConfigError("sample metadata was produced under a different config");
    const auto index = meta.at("sample_index").get<std::uint64_t>();
    const auto seed = meta.at("seed").get<std::uint64_t>();
    try {
        return generate_with_seed(cfg, index, seed, nullptr);
    } catch (const Error& e) {
        throw SampleError(e.what(), cfg.master_seed, index);
    }
}

json to_json(const PromptSet& prompts)
{
    return {
        {"config", {prompts.config.n_pos, prompts.config.n_neg}},
        {"band_dilation", prompts.band_dilation},
        {"positives", pixels_json(prompts.positives)},
        {"negatives", pixels_json(prompts.negatives)},
    };
}

PromptSet prompts_from_json(const json& doc)
{
    PromptSet p;
    p.config = {doc.at("config").at(0).get<int>(), doc.at("config").at(1).get<int>()};
    p.band_dilation = doc.at("band_dilation").get<int>();
    p.positives = pixels_from_json(doc.at("positives"));
    p.negatives = pixels_from_json(doc.at("negatives"));
    return p;
}

} // namespace synthfm

#include "synthfm/scene.hpp"

#include <algorithm>
#include <cmath>

namespace synthfm {

void validate(const SceneParams& params)
{
    const auto fail = [](const std::string& msg) { throw ConfigError("SceneParams." + msg); };
    if (params.shape_count.lo < 1 || params.shape_count.lo > params.shape_count.hi)
        fail("shape_count_range must satisfy 1 <= lo <= hi");
    if (!(params.r.lo <= params.r.hi))
        fail("r_range must be ordered");
    if (!(params.phantom_probability >= 0.0 && params.phantom_probability <= 1.0))
        fail("phantom_probability must lie in [0, 1]");
    if (!(params.phantom_radius.lo > 0.0) || !(params.phantom_radius.hi <= 0.5) ||
        params.phantom_radius.lo > params.phantom_radius.hi)
        fail("phantom_radius_range must satisfy 0 < lo <= hi <= 0.5");
    if (!(params.phantom_jitter >= 0.0 && params.phantom_jitter <= 0.5))
        fail("phantom_jitter must lie in [0, 0.5]");
}

Background make_background(Rng& rng, const SceneParams& params, int width, int height)
{
    Background bg;
    bg.image = ScalarImage(width, height);
    if (!rng.bernoulli(params.phantom_probability))
        return bg;

    bg.phantom = true;
    bg.p = rng.uniform();
    bg.radius = rng.uniform(params.phantom_radius.lo, params.phantom_radius.hi) * std::min(width, height);
    bg.center.x = 0.5 * width + rng.uniform(-params.phantom_jitter, params.phantom_jitter) * width;
    bg.center.y = 0.5 * height + rng.uniform(-params.phantom_jitter, params.phantom_jitter) * height;

    const float value = static_cast<float>(bg.p);
    const double r2 = bg.radius * bg.radius;
    for (int y = 0; y < height; ++y) {
        const double dy = y + 0.5 - bg.center.y;
        for (int x = 0; x < width; ++x) {
            const double dx = x + 0.5 - bg.center.x;
            if (dx * dx + dy * dy <= r2)
                bg.image(x, y) = value;
        }
    }
    return bg;
}

double contrast_offset(double p, int m, double r)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("contrast_offset: p must lie in [0, 1]");
    if (m < 1)
        throw DomainError("contrast_offset: shape index m is 1-based");
    return (1.0 - p) * (m * r);
}

ShapeScene compose_shape_scene(Rng& rng, const SceneParams& params, const ShapeSamplingSpec& shape_spec,
                               const NoiseStackSpec& noise, int width, int height, StageTimes* times)
{
    ShapeScene scene;
    {
        ScopedStage stage(times, "background");
        Background bg = make_background(rng, params, width, height);
        scene.image = std::move(bg.image);
        scene.p = bg.p;
        scene.phantom = bg.phantom;
        scene.phantom_center = bg.center;
        scene.phantom_radius = bg.radius;
    }
    scene.local_background = scene.image;

    std::vector<ShapeInstance> drawn;
    LabelMap owner(width, height);
    {
        ScopedStage stage(times, "shapes");
        scene.drawn_shapes = rng.uniform_int(params.shape_count.lo, params.shape_count.hi);
        for (int m = 1; m <= scene.drawn_shapes; ++m) {
            const BinaryMask mask = sample_closed_shape(rng, shape_spec, width, height);
            const double r = rng.uniform(params.r.lo, params.r.hi);
            const double offset = contrast_offset(scene.p, m, r);
            drawn.push_back({m, r, offset});

            auto src = mask.pixels();
            auto img = scene.image.pixels();
            auto local = scene.local_background.pixels();
            auto own = owner.pixels();
            for (std::size_t i = 0; i < src.size(); ++i) {
                if (!src[i])
                    continue;
                local[i] = img[i];
                img[i] = static_cast<float>(std::clamp(static_cast<double>(img[i]) + offset, 0.0, 1.0));
                own[i] = m;
            }
        }
    }

    for (const ShapeInstance& inst : drawn) {
        BinaryMask mask = mask_of_label(owner, inst.m);
        if (count(mask) == 0)
            continue;
        scene.instance_masks.push_back(std::move(mask));
        scene.instances.push_back(inst);
    }

    {
        ScopedStage stage(times, "noise");
        NoiseStackResult noisy = apply_noise_stack(scene.image, noise, rng);
        scene.image = std::move(noisy.image);
        scene.noise = std::move(noisy.applied);
        clamp01(scene.image);
    }
    return scene;
}

} // namespace synthfm

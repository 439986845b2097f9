#include "synthfm/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "synthfm/blur.hpp"
#include "synthfm/geometry.hpp"
#include "synthfm/kernels.hpp"

namespace synthfm {
namespace {

constexpr int kLabelRetries = 32;

ScalarImage upsample_bilinear(const std::vector<float>& lattice, int grid, int width, int height)
{
    ScalarImage out(width, height);
    std::vector<int> x0(static_cast<std::size_t>(width));
    std::vector<float> fx(static_cast<std::size_t>(width));
    for (int x = 0; x < width; ++x) {
        const double g = std::clamp((x + 0.5) * grid / width - 0.5, 0.0, static_cast<double>(grid - 1));
        const int i = std::min(static_cast<int>(g), grid - 2 < 0 ? 0 : grid - 2);
        x0[static_cast<std::size_t>(x)] = i;
        fx[static_cast<std::size_t>(x)] = static_cast<float>(g - i);
    }
    const auto at = [&](int gx, int gy) {
        return lattice[static_cast<std::size_t>(std::min(gy, grid - 1) * grid + std::min(gx, grid - 1))];
    };
    for (int y = 0; y < height; ++y) {
        const double g = std::clamp((y + 0.5) * grid / height - 0.5, 0.0, static_cast<double>(grid - 1));
        const int j = std::min(static_cast<int>(g), grid - 2 < 0 ? 0 : grid - 2);
        const float fy = static_cast<float>(g - j);
        auto row = out.row(y);
        for (int x = 0; x < width; ++x) {
            const int i = x0[static_cast<std::size_t>(x)];
            const float t = fx[static_cast<std::size_t>(x)];
            const float top = at(i, j) + t * (at(i + 1, j) - at(i, j));
            const float bottom = at(i, j + 1) + t * (at(i + 1, j + 1) - at(i, j + 1));
            row[static_cast<std::size_t>(x)] = top + fy * (bottom - top);
        }
    }
    return out;
}

std::vector<float> white_lattice(Rng& rng, int grid)
{
    std::normal_distribution<float> normal(0.0f, 1.0f);
    std::vector<float> lattice(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
    for (float& v : lattice)
        v = normal(rng.engine());
    return lattice;
}

struct Box {
    int x0, y0, x1, y1; // inclusive
};

} // namespace

void validate(const LabelMapSpec& spec)
{
    const auto fail = [](const std::string& msg) { throw ConfigError("LabelMapSpec." + msg); };
    if (spec.cluster_count.lo < 2 || spec.cluster_count.hi > 64 || spec.cluster_count.lo > spec.cluster_count.hi)
        fail("cluster_count_range must satisfy 2 <= lo <= hi <= 64");
    if (!(spec.field_smoothing_sigma >= 0.0))
        fail("field_smoothing_sigma must be >= 0");
    if (spec.low_res_grid < 2)
        fail("low_res_grid must be >= 2");
}

void validate(const CarveSpec& spec)
{
    const auto fail = [](const std::string& msg) { throw ConfigError("CarveSpec." + msg); };
    if (!(spec.selection_probability > 0.0 && spec.selection_probability <= 1.0))
        fail("selection_probability must lie in (0, 1]");
    if (spec.iterations.lo < 0 || spec.iterations.lo > spec.iterations.hi)
        fail("iteration_range must satisfy 0 <= lo <= hi");
}

void validate(const CanvasSpec& spec)
{
    const auto fail = [](const std::string& msg) { throw ConfigError("CanvasSpec." + msg); };
    if (!(spec.limit1.lo >= 0.1) || !(spec.limit1.hi <= 0.9) || spec.limit1.lo > spec.limit1.hi)
        fail("limit1_range must satisfy 0.1 <= lo <= hi <= 0.9, got [" + std::to_string(spec.limit1.lo) + ", " +
             std::to_string(spec.limit1.hi) + "]");
    if (!(spec.delta.lo >= 0.0) || !(spec.delta.hi <= 1.0) || spec.delta.lo > spec.delta.hi)
        fail("delta_range must satisfy 0 <= lo <= hi <= 1");
    if (!(spec.outlier_fraction.lo >= 0.0) || !(spec.outlier_fraction.hi <= 0.05) ||
        spec.outlier_fraction.lo > spec.outlier_fraction.hi)
        fail("outlier_fraction_range must satisfy 0 <= lo <= hi <= 0.05");
    if (!(spec.background_shift.lo >= -1.0) || !(spec.background_shift.hi <= 1.0) ||
        spec.background_shift.lo > spec.background_shift.hi)
        fail("background_shift_range must be an ordered range within [-1, 1]");
}

LabelMap synth_label_map(Rng& rng, const LabelMapSpec& spec, int width, int height)
{
    const int k = rng.uniform_int(spec.cluster_count.lo, spec.cluster_count.hi);
    const double sigma =
        spec.field_smoothing_sigma > 0.0 ? spec.field_smoothing_sigma : std::min(width, height) / 64.0;
    const int grid = spec.low_res_grid;
    const auto& kern = kernels::active();

    std::vector<std::vector<float>> lattices;
    for (int i = 0; i < k; ++i)
        lattices.push_back(white_lattice(rng, grid));

    for (int attempt = 0; attempt < kLabelRetries; ++attempt) {
        LabelMap labels(width, height);
        std::vector<float> best(labels.size(), -std::numeric_limits<float>::infinity());
        for (int i = 0; i < k; ++i) {
            const ScalarImage field = gaussian_blur(upsample_bilinear(lattices[static_cast<std::size_t>(i)], grid,
                                                                      width, height),
                                                    sigma);
            kern.argmax_update(field.data(), best.data(), labels.data(), i + 1, labels.size());
        }

        std::vector<bool> present(static_cast<std::size_t>(k) + 1, false);
        for (std::int32_t v : labels.pixels())
            present[static_cast<std::size_t>(v)] = true;
        bool complete = true;
        for (int i = 1; i <= k; ++i) {
            if (!present[static_cast<std::size_t>(i)]) {
                complete = false;
                lattices[static_cast<std::size_t>(i - 1)] = white_lattice(rng, grid);
            }
        }
        if (complete)
            return labels;
    }
    throw GenerationError("label map kept missing clusters after " + std::to_string(kLabelRetries) + " attempts",
                          rng.seed());
}

CarveResult carve_boundaries(const LabelMap& labels, Rng& rng, const CarveSpec& spec)
{
    const int w = labels.width();
    const int h = labels.height();
    const std::int32_t k = max_label(labels);

    std::vector<Box> boxes(static_cast<std::size_t>(k) + 1, Box{w, h, -1, -1});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t v = labels(x, y);
            if (v <= 0)
                continue;
            Box& b = boxes[static_cast<std::size_t>(v)];
            b.x0 = std::min(b.x0, x);
            b.y0 = std::min(b.y0, y);
            b.x1 = std::max(b.x1, x);
            b.y1 = std::max(b.y1, y);
        }
    }
    std::vector<std::int32_t> present;
    for (std::int32_t v = 1; v <= k; ++v)
        if (boxes[static_cast<std::size_t>(v)].x1 >= 0)
            present.push_back(v);
    if (present.size() < 2)
        throw DomainError("carve_boundaries needs at least 2 distinct cluster labels");

    CarveResult result;
    while (result.selected.empty()) {
        for (std::int32_t v : present)
            if (rng.bernoulli(spec.selection_probability))
                result.selected.push_back(v);
    }
    for (std::size_t i = 0; i < result.selected.size(); ++i)
        result.iterations.push_back(rng.uniform_int(spec.iterations.lo, spec.iterations.hi));

    result.foreground = BinaryMask(w, h);
    auto fg = result.foreground.pixels();
    auto lab = labels.pixels();
    for (std::size_t i = 0; i < fg.size(); ++i)
        fg[i] = lab[i] != 0;

    // Erosion only changes pixels inside the cluster, so work on its bounding
    // box grown by one pixel; everything outside the box is background for
    // the cluster mask anyway.
    for (std::size_t s = 0; s < result.selected.size(); ++s) {
        const std::int32_t v = result.selected[s];
        const int iters = result.iterations[s];
        if (iters == 0)
            continue;
        const Box& b = boxes[static_cast<std::size_t>(v)];
        const int x0 = std::max(0, b.x0 - 1);
        const int y0 = std::max(0, b.y0 - 1);
        const int x1 = std::min(w - 1, b.x1 + 1);
        const int y1 = std::min(h - 1, b.y1 + 1);
        BinaryMask crop(x1 - x0 + 1, y1 - y0 + 1);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                crop(x - x0, y - y0) = labels(x, y) == v;
        const BinaryMask eroded = erode(crop, spec.se, iters);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (crop(x - x0, y - y0) && !eroded(x - x0, y - y0))
                    result.foreground(x, y) = 0;
    }
    return result;
}

CanvasResult canvas_texture(const BinaryMask& foreground, Rng& rng, const CanvasSpec& spec)
{
    const std::size_t n = foreground.size();
    const std::size_t fg_count = count(foreground);
    if (fg_count == 0 || fg_count == n)
        throw DegenerateMaskError("canvas_texture needs a foreground that is neither empty nor full");

    CanvasResult out;
    out.limit1 = rng.uniform(spec.limit1.lo, spec.limit1.hi);
    const double delta = rng.uniform(spec.delta.lo, spec.delta.hi);
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    out.limit2 = std::clamp(out.limit1 + sign * delta, 0.0, 1.0);
    const double lo = std::min(out.limit1, out.limit2);
    const double hi = std::max(out.limit1, out.limit2);

    // Float bounds that stay inside [lo, hi] when compared in double.
    float flo = static_cast<float>(lo);
    if (flo < lo)
        flo = std::nextafter(flo, 2.0f);
    float fhi = static_cast<float>(hi);
    if (fhi > hi)
        fhi = std::nextafter(fhi, -1.0f);

    ScalarImage canvas(foreground.width(), foreground.height());
    for (float& v : canvas.pixels())
        v = std::clamp(static_cast<float>(rng.uniform(lo, hi)), flo, fhi);

    // Outliers land on foreground positions only, so at most floor(f * |fg|)
    // foreground values leave [lo, hi].
    std::vector<std::size_t> fg_index;
    fg_index.reserve(fg_count);
    auto fg = foreground.pixels();
    for (std::size_t i = 0; i < n; ++i)
        if (fg[i])
            fg_index.push_back(i);
    out.outlier_fraction = rng.uniform(spec.outlier_fraction.lo, spec.outlier_fraction.hi);
    out.outlier_count = static_cast<std::size_t>(std::floor(out.outlier_fraction * static_cast<double>(fg_count)));
    auto values = canvas.pixels();
    for (std::size_t i = 0; i < out.outlier_count; ++i)
        values[fg_index[rng.index(fg_count)]] = static_cast<float>(rng.uniform());

    double sum = 0.0;
    for (float v : values)
        sum += v;
    out.canvas_mean = sum / static_cast<double>(n);
    out.shift = rng.uniform(spec.background_shift.lo, spec.background_shift.hi);
    out.background_value = static_cast<float>(std::clamp(out.canvas_mean + out.shift, 0.0, 1.0));

    for (std::size_t i = 0; i < n; ++i)
        if (!fg[i])
            values[i] = out.background_value;
    out.image = std::move(canvas);
    return out;
}

BoundaryScene compose_boundary_scene(Rng& rng, const BoundarySpec& spec, const NoiseStackSpec& noise, int width,
                                     int height, StageTimes* times)
{
    BoundaryScene scene;
    LabelMap labels;
    {
        ScopedStage stage(times, "label_map");
        labels = synth_label_map(rng, spec.labels, width, height);
        scene.cluster_count = max_label(labels);
    }
    {
        ScopedStage stage(times, "carve");
        CarveResult carved = carve_boundaries(labels, rng, spec.carve);
        scene.foreground = std::move(carved.foreground);
        scene.selected = std::move(carved.selected);
        scene.iterations = std::move(carved.iterations);
    }
    {
        ScopedStage stage(times, "canvas");
        CanvasResult canvas = canvas_texture(scene.foreground, rng, spec.canvas);
        scene.image = std::move(canvas.image);
        scene.limit1 = canvas.limit1;
        scene.limit2 = canvas.limit2;
        scene.outlier_fraction = canvas.outlier_fraction;
        scene.outlier_count = canvas.outlier_count;
        scene.shift = canvas.shift;
        scene.background_value = canvas.background_value;
    }
    {
        ScopedStage stage(times, "noise");
        NoiseStackResult noisy = apply_noise_stack(scene.image, noise, rng);
        scene.image = std::move(noisy.image);
        scene.noise = std::move(noisy.applied);
        clamp01(scene.image);
    }
    {
        ScopedStage stage(times, "components");
        const LabelMap components = connected_components(scene.foreground, 8);
        const std::int32_t n = max_label(components);
        scene.instance_masks.assign(static_cast<std::size_t>(n), BinaryMask(width, height));
        auto comp = components.pixels();
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (comp[i] > 0)
                scene.instance_masks[static_cast<std::size_t>(comp[i] - 1)].pixels()[i] = 1;
    }
    return scene;
}

} // namespace synthfm

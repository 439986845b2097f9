#pragma once

#include <vector>

#include "synthfm/bezier.hpp"
#include "synthfm/image.hpp"
#include "synthfm/noise.hpp"
#include "synthfm/rng.hpp"
#include "synthfm/timing.hpp"

namespace synthfm {

struct SceneParams {
    IntRange shape_count{1, 8};
    /// Range of the per-shape contrast variable r.
    Range r{-0.2, 0.2};
    double phantom_probability = 0.5;
    /// Fraction of min(width, height).
    Range phantom_radius{0.30, 0.45};
    /// Maximum phantom center offset, fraction of each canvas dimension.
    double phantom_jitter = 0.05;

    friend bool operator==(const SceneParams&, const SceneParams&) = default;
};

void validate(const SceneParams& params);

struct Background {
    ScalarImage image;
    /// Phantom intensity; 0 for the plain black canvas.
    double p = 0.0;
    bool phantom = false;
    Vec2 center;
    double radius = 0.0;
};

/// Black canvas, or (with phantom_probability) a filled circle of intensity
/// p ~ U(0, 1) on black. A pixel belongs to the circle iff its center lies
/// within `radius` of `center`.
Background make_background(Rng& rng, const SceneParams& params, int width, int height);

/// (1 - p) * (m * r): additive intensity offset of shape m against its local background.
double contrast_offset(double p, int m, double r);

struct ShapeInstance {
    int m = 0; ///< 1-based paint order
    double r = 0.0;
    double offset = 0.0;
};

struct ShapeScene {
    ScalarImage image;
    /// Pairwise disjoint, nonempty; parallel to `instances`.
    std::vector<BinaryMask> instance_masks;
    std::vector<ShapeInstance> instances;
    int drawn_shapes = 0;
    double p = 0.0;
    bool phantom = false;
    Vec2 phantom_center;
    double phantom_radius = 0.0;
    std::vector<NoiseSpec> noise;
    /// For each pixel, the canvas value under its visible shape before that
    /// shape was painted (the plain background elsewhere). Noise free.
    ScalarImage local_background;
};

/// Background, then shapes m = 1..count painted as
/// clamp(local + contrast_offset(p, m, r_m), 0, 1) with later shapes on top,
/// then the noise stack and a final clamp. Instances emptied by overpainting
/// are dropped.
ShapeScene compose_shape_scene(Rng& rng, const SceneParams& params, const ShapeSamplingSpec& shape_spec,
                               const NoiseStackSpec& noise, int width, int height, StageTimes* times = nullptr);

} // namespace synthfm

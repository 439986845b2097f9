#pragma once

#include <cstdint>
#include <vector>

#include "synthfm/bezier.hpp"
#include "synthfm/image.hpp"
#include "synthfm/morphology.hpp"
#include "synthfm/noise.hpp"
#include "synthfm/rng.hpp"
#include "synthfm/timing.hpp"

namespace synthfm {

struct LabelMapSpec {
    IntRange cluster_count{10, 15};
    /// Gaussian smoothing of each random field in pixels; 0 selects min(width, height) / 64.
    double field_smoothing_sigma = 0.0;
    /// Side of the white-noise lattice each field is upsampled from.
    int low_res_grid = 16;

    friend bool operator==(const LabelMapSpec&, const LabelMapSpec&) = default;
};

struct CarveSpec {
    double selection_probability = 0.5;
    IntRange iterations{1, 3};
    StructuringElement se = StructuringElement::square3;

    friend bool operator==(const CarveSpec&, const CarveSpec&) = default;
};

struct CanvasSpec {
    Range limit1{0.1, 0.9};
    /// |limit2 - limit1| before clamping to [0, 1].
    Range delta{0.02, 0.10};
    Range outlier_fraction{0.0, 0.03};
    Range background_shift{-0.10, 0.10};

    friend bool operator==(const CanvasSpec&, const CanvasSpec&) = default;
};

struct BoundarySpec {
    LabelMapSpec labels;
    CarveSpec carve;
    CanvasSpec canvas;

    friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

void validate(const LabelMapSpec& spec);
void validate(const CarveSpec& spec);
void validate(const CanvasSpec& spec);

/// Argmax over K smoothed random fields (white noise on a coarse lattice,
/// bilinearly upsampled, Gaussian smoothed). Labels 1..K all occur; ties go
/// to the lowest field index.
LabelMap synth_label_map(Rng& rng, const LabelMapSpec& spec, int width, int height);

struct CarveResult {
    BinaryMask foreground;
    std::vector<std::int32_t> selected; ///< ascending cluster labels
    std::vector<int> iterations;        ///< erosion count per selected cluster
};

/// Selects clusters independently (redrawing an empty selection), erodes
/// each selected cluster by its own iteration count and returns the union of
/// eroded selected and untouched unselected clusters as foreground.
CarveResult carve_boundaries(const LabelMap& labels, Rng& rng, const CarveSpec& spec);

struct CanvasResult {
    ScalarImage image;
    double limit1 = 0.0;
    double limit2 = 0.0;
    double outlier_fraction = 0.0;
    std::size_t outlier_count = 0;
    double canvas_mean = 0.0;
    double shift = 0.0;
    float background_value = 0.0f;
};

/// Foreground takes a random canvas drawn from [limit1, limit2]; then
/// floor(outlier_fraction * |foreground|) foreground positions (drawn with
/// replacement) are redrawn over [0, 1]. Background takes one shared value, the canvas mean
/// plus a random shift, clamped. Throws DegenerateMaskError for an empty or
/// full foreground.
CanvasResult canvas_texture(const BinaryMask& foreground, Rng& rng, const CanvasSpec& spec);

struct BoundaryScene {
    ScalarImage image;
    BinaryMask foreground;
    /// 8-connected components of the foreground, in raster order.
    std::vector<BinaryMask> instance_masks;
    int cluster_count = 0;
    std::vector<std::int32_t> selected;
    std::vector<int> iterations;
    double limit1 = 0.0;
    double limit2 = 0.0;
    double outlier_fraction = 0.0;
    std::size_t outlier_count = 0;
    double shift = 0.0;
    float background_value = 0.0f;
    std::vector<NoiseSpec> noise;
};

BoundaryScene compose_boundary_scene(Rng& rng, const BoundarySpec& spec, const NoiseStackSpec& noise, int width,
                                     int height, StageTimes* times = nullptr);

} // namespace synthfm

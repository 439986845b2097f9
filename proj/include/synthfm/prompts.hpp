#pragma once

#include <vector>

#include "synthfm/image.hpp"
#include "synthfm/rng.hpp"

namespace synthfm {

struct PromptConfig {
    int n_pos = 1;
    int n_neg = 0;

    friend bool operator==(const PromptConfig&, const PromptConfig&) = default;
};

/// The four (positive, negative) click configurations used for evaluation.
inline const std::vector<PromptConfig> kStandardPromptConfigs{{1, 0}, {3, 0}, {1, 2}, {3, 2}};

struct PromptSet {
    std::vector<Pixel> positives;
    std::vector<Pixel> negatives;
    PromptConfig config;
    int band_dilation = 0;

    friend bool operator==(const PromptSet&, const PromptSet&) = default;
};

/// First click at the centroid, or the nearest foreground pixel to it when
/// the centroid is background (raster-order tie-break). Remaining clicks are
/// uniform over the other foreground pixels without replacement, falling back
/// to sampling with replacement when the mask is too small.
std::vector<Pixel> positive_prompts(const BinaryMask& mask, int n, Rng& rng);

/// Candidates: dilate(mask, square3, dilation_iterations) minus mask. The
/// first click maximizes the distance to the centroid; each later one
/// maximizes its minimum distance to the clicks already chosen. Raster-order
/// tie-break throughout. Throws NoBandError when clicks are requested from an
/// empty band.
std::vector<Pixel> negative_prompts(const BinaryMask& mask, int n, int dilation_iterations);

PromptSet sample_prompts(const BinaryMask& mask, PromptConfig config, Rng& rng, int dilation_iterations);

/// round(10 * min(width, height) / 1024), at least 3.
int default_band_dilation(int width, int height);

} // namespace synthfm

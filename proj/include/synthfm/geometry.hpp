#pragma once

#include "synthfm/image.hpp"

namespace synthfm {

/// Mean foreground coordinate (column, row indices), each rounded half away
/// from zero. Throws EmptyMaskError on an empty mask.
Pixel centroid(const BinaryMask& mask);

/// Unrounded mean foreground coordinate.
Vec2 centroid_exact(const BinaryMask& mask);

/// Labels maximal connected foreground regions 1..K in raster order of their
/// first pixel; connectivity is 4 or 8.
LabelMap connected_components(const BinaryMask& mask, int connectivity = 8);

/// Largest label in the map (0 for an all-background map).
std::int32_t max_label(const LabelMap& labels);

} // namespace synthfm

#pragma once

#include <span>

#include "synthfm/image.hpp"

namespace synthfm {

/// Even-odd scanline fill. A pixel is foreground iff its center
/// (x + 0.5, y + 0.5) lies inside the closed polygon. Vertices may lie off
/// the canvas; throws DegeneratePolygonError for fewer than 3 vertices.
BinaryMask fill_polygon(std::span<const Vec2> vertices, int width, int height);

} // namespace synthfm

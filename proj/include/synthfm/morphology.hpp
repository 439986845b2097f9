#pragma once

#include "synthfm/image.hpp"

namespace synthfm {

enum class StructuringElement {
    square3, ///< 3x3 block, 8-connected
    cross3,  ///< 3x3 plus, 4-connected
};

/// Value assumed for pixels outside the canvas.
enum class Border { background, foreground };

/// Binary erosion: a pixel survives one iteration iff its whole
/// neighborhood is foreground. Out-of-canvas pixels take `border`.
BinaryMask erode(const BinaryMask& mask, StructuringElement se = StructuringElement::square3, int iterations = 1,
                 Border border = Border::background);

/// Binary dilation: a pixel is set iff any pixel of its neighborhood is.
BinaryMask dilate(const BinaryMask& mask, StructuringElement se = StructuringElement::square3, int iterations = 1,
                  Border border = Border::background);

const char* to_string(StructuringElement se);
StructuringElement structuring_element_from_string(const std::string& name);

} // namespace synthfm

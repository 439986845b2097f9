#pragma once

#include <vector>

#include "synthfm/image.hpp"

namespace synthfm {

/// Normalized 1-D Gaussian weights over [-r, r], r = ceil(3 sigma).
std::vector<float> gaussian_kernel(double sigma);

/// Separable Gaussian blur with mirror-reflect borders (edge sample repeated,
/// i.e. index -1 maps to 0). sigma == 0 returns the input unchanged.
ScalarImage gaussian_blur(const ScalarImage& image, double sigma);

/// Maps an out-of-range index into [0, n) by half-sample reflection.
int reflect_index(int i, int n) noexcept;

} // namespace synthfm

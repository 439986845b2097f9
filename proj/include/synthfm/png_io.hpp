#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "synthfm/image.hpp"

namespace synthfm {

/// Intensity x 65535, rounded half to even.
std::vector<std::uint16_t> quantize16(const ScalarImage& image);

void write_png_gray16(const std::filesystem::path& path, int width, int height, std::span<const std::uint16_t> px);
void write_png_gray8(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> px);
/// Interleaved RGB, 3 bytes per pixel.
void write_png_rgb8(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> px);

/// Mask written as 8-bit 0/255.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Decoded PNG as gray samples. 16-bit files keep their raw values; anything
/// else is converted to 8-bit gray by libpng.
struct GrayPng {
    int width = 0;
    int height = 0;
    int bit_depth = 8; ///< 8 or 16
    std::vector<std::uint16_t> samples;
};

GrayPng read_png_gray(const std::filesystem::path& path);

/// Any nonzero sample is foreground.
BinaryMask read_mask_png(const std::filesystem::path& path);

} // namespace synthfm

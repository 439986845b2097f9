#include "synthfm/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <png.h>

namespace synthfm {
namespace {

void write_image(const std::filesystem::path& path, int width, int height, png_uint_32 format, const void* data)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, data, 0, nullptr))
        throw IoError("cannot write " + path.string() + ": " + image.message);
}

} // namespace

std::vector<std::uint16_t> quantize16(const ScalarImage& image)
{
    std::vector<std::uint16_t> out(image.size());
    auto src = image.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = std::clamp(static_cast<double>(src[i]), 0.0, 1.0) * 65535.0;
        out[i] = static_cast<std::uint16_t>(std::nearbyint(v));
    }
    return out;
}

void write_png_gray16(const std::filesystem::path& path, int width, int height, std::span<const std::uint16_t> px)
{
    write_image(path, width, height, PNG_FORMAT_LINEAR_Y, px.data());
}

void write_png_gray8(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> px)
{
    write_image(path, width, height, PNG_FORMAT_GRAY, px.data());
}

void write_png_rgb8(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> px)
{
    write_image(path, width, height, PNG_FORMAT_RGB, px.data());
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask)
{
    std::vector<std::uint8_t> bytes(mask.size());
    auto src = mask.pixels();
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = src[i] ? 255 : 0;
    write_png_gray8(path, mask.width(), mask.height(), bytes);
}

GrayPng read_png_gray(const std::filesystem::path& path)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw IoError("cannot read " + path.string() + ": " + image.message);

    GrayPng out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    const bool sixteen = (image.format & PNG_FORMAT_FLAG_LINEAR) != 0;
    image.format = sixteen ? PNG_FORMAT_LINEAR_Y : PNG_FORMAT_GRAY;
    out.bit_depth = sixteen ? 16 : 8;

    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    if (sixteen) {
        out.samples.resize(n);
        if (!png_image_finish_read(&image, nullptr, out.samples.data(), 0, nullptr))
            throw IoError("cannot decode " + path.string() + ": " + image.message);
    } else {
        std::vector<std::uint8_t> bytes(n);
        if (!png_image_finish_read(&image, nullptr, bytes.data(), 0, nullptr))
            throw IoError("cannot decode " + path.string() + ": " + image.message);
        out.samples.assign(bytes.begin(), bytes.end());
    }
    return out;
}

BinaryMask read_mask_png(const std::filesystem::path& path)
{
    const GrayPng png = read_png_gray(path);
    BinaryMask mask(png.width, png.height);
    auto dst = mask.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = png.samples[i] != 0;
    return mask;
}

} // namespace synthfm

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "synthfm/error.hpp"

namespace synthfm {

/// Row-major H x W grid. Pixel (x, y) is column x, row y; its geometric
/// center is (x + 0.5, y + 0.5).
template <typename T, typename Tag>
class Raster {
public:
    using value_type = T;

    Raster() = default;
    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height)
    {
        if (width < 0 || height < 0)
            throw DomainError("raster dimensions must be non-negative");
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool same_shape(const Raster& o) const noexcept { return width_ == o.width_ && height_ == o.height_; }
    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    std::size_t index(int x, int y) const noexcept
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    std::span<T> row(int y) noexcept { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const noexcept
    {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }
    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct ScalarTag {};
struct MaskTag {};
struct LabelTag {};

/// Intensities, nominal range [0, 1].
using ScalarImage = Raster<float, ScalarTag>;
/// 0 = background, 1 = foreground. Other byte values are never stored.
using BinaryMask = Raster<std::uint8_t, MaskTag>;
/// 0 = background, 1..K = cluster / instance id.
using LabelMap = Raster<std::int32_t, LabelTag>;

/// Sub-pixel coordinate used by curve math.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Integer pixel coordinate (column x, row y).
struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

inline void require_same_shape(const auto& a, const auto& b, const char* what)
{
    if (a.width() != b.width() || a.height() != b.height())
        throw ShapeError(std::string(what) + ": dimension mismatch " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
}

/// Number of foreground pixels.
std::size_t count(const BinaryMask& mask);
BinaryMask complement(const BinaryMask& mask);
BinaryMask mask_of_label(const LabelMap& labels, std::int32_t label);

/// Clamps every value into [0, 1] in place.
void clamp01(ScalarImage& image);

} // namespace synthfm

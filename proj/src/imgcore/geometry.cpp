#include "synthfm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace synthfm {

Vec2 centroid_exact(const BinaryMask& mask)
{
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < mask.height(); ++y) {
        auto row = mask.row(y);
        for (int x = 0; x < mask.width(); ++x) {
            if (row[static_cast<std::size_t>(x)]) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    if (n == 0)
        throw EmptyMaskError("centroid of an empty mask");
    return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

Pixel centroid(const BinaryMask& mask)
{
    const Vec2 c = centroid_exact(mask);
    // std::round rounds half away from zero.
    return {static_cast<int>(std::round(c.x)), static_cast<int>(std::round(c.y))};
}

LabelMap connected_components(const BinaryMask& mask, int connectivity)
{
    if (connectivity != 4 && connectivity != 8)
        throw DomainError("connectivity must be 4 or 8");

    const int w = mask.width();
    const int h = mask.height();
    LabelMap labels(w, h);
    std::vector<Pixel> stack;
    std::int32_t next = 0;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask(x, y) || labels(x, y) != 0)
                continue;
            const std::int32_t id = ++next;
            labels(x, y) = id;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if ((dx == 0 && dy == 0) || (connectivity == 4 && dx != 0 && dy != 0))
                            continue;
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (mask.contains(nx, ny) && mask(nx, ny) && labels(nx, ny) == 0) {
                            labels(nx, ny) = id;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }
    return labels;
}

std::int32_t max_label(const LabelMap& labels)
{
    std::int32_t m = 0;
    for (std::int32_t v : labels.pixels())
        m = std::max(m, v);
    return m;
}

} // namespace synthfm

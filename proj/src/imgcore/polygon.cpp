#include "synthfm/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace synthfm {

BinaryMask fill_polygon(std::span<const Vec2> vertices, int width, int height)
{
    if (vertices.size() < 3)
        throw DegeneratePolygonError("polygon needs at least 3 vertices, got " + std::to_string(vertices.size()));

    BinaryMask mask(width, height);
    double ymin = vertices[0].y;
    double ymax = vertices[0].y;
    for (const Vec2& v : vertices) {
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    const int row_begin = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
    const int row_end = std::min(height, static_cast<int>(std::ceil(ymax + 0.5)) + 1);

    std::vector<double> crossings;
    const std::size_t n = vertices.size();
    for (int row = row_begin; row < row_end; ++row) {
        const double py = row + 0.5;
        crossings.clear();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2& a = vertices[i];
            const Vec2& b = vertices[j];
            if ((a.y > py) != (b.y > py))
                crossings.push_back((b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x);
        }
        std::sort(crossings.begin(), crossings.end());
        auto dst = mask.row(row);
        // Center px is inside iff an odd number of crossings lie strictly right of it,
        // i.e. crossings[2k] <= px < crossings[2k+1].
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
            const double lo = crossings[k];
            const double hi = crossings[k + 1];
            int x = std::max(0, static_cast<int>(std::floor(lo - 0.5)) - 1);
            while (x < width && x + 0.5 < lo)
                ++x;
            for (; x < width && x + 0.5 < hi; ++x)
                dst[static_cast<std::size_t>(x)] = 1;
        }
    }
    return mask;
}

} // namespace synthfm

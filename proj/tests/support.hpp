#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "synthfm/image.hpp"

namespace testing {

using synthfm::BinaryMask;
using synthfm::LabelMap;
using synthfm::Pixel;
using synthfm::ScalarImage;
using synthfm::Vec2;

inline BinaryMask random_mask(std::mt19937_64& gen, int w, int h, double density = 0.5)
{
    std::bernoulli_distribution on(density);
    BinaryMask m(w, h);
    for (auto& v : m.pixels())
        v = on(gen) ? 1 : 0;
    return m;
}

inline ScalarImage constant_image(int w, int h, float v)
{
    return ScalarImage(w, h, v);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0; ///< population variance
};

inline Moments moments(const ScalarImage& img)
{
    double sum = 0.0;
    for (float v : img.pixels())
        sum += v;
    const double mean = sum / static_cast<double>(img.size());
    double sq = 0.0;
    for (float v : img.pixels())
        sq += (v - mean) * (v - mean);
    return {mean, sq / static_cast<double>(img.size())};
}

// W. Randolph Franklin's point-in-polygon test, even-odd rule.
inline bool pnpoly(const std::vector<Vec2>& poly, double px, double py)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if (((a.y > py) != (b.y > py)) && (px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x))
            inside = !inside;
    }
    return inside;
}

// Iterative flood fill; returns component count.
inline int flood_fill_count(const BinaryMask& m, int connectivity)
{
    BinaryMask seen(m.width(), m.height());
    int count = 0;
    std::vector<Pixel> stack;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y) || seen(x, y))
                continue;
            ++count;
            stack.push_back({x, y});
            seen(x, y) = 1;
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if ((dx == 0 && dy == 0) || (connectivity == 4 && dx != 0 && dy != 0))
                            continue;
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (m.contains(nx, ny) && m(nx, ny) && !seen(nx, ny)) {
                            seen(nx, ny) = 1;
                            stack.push_back({nx, ny});
                        }
                    }
            }
        }
    return count;
}

// Point on a Bezier curve by repeated linear interpolation.
inline Vec2 de_casteljau(std::vector<Vec2> pts, double t)
{
    for (std::size_t level = pts.size() - 1; level > 0; --level)
        for (std::size_t i = 0; i < level; ++i)
            pts[i] = {(1 - t) * pts[i].x + t * pts[i + 1].x, (1 - t) * pts[i].y + t * pts[i + 1].y};
    return pts[0];
}

inline std::int64_t dist2(Pixel a, Pixel b)
{
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Two-tailed Student t p-value by composite Simpson integration of the
// density over [0, |t|]: p = 1 - 2 * integral.
inline double t_p_value_quadrature(double t, double df)
{
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
    auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
    const double a = std::fabs(t);
    if (a == 0.0)
        return 1.0;
    const int n = 200000;
    const double h = a / n;
    double s = pdf(0) + pdf(a);
    for (int i = 1; i < n; ++i)
        s += pdf(i * h) * (i % 2 ? 4 : 2);
    return 1.0 - 2.0 * s * h / 3.0;
}

// Fresh scratch directory under the system temp dir, removed at exit.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    struct Registry {
        std::vector<std::filesystem::path> dirs;
        ~Registry()
        {
            std::error_code ec;
            for (const auto& d : dirs)
                std::filesystem::remove_all(d, ec);
        }
    };
    static Registry registry;
    const auto dir = std::filesystem::temp_directory_path() / ("synthfm_test_" + std::to_string(::getpid()) + "_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    registry.dirs.push_back(dir);
    return dir;
}

} // namespace testing

#include "synthfm/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synthfm/geometry.hpp"
#include "synthfm/morphology.hpp"

namespace synthfm {
namespace {

std::int64_t dist2(Pixel a, Pixel b)
{
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::vector<Pixel> foreground_pixels(const BinaryMask& mask)
{
    std::vector<Pixel> out;
    for (int y = 0; y < mask.height(); ++y) {
        auto row = mask.row(y);
        for (int x = 0; x < mask.width(); ++x)
            if (row[static_cast<std::size_t>(x)])
                out.push_back({x, y});
    }
    return out;
}

} // namespace

int default_band_dilation(int width, int height)
{
    const int scaled = static_cast<int>(std::lround(10.0 * std::min(width, height) / 1024.0));
    return std::max(3, scaled);
}

std::vector<Pixel> positive_prompts(const BinaryMask& mask, int n, Rng& rng)
{
    if (n < 1)
        throw DomainError("positive_prompts needs n >= 1");
    const std::vector<Pixel> fg = foreground_pixels(mask);
    if (fg.empty())
        throw EmptyMaskError("positive prompts on an empty mask");

    const Pixel c = centroid(mask);
    std::size_t first = 0;
    if (mask.contains(c.x, c.y) && mask(c.x, c.y)) {
        first = static_cast<std::size_t>(std::find(fg.begin(), fg.end(), c) - fg.begin());
    } else {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = 0; i < fg.size(); ++i) {
            const std::int64_t d = dist2(fg[i], c);
            if (d < best) {
                best = d;
                first = i;
            }
        }
    }

    std::vector<Pixel> out{fg[first]};
    const auto extra = static_cast<std::size_t>(n - 1);
    if (extra == 0)
        return out;

    std::vector<Pixel> rest;
    rest.reserve(fg.size() - 1);
    for (std::size_t i = 0; i < fg.size(); ++i)
        if (i != first)
            rest.push_back(fg[i]);

    if (rest.size() >= extra) {
        for (std::size_t i = 0; i < extra; ++i) {
            std::swap(rest[i], rest[i + rng.index(rest.size() - i)]);
            out.push_back(rest[i]);
        }
    } else {
        for (std::size_t i = 0; i < extra; ++i)
            out.push_back(fg[rng.index(fg.size())]);
    }
    return out;
}

std::vector<Pixel> negative_prompts(const BinaryMask& mask, int n, int dilation_iterations)
{
    if (n < 0)
        throw DomainError("negative_prompts needs n >= 0");
    if (n == 0)
        return {};

    const BinaryMask grown = dilate(mask, StructuringElement::square3, dilation_iterations);
    std::vector<Pixel> band;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (grown(x, y) && !mask(x, y))
                band.push_back({x, y});
    if (band.empty())
        throw NoBandError("no candidate pixels in the dilated band around the mask");

    const Pixel c = centroid(mask);
    std::vector<std::int64_t> nearest(band.size(), std::numeric_limits<std::int64_t>::max());
    std::vector<Pixel> out;

    std::size_t pick = 0;
    std::int64_t best = -1;
    for (std::size_t i = 0; i < band.size(); ++i) {
        const std::int64_t d = dist2(band[i], c);
        if (d > best) {
            best = d;
            pick = i;
        }
    }
    out.push_back(band[pick]);

    while (out.size() < static_cast<std::size_t>(n)) {
        best = -1;
        for (std::size_t i = 0; i < band.size(); ++i) {
            nearest[i] = std::min(nearest[i], dist2(band[i], out.back()));
            if (nearest[i] > best) {
                best = nearest[i];
                pick = i;
            }
        }
        out.push_back(band[pick]);
    }
    return out;
}

PromptSet sample_prompts(const BinaryMask& mask, PromptConfig config, Rng& rng, int dilation_iterations)
{
    PromptSet set;
    set.config = config;
    set.band_dilation = dilation_iterations;
    set.positives = positive_prompts(mask, config.n_pos, rng);
    set.negatives = negative_prompts(mask, config.n_neg, dilation_iterations);
    return set;
}

} // namespace synthfm

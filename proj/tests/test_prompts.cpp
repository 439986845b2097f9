#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "support.hpp"
#include "synthfm/boundary.hpp"
#include "synthfm/geometry.hpp"
#include "synthfm/morphology.hpp"
#include "synthfm/prompts.hpp"
#include "synthfm/scene.hpp"

using namespace synthfm;

namespace {

std::int64_t d2(Pixel a, Pixel b)
{
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

BinaryMask disk(int w, int h, double cx, double cy, double r)
{
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            m(x, y) = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
    return m;
}

std::vector<Pixel> band_of(const BinaryMask& mask, int dilation)
{
    // Independent band: Chebyshev distance 1..dilation from the mask.
    std::vector<Pixel> out;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            if (mask(x, y))
                continue;
            bool near = false;
            for (int dy = -dilation; dy <= dilation && !near; ++dy)
                for (int dx = -dilation; dx <= dilation && !near; ++dx)
                    near = mask.contains(x + dx, y + dy) && mask(x + dx, y + dy);
            if (near)
                out.push_back({x, y});
        }
    return out;
}

// A target mask from a small generated scene, alternating modules.
BinaryMask scene_target(std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<BinaryMask> masks;
    if (seed % 2 == 0)
        masks = compose_shape_scene(rng, SceneParams{}, ShapeSamplingSpec{}, NoiseStackSpec{}, 64, 64).instance_masks;
    else
        masks = compose_boundary_scene(rng, BoundarySpec{}, NoiseStackSpec{}, 64, 64).instance_masks;
    return masks[rng.index(masks.size())];
}

} // namespace

TEST_SUITE("promptgen")
{
    TEST_CASE("disk positive is the disk center")
    {
        Rng rng(1);
        const auto p = positive_prompts(disk(101, 91, 40, 50, 20), 1, rng);
        REQUIRE(p.size() == 1);
        CHECK(p[0] == Pixel{40, 50});
    }

    TEST_CASE("annulus positive is the nearest ring pixel to the centroid")
    {
        for (int r_in = 5; r_in < 20; r_in += 3) {
            BinaryMask ring = disk(80, 80, 37, 41, r_in + 8);
            const BinaryMask hole = disk(80, 80, 37, 41, r_in);
            for (std::size_t i = 0; i < ring.size(); ++i)
                ring.pixels()[i] = ring.pixels()[i] && !hole.pixels()[i];
            const Pixel c = centroid(ring);
            REQUIRE_FALSE(ring(c.x, c.y));
            Pixel best{};
            std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
            for (int y = 0; y < 80; ++y)
                for (int x = 0; x < 80; ++x)
                    if (ring(x, y) && d2({x, y}, c) < best_d) {
                        best_d = d2({x, y}, c);
                        best = {x, y};
                    }
            Rng rng(3);
            CHECK(positive_prompts(ring, 1, rng)[0] == best);
        }
    }

    TEST_CASE("tiny masks fall back to sampling with replacement")
    {
        BinaryMask m(10, 10);
        m(2, 3) = 1;
        m(7, 8) = 1;
        Rng rng(9);
        const auto p = positive_prompts(m, 3, rng);
        REQUIRE(p.size() == 3);
        for (Pixel q : p)
            CHECK(m(q.x, q.y));
    }

    TEST_CASE("positives are distinct when the mask is large enough")
    {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const BinaryMask m = scene_target(seed);
            Rng rng(seed);
            const int n = static_cast<int>(std::min<std::size_t>(count(m), 5));
            const auto p = positive_prompts(m, n, rng);
            std::set<std::pair<int, int>> uniq;
            for (Pixel q : p)
                uniq.insert({q.x, q.y});
            CHECK(uniq.size() == p.size());
        }
    }

    TEST_CASE("positive prompt errors")
    {
        Rng rng(1);
        CHECK_THROWS_AS(positive_prompts(BinaryMask(5, 5), 1, rng), EmptyMaskError);
        CHECK_THROWS_AS(positive_prompts(BinaryMask(5, 5, 1), 0, rng), DomainError);
    }

    TEST_CASE("no negatives requested")
    {
        CHECK(negative_prompts(disk(30, 30, 15, 15, 5), 0, 3).empty());
    }

    TEST_CASE("centered square: first negative is a band corner")
    {
        BinaryMask m(100, 100);
        for (int y = 40; y < 60; ++y)
            for (int x = 40; x < 60; ++x)
                m(x, y) = 1;
        const auto n = negative_prompts(m, 1, 3);
        REQUIRE(n.size() == 1);
        const std::set<std::pair<int, int>> corners{{37, 37}, {62, 37}, {37, 62}, {62, 62}};
        CHECK(corners.contains({n[0].x, n[0].y}));
    }

    TEST_CASE("negatives against a brute-force band and farthest-point oracle")
    {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const BinaryMask m = scene_target(seed);
            const int dilation = 3;
            const std::vector<Pixel> band = band_of(m, dilation);
            if (band.empty())
                continue;
            const auto neg = negative_prompts(m, 4, dilation);
            REQUIRE(neg.size() == 4);
            const Pixel c = centroid(m);
            std::int64_t far = 0;
            for (Pixel b : band)
                far = std::max(far, d2(b, c));
            CHECK(d2(neg[0], c) == far);
            for (std::size_t k = 1; k < neg.size(); ++k) {
                const auto min_to_chosen = [&](Pixel p) {
                    std::int64_t d = std::numeric_limits<std::int64_t>::max();
                    for (std::size_t j = 0; j < k; ++j)
                        d = std::min(d, d2(p, neg[j]));
                    return d;
                };
                std::int64_t best = -1;
                for (Pixel b : band)
                    best = std::max(best, min_to_chosen(b));
                CHECK(min_to_chosen(neg[k]) == best);
            }
        }
    }

    TEST_CASE("negative prompt errors")
    {
        CHECK_THROWS_AS(negative_prompts(BinaryMask(6, 6, 1), 1, 3), NoBandError);
        CHECK_THROWS_AS(negative_prompts(BinaryMask(6, 6), 1, 3), NoBandError);
    }

    TEST_CASE("standard configurations")
    {
        const BinaryMask m = disk(64, 64, 30, 30, 10);
        Rng rng(4);
        const PromptSet a = sample_prompts(m, {1, 0}, rng, 3);
        CHECK(a.positives.size() == 1);
        CHECK(a.negatives.empty());
        const PromptSet b = sample_prompts(m, {3, 2}, rng, 3);
        CHECK(b.positives.size() == 3);
        CHECK(b.negatives.size() == 2);
        CHECK(b.band_dilation == 3);
        CHECK(kStandardPromptConfigs.size() == 4);
    }

    TEST_CASE("prompt sets are deterministic")
    {
        const BinaryMask m = scene_target(12);
        Rng a(77), b(77);
        CHECK(sample_prompts(m, {3, 2}, a, 3) == sample_prompts(m, {3, 2}, b, 3));
    }

    TEST_CASE("membership invariants over 1000 generated scenes")
    {
        int checked = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const BinaryMask m = scene_target(seed);
            const int dilation = default_band_dilation(m.width(), m.height());
            if (count(dilate(m, StructuringElement::square3, dilation)) == count(m))
                continue;
            Rng rng(seed);
            const PromptConfig cfg = kStandardPromptConfigs[seed % 4];
            const PromptSet s = sample_prompts(m, cfg, rng, dilation);
            const BinaryMask grown = dilate(m, StructuringElement::square3, dilation);
            REQUIRE(s.positives.size() == static_cast<std::size_t>(cfg.n_pos));
            REQUIRE(s.negatives.size() == static_cast<std::size_t>(cfg.n_neg));
            for (Pixel p : s.positives)
                REQUIRE(m(p.x, p.y));
            for (Pixel q : s.negatives) {
                REQUIRE_FALSE(m(q.x, q.y));
                REQUIRE(grown(q.x, q.y));
            }
            ++checked;
        }
        CHECK(checked == 1000);
    }

    TEST_CASE("band dilation scales with size")
    {
        CHECK(default_band_dilation(1024, 1024) == 10);
        CHECK(default_band_dilation(2048, 1024) == 10);
        CHECK(default_band_dilation(256, 256) == 3);
        CHECK(default_band_dilation(512, 512) == 5);
    }
}

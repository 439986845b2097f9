#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "support.hpp"
#include "synthfm/scene.hpp"

using namespace synthfm;

namespace {

NoiseStackSpec no_noise()
{
    NoiseStackSpec n;
    n.count = {0, 0};
    return n;
}

} // namespace

TEST_SUITE("scene")
{
    TEST_CASE("contrast offset examples")
    {
        CHECK(contrast_offset(0.5, 1, 0.2) == doctest::Approx(0.1).epsilon(1e-15));
        for (int m = 1; m < 9; ++m) {
            CHECK(contrast_offset(1.0, m, 0.17) == 0.0);
            CHECK(contrast_offset(0.3, m, 0.0) == 0.0);
        }
        CHECK(contrast_offset(0.25, 3, -0.1) == doctest::Approx(0.75 * 3 * -0.1));
        CHECK_THROWS_AS(contrast_offset(1.5, 1, 0.1), DomainError);
        CHECK_THROWS_AS(contrast_offset(0.5, 0, 0.1), DomainError);
    }

    TEST_CASE("background without phantom is black")
    {
        SceneParams params;
        params.phantom_probability = 0.0;
        Rng rng(3);
        const Background bg = make_background(rng, params, 64, 48);
        CHECK_FALSE(bg.phantom);
        CHECK(bg.p == 0.0);
        for (float v : bg.image.pixels())
            CHECK(v == 0.0f);
    }

    TEST_CASE("phantom disk area and intensity")
    {
        SceneParams params;
        params.phantom_probability = 1.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            const Background bg = make_background(rng, params, 512, 512);
            REQUIRE(bg.phantom);
            std::size_t inside = 0;
            for (int y = 0; y < 512; ++y)
                for (int x = 0; x < 512; ++x) {
                    const bool in = std::hypot(x + 0.5 - bg.center.x, y + 0.5 - bg.center.y) <= bg.radius;
                    inside += in;
                    REQUIRE(bg.image(x, y) == (in ? static_cast<float>(bg.p) : 0.0f));
                }
            const double area = M_PI * bg.radius * bg.radius;
            CHECK(std::fabs(inside - area) <= 0.01 * area);
            const int cx = static_cast<int>(bg.center.x);
            const int cy = static_cast<int>(bg.center.y);
            CHECK(bg.image(cx, cy) == static_cast<float>(bg.p));
        }
    }

    TEST_CASE("one shape on black has exactly two values")
    {
        SceneParams params;
        params.shape_count = {1, 1};
        params.phantom_probability = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            const ShapeScene s = compose_shape_scene(rng, params, ShapeSamplingSpec{}, no_noise(), 96, 96);
            REQUIRE(s.instances.size() == 1);
            const float painted = static_cast<float>(std::clamp(s.instances[0].offset, 0.0, 1.0));
            std::set<float> values(s.image.pixels().begin(), s.image.pixels().end());
            CHECK(values == std::set<float>{0.0f, painted});
            if (painted > 0.0f)
                for (std::size_t i = 0; i < s.image.size(); ++i)
                    CHECK((s.image.pixels()[i] != 0.0f) == (s.instance_masks[0].pixels()[i] != 0));
        }
    }

    TEST_CASE("shape scenes are deterministic")
    {
        const SceneParams params;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng a(seed), b(seed);
            const ShapeScene x = compose_shape_scene(a, params, ShapeSamplingSpec{}, NoiseStackSpec{}, 80, 64);
            const ShapeScene y = compose_shape_scene(b, params, ShapeSamplingSpec{}, NoiseStackSpec{}, 80, 64);
            CHECK(x.image == y.image);
            CHECK(x.instance_masks == y.instance_masks);
            CHECK(x.noise == y.noise);
        }
    }

    TEST_CASE("scene invariants")
    {
        const SceneParams params;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            const ShapeScene s = compose_shape_scene(rng, params, ShapeSamplingSpec{}, NoiseStackSpec{}, 96, 80);
            CHECK(s.instance_masks.size() >= 1);
            CHECK(static_cast<int>(s.instance_masks.size()) <= s.drawn_shapes);
            CHECK(s.instance_masks.size() == s.instances.size());
            for (float v : s.image.pixels())
                REQUIRE((v >= 0.0f && v <= 1.0f));
            std::vector<int> cover(s.image.size(), 0);
            for (const auto& m : s.instance_masks) {
                CHECK(count(m) > 0);
                for (std::size_t i = 0; i < m.size(); ++i)
                    cover[i] += m.pixels()[i];
            }
            for (int c : cover)
                REQUIRE(c <= 1);
            for (const ShapeInstance& inst : s.instances)
                CHECK(inst.offset == contrast_offset(s.p, inst.m, inst.r));
            int prev = 0;
            for (const ShapeInstance& inst : s.instances) {
                CHECK(inst.m > prev);
                prev = inst.m;
            }
        }
    }

    TEST_CASE("instance pixels are constant where the local background was")
    {
        SceneParams params;
        params.phantom_probability = 1.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            const ShapeScene s = compose_shape_scene(rng, params, ShapeSamplingSpec{}, no_noise(), 96, 96);
            for (std::size_t k = 0; k < s.instance_masks.size(); ++k) {
                std::map<float, std::set<float>> by_background;
                const auto mask = s.instance_masks[k].pixels();
                for (std::size_t i = 0; i < mask.size(); ++i)
                    if (mask[i])
                        by_background[s.local_background.pixels()[i]].insert(s.image.pixels()[i]);
                for (const auto& [bg, vals] : by_background) {
                    CHECK(vals.size() == 1);
                    const double expected = std::clamp(static_cast<double>(bg) + s.instances[k].offset, 0.0, 1.0);
                    CHECK(*vals.begin() == static_cast<float>(expected));
                }
            }
        }
    }

    TEST_CASE("scene parameter validation")
    {
        SceneParams p;
        p.shape_count = {0, 3};
        CHECK_THROWS_AS(validate(p), ConfigError);
        p = {};
        p.phantom_probability = 1.5;
        CHECK_THROWS_AS(validate(p), ConfigError);
        CHECK_NOTHROW(validate(SceneParams{}));
    }
}

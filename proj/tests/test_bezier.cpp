#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "synthfm/bezier.hpp"
#include "synthfm/geometry.hpp"

using namespace synthfm;

namespace {

std::vector<Vec2> random_points(std::mt19937_64& gen, int count)
{
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::vector<Vec2> pts(count);
    for (auto& p : pts)
        p = {u(gen), u(gen)};
    return pts;
}

// Andrew's monotone chain; counter-clockwise hull without collinear points.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool in_hull(const std::vector<Vec2>& hull, const Vec2& p, double tol)
{
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2& a = hull[i];
        const Vec2& b = hull[(i + 1) % hull.size()];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double side = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / len;
        if (side < -tol)
            return false;
    }
    return true;
}

} // namespace

TEST_SUITE("shapegen")
{
    TEST_CASE("endpoint interpolation")
    {
        std::mt19937_64 gen(1);
        for (int n = 1; n <= 12; ++n) {
            const auto pts = random_points(gen, n + 1);
            const BezierShape s(pts, false);
            CHECK(bezier_point(s, 0.0) == pts.front());
            CHECK(bezier_point(s, 1.0) == pts.back());
        }
    }

    TEST_CASE("quadratic midpoint example")
    {
        const BezierShape s({{0, 0}, {2, 0}, {0, 2}}, false);
        const Vec2 p = bezier_point(s, 0.5);
        CHECK(p.x == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(0.5).epsilon(1e-12));
        const Vec2 q = testing::de_casteljau(s.control_points(), 0.5);
        CHECK(q.x == doctest::Approx(1.0));
        CHECK(q.y == doctest::Approx(0.5));
    }

    TEST_CASE("agrees with de Casteljau and partitions unity")
    {
        std::mt19937_64 gen(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 1 + static_cast<int>(gen() % 12);
            const double t = u(gen);
            const auto pts = random_points(gen, n + 1);
            const Vec2 a = bezier_point(BezierShape(pts, false), t);
            const Vec2 b = testing::de_casteljau(pts, t);
            CHECK(std::fabs(a.x - b.x) < 1e-9);
            CHECK(std::fabs(a.y - b.y) < 1e-9);
            double sum = 0.0;
            for (double w : bernstein_weights(n, t))
                sum += w;
            CHECK(std::fabs(sum - 1.0) < 1e-9);
        }
    }

    TEST_CASE("curve points lie in the convex hull")
    {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const auto pts = random_points(gen, 3 + static_cast<int>(gen() % 10));
            const auto hull = convex_hull(pts);
            const BezierShape s(pts, false);
            for (int k = 0; k < 20; ++k)
                CHECK(in_hull(hull, bezier_point(s, u(gen)), 1e-6));
        }
    }

    TEST_CASE("affine invariance")
    {
        std::mt19937_64 gen(4);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double a = u(gen), b = u(gen), c = u(gen), d = u(gen), tx = 10 * u(gen), ty = 10 * u(gen);
            auto f = [&](Vec2 p) { return Vec2{a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; };
            auto pts = random_points(gen, 2 + static_cast<int>(gen() % 11));
            std::vector<Vec2> mapped;
            for (const auto& p : pts)
                mapped.push_back(f(p));
            const double t = (u(gen) + 2.0) / 4.0;
            const Vec2 lhs = bezier_point(BezierShape(mapped, false), t);
            const Vec2 rhs = f(bezier_point(BezierShape(pts, false), t));
            CHECK(std::fabs(lhs.x - rhs.x) < 1e-6);
            CHECK(std::fabs(lhs.y - rhs.y) < 1e-6);
        }
    }

    TEST_CASE("parameter and construction checks")
    {
        const BezierShape s({{0, 0}, {1, 1}}, false);
        CHECK_THROWS_AS(bezier_point(s, -0.1), DomainError);
        CHECK_THROWS_AS(bezier_point(s, 1.1), DomainError);
        CHECK_THROWS_AS(BezierShape({{0, 0}}, false), DomainError);
        CHECK_THROWS_AS(BezierShape({{0, 0}, {1, 0}, {1, 1}}, true), DomainError);
        const BezierShape loop = BezierShape::closed_loop({{0, 0}, {1, 0}, {1, 1}});
        CHECK(loop.closed());
        CHECK(loop.degree() == 3);
        CHECK(loop.control_points().back() == loop.control_points().front());
    }

    TEST_CASE("polyline examples")
    {
        const BezierShape cubic({{0, 0}, {1, 3}, {4, 3}, {5, 0}}, false);
        const auto two = shape_polyline(cubic, 2);
        REQUIRE(two.size() == 2);
        CHECK(two[0] == Vec2{0, 0});
        CHECK(two[1] == Vec2{5, 0});

        const BezierShape line({{0, 0}, {4, 0}}, false);
        const auto five = shape_polyline(line, 5);
        REQUIRE(five.size() == 5);
        for (int i = 0; i < 5; ++i)
            CHECK(five[i].x == doctest::Approx(i).epsilon(1e-12));

        std::mt19937_64 gen(5);
        const auto loop = shape_polyline(BezierShape::closed_loop(random_points(gen, 6)), 100);
        CHECK(loop.front() == loop.back());
        CHECK_THROWS_AS(shape_polyline(line, 1), DomainError);
    }

    TEST_CASE("closed shape sampling is deterministic")
    {
        const ShapeSamplingSpec spec;
        Rng a(99), b(99);
        CHECK(sample_closed_shape(a, spec, 128, 96) == sample_closed_shape(b, spec, 128, 96));
    }

    TEST_CASE("sampled control points are stratified and closed")
    {
        ShapeSamplingSpec spec;
        spec.control_point_count = {7, 7};
        spec.radius = {0.2, 0.2};
        spec.center_jitter = 0.0;
        Rng rng(5);
        const BezierShape s = sample_bezier_shape(rng, spec, 200, 200);
        REQUIRE(s.control_points().size() == 8);
        CHECK(s.closed());
        double prev = -1e9;
        double first = 0;
        for (std::size_t i = 0; i < 7; ++i) {
            const Vec2 p = s.control_points()[i];
            CHECK(std::hypot(p.x - 100, p.y - 100) == doctest::Approx(40.0));
            double a = std::atan2(p.y - 100, p.x - 100);
            if (i == 0)
                first = a;
            while (a < prev)
                a += 2 * M_PI;
            CHECK(a - first < 2 * M_PI);
            prev = a;
        }
    }

    TEST_CASE("12-point equal-radius shapes cover 50-150% of the circle area")
    {
        ShapeSamplingSpec spec;
        spec.control_point_count = {12, 12};
        spec.radius = {0.25, 0.25};
        const int w = 256;
        const double circle = M_PI * std::pow(0.25 * w, 2);
        double total = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            const double area = static_cast<double>(count(sample_closed_shape(rng, spec, w, w)));
            CHECK(area >= 0.5 * circle);
            CHECK(area <= 1.5 * circle);
            total += area;
        }
        MESSAGE("mean area ratio " << total / 100 / circle);
    }

    TEST_CASE("sampled masks are never empty")
    {
        const ShapeSamplingSpec spec;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            Rng rng(seed);
            REQUIRE(count(sample_closed_shape(rng, spec, 64, 64)) > 0);
        }
    }

    TEST_CASE("shape spec validation")
    {
        ShapeSamplingSpec spec;
        spec.control_point_count = {2, 5};
        CHECK_THROWS_AS(validate(spec), ConfigError);
        spec = {};
        spec.radius = {0.3, 0.2};
        CHECK_THROWS_AS(validate(spec), ConfigError);
        spec = {};
        spec.curve_samples = 1;
        CHECK_THROWS_AS(validate(spec), ConfigError);
        CHECK_NOTHROW(validate(ShapeSamplingSpec{}));
    }
}

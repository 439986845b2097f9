#include "synthfm/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "synthfm/polygon.hpp"

namespace synthfm {
namespace {

constexpr int kShapeRetries = 16;

double binomial(int n, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c;
}

} // namespace

BezierShape::BezierShape(std::vector<Vec2> control_points, bool closed)
    : points_(std::move(control_points)), closed_(closed)
{
    if (points_.size() < 2)
        throw DomainError("a Bezier shape needs at least 2 control points");
    if (closed_ && !(points_.front() == points_.back()))
        throw DomainError("closed Bezier shape must repeat P0 as its last control point");
}

BezierShape BezierShape::closed_loop(std::vector<Vec2> points)
{
    if (points.empty())
        throw DomainError("a Bezier shape needs at least 2 control points");
    points.push_back(points.front());
    return BezierShape(std::move(points), true);
}

std::vector<double> bernstein_weights(int n, double t)
{
    std::vector<double> t_pow(static_cast<std::size_t>(n + 1), 1.0);
    std::vector<double> s_pow(static_cast<std::size_t>(n + 1), 1.0);
    const double s = 1.0 - t;
    for (int i = 1; i <= n; ++i) {
        t_pow[static_cast<std::size_t>(i)] = t_pow[static_cast<std::size_t>(i - 1)] * t;
        s_pow[static_cast<std::size_t>(i)] = s_pow[static_cast<std::size_t>(i - 1)] * s;
    }
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i)
        w[static_cast<std::size_t>(i)] =
            binomial(n, i) * s_pow[static_cast<std::size_t>(n - i)] * t_pow[static_cast<std::size_t>(i)];
    return w;
}

Vec2 bezier_point(const BezierShape& shape, double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("Bezier parameter t must lie in [0, 1]");
    const auto& p = shape.control_points();
    const std::vector<double> w = bernstein_weights(shape.degree(), t);
    Vec2 out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.x += w[i] * p[i].x;
        out.y += w[i] * p[i].y;
    }
    return out;
}

std::vector<Vec2> shape_polyline(const BezierShape& shape, int samples)
{
    if (samples < 2)
        throw DomainError("polyline needs at least 2 samples");
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        out.push_back(bezier_point(shape, static_cast<double>(i) / (samples - 1)));
    if (shape.closed())
        out.back() = out.front();
    return out;
}

void validate(const ShapeSamplingSpec& spec)
{
    const auto fail = [](const std::string& msg) { throw ConfigError("ShapeSamplingSpec." + msg); };
    if (spec.control_point_count.lo < 4 || spec.control_point_count.hi > 16 ||
        spec.control_point_count.lo > spec.control_point_count.hi)
        fail("control_point_count_range must satisfy 4 <= lo <= hi <= 16");
    if (!(spec.radius.lo > 0.0) || !(spec.radius.hi < 0.5) || spec.radius.lo > spec.radius.hi)
        fail("radius_range must satisfy 0 < lo <= hi < 0.5");
    if (!(spec.center_jitter >= 0.0 && spec.center_jitter <= 0.5))
        fail("center_jitter must lie in [0, 0.5]");
    if (spec.curve_samples < 64)
        fail("curve_samples must be >= 64");
}

BezierShape sample_bezier_shape(Rng& rng, const ShapeSamplingSpec& spec, int width, int height)
{
    const int k = rng.uniform_int(spec.control_point_count.lo, spec.control_point_count.hi);
    const double min_dim = std::min(width, height);
    const double cx = 0.5 * width + rng.uniform(-spec.center_jitter, spec.center_jitter) * width;
    const double cy = 0.5 * height + rng.uniform(-spec.center_jitter, spec.center_jitter) * height;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double sector = 2.0 * std::numbers::pi / k;

    std::vector<Vec2> points;
    points.reserve(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i < k; ++i) {
        const double angle = phase + (i + rng.uniform()) * sector;
        const double radius = rng.uniform(spec.radius.lo, spec.radius.hi) * min_dim;
        points.push_back({cx + radius * std::cos(angle), cy + radius * std::sin(angle)});
    }
    return BezierShape::closed_loop(std::move(points));
}

BinaryMask sample_closed_shape(Rng& rng, const ShapeSamplingSpec& spec, int width, int height)
{
    if (spec.radius.hi * std::min(width, height) < 4.0)
        throw DomainError("canvas too small for the configured shape radius");
    for (int attempt = 0; attempt < kShapeRetries; ++attempt) {
        const BezierShape shape = sample_bezier_shape(rng, spec, width, height);
        const std::vector<Vec2> outline = shape_polyline(shape, spec.curve_samples);
        BinaryMask mask = fill_polygon(outline, width, height);
        if (count(mask) > 0)
            return mask;
    }
    throw GenerationError("closed shape stayed empty after " + std::to_string(kShapeRetries) + " attempts",
                          rng.seed());
}

} // namespace synthfm

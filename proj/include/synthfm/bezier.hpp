#pragma once

#include <vector>

#include "synthfm/image.hpp"
#include "synthfm/rng.hpp"

namespace synthfm {

/// Bezier curve of degree n = control_points.size() - 1.
class BezierShape {
public:
    /// Throws DomainError for fewer than 2 points, or when `closed` is set
    /// and the last point differs from the first.
    BezierShape(std::vector<Vec2> control_points, bool closed);

    /// Builds a closed shape by appending a copy of the first point.
    static BezierShape closed_loop(std::vector<Vec2> points);

    const std::vector<Vec2>& control_points() const noexcept { return points_; }
    bool closed() const noexcept { return closed_; }
    int degree() const noexcept { return static_cast<int>(points_.size()) - 1; }

private:
    std::vector<Vec2> points_;
    bool closed_;
};

/// Bernstein weights C(n,i) (1-t)^(n-i) t^i for i = 0..n.
std::vector<double> bernstein_weights(int n, double t);

/// B(t) = sum_i C(n,i) (1-t)^(n-i) t^i P_i. Throws DomainError for t outside [0, 1].
Vec2 bezier_point(const BezierShape& shape, double t);

/// Evaluates the curve at t = i / (samples - 1), i = 0..samples-1.
std::vector<Vec2> shape_polyline(const BezierShape& shape, int samples);

struct IntRange {
    int lo = 0;
    int hi = 0;

    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Range&, const Range&) = default;
};

struct ShapeSamplingSpec {
    IntRange control_point_count{4, 12};
    /// Fraction of min(width, height).
    Range radius{0.10, 0.35};
    /// Maximum center offset as a fraction of each canvas dimension.
    double center_jitter = 0.25;
    int curve_samples = 512;

    friend bool operator==(const ShapeSamplingSpec&, const ShapeSamplingSpec&) = default;
};

/// Throws ConfigError when a field violates its documented bounds.
void validate(const ShapeSamplingSpec& spec);

/// Random closed shape: k control points at polar positions around a
/// jittered center, angles stratified over k equal sectors and ascending,
/// closed by repeating P0.
BezierShape sample_bezier_shape(Rng& rng, const ShapeSamplingSpec& spec, int width, int height);

/// Rasterized random closed shape, guaranteed nonempty. Retries degenerate
/// draws; throws GenerationError (with the rng seed) when the budget runs out.
BinaryMask sample_closed_shape(Rng& rng, const ShapeSamplingSpec& spec, int width, int height);

} // namespace synthfm

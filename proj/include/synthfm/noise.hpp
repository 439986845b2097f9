#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "synthfm/bezier.hpp"
#include "synthfm/image.hpp"
#include "synthfm/rng.hpp"

namespace synthfm {

// Noise models. None of them clamp; clamping happens once when a scene is
// finalized.

/// out = in + N(0, sigma^2), independently per pixel.
ScalarImage apply_gaussian(const ScalarImage& image, double sigma, Rng& rng);

/// out = Poisson(in * scale) / scale. `scale` is photons per unit intensity.
/// Throws DomainError on negative input.
ScalarImage apply_poisson(const ScalarImage& image, double scale, Rng& rng);

/// out = in + in * N(0, sigma^2).
ScalarImage apply_speckle(const ScalarImage& image, double sigma, Rng& rng);

/// out = sqrt((in + n1)^2 + n2^2), n1, n2 ~ N(0, sigma^2). Throws DomainError on negative input.
ScalarImage apply_rician(const ScalarImage& image, double sigma, Rng& rng);

struct PerlinParams {
    double base_frequency = 4.0; ///< lattice cells across the image
    int octaves = 1;
    double persistence = 0.5;
    double amplitude = 0.1;
    std::uint64_t seed = 0;

    friend bool operator==(const PerlinParams&, const PerlinParams&) = default;
};

/// Classic 2-D gradient noise with permutation lattice and quintic fade.
/// Pixel (x, y) samples lattice coordinate (x, y) * base_frequency / width
/// (resp. height) in the base octave, octave o uses frequency * 2^o and
/// weight persistence^o. Output is scaled so the theoretical extreme equals
/// `amplitude`.
ScalarImage perlin_field(int width, int height, const PerlinParams& params);

/// Single-octave raw noise in [-sqrt(1/2), sqrt(1/2)] at lattice coordinates (x, y).
class PerlinLattice {
public:
    explicit PerlinLattice(std::uint64_t seed);
    double operator()(double x, double y) const noexcept;

    static constexpr double max_magnitude = 0.70710678118654752440;

private:
    std::array<std::uint8_t, 512> perm_;
};

struct GaussianNoise {
    double sigma = 0.0;
    friend bool operator==(const GaussianNoise&, const GaussianNoise&) = default;
};
struct PoissonNoise {
    double scale = 100.0;
    friend bool operator==(const PoissonNoise&, const PoissonNoise&) = default;
};
struct PerlinNoise {
    PerlinParams params;
    friend bool operator==(const PerlinNoise&, const PerlinNoise&) = default;
};
struct SpeckleNoise {
    double sigma = 0.0;
    friend bool operator==(const SpeckleNoise&, const SpeckleNoise&) = default;
};
struct RicianNoise {
    double sigma = 0.0;
    friend bool operator==(const RicianNoise&, const RicianNoise&) = default;
};
struct BlurNoise {
    double sigma = 0.0;
    friend bool operator==(const BlurNoise&, const BlurNoise&) = default;
};

/// One concrete, fully parameterized noise application.
using NoiseSpec = std::variant<GaussianNoise, PoissonNoise, PerlinNoise, SpeckleNoise, RicianNoise, BlurNoise>;

enum class NoiseKind { gaussian, poisson, perlin, speckle, rician, blur };
inline constexpr int kNoiseKindCount = 6;

NoiseKind kind_of(const NoiseSpec& spec) noexcept;
const char* to_string(NoiseKind kind);

/// Applies exactly one model. Perlin is additive.
ScalarImage apply_noise(const ScalarImage& image, const NoiseSpec& spec, Rng& rng);

/// Parameter ranges and how many kinds to draw per image.
struct NoiseStackSpec {
    IntRange count{0, 3};
    Range gaussian_sigma{0.01, 0.10};
    Range poisson_scale{20.0, 200.0};
    Range speckle_sigma{0.05, 0.30};
    Range rician_sigma{0.01, 0.10};
    Range perlin_base_frequency{2.0, 16.0};
    IntRange perlin_octaves{1, 4};
    Range perlin_persistence{0.5, 0.5};
    Range perlin_amplitude{0.05, 0.20};
    Range blur_sigma{0.0, 3.0};

    friend bool operator==(const NoiseStackSpec&, const NoiseStackSpec&) = default;
};

void validate(const NoiseStackSpec& spec);

/// Application order of the stack: texture first, sensor noise next, blur last.
inline constexpr std::array<NoiseKind, kNoiseKindCount> kNoiseOrder{
    NoiseKind::perlin, NoiseKind::poisson, NoiseKind::speckle,
    NoiseKind::rician, NoiseKind::gaussian, NoiseKind::blur,
};

struct NoiseStackResult {
    ScalarImage image;
    std::vector<NoiseSpec> applied; ///< in application order
};

/// Draws a count, picks that many distinct kinds uniformly without
/// replacement, draws their parameters and applies them in kNoiseOrder.
/// Poisson and Rician see their input floored at zero.
NoiseStackResult apply_noise_stack(const ScalarImage& image, const NoiseStackSpec& spec, Rng& rng);

} // namespace synthfm

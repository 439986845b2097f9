#include "synthfm/noise.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "synthfm/blur.hpp"

namespace synthfm {
namespace {

void require_non_negative(const ScalarImage& image, const char* model)
{
    for (float v : image.pixels())
        if (v < 0.0f)
            throw DomainError(std::string(model) + " noise requires non-negative intensities");
}

ScalarImage floored_at_zero(const ScalarImage& image)
{
    ScalarImage out = image;
    for (float& v : out.pixels())
        v = v > 0.0f ? v : 0.0f;
    return out;
}

constexpr double kDiag = 0.70710678118654752440;
constexpr std::array<std::array<double, 2>, 8> kGradients{{
    {1.0, 0.0}, {kDiag, kDiag}, {0.0, 1.0}, {-kDiag, kDiag},
    {-1.0, 0.0}, {-kDiag, -kDiag}, {0.0, -1.0}, {kDiag, -kDiag},
}};

inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }
inline double lerp(double a, double b, double t) { return a + t * (b - a); }

} // namespace

ScalarImage apply_gaussian(const ScalarImage& image, double sigma, Rng& rng)
{
    if (!(sigma >= 0.0))
        throw DomainError("gaussian sigma must be >= 0");
    if (sigma == 0.0)
        return image;
    ScalarImage out = image;
    std::normal_distribution<double> normal(0.0, sigma);
    for (float& v : out.pixels())
        v = static_cast<float>(v + normal(rng.engine()));
    return out;
}

ScalarImage apply_poisson(const ScalarImage& image, double scale, Rng& rng)
{
    if (!(scale > 0.0))
        throw DomainError("poisson scale must be > 0");
    require_non_negative(image, "poisson");
    ScalarImage out = image;
    using Dist = std::poisson_distribution<long long>;
    Dist dist;
    double cached_mean = -1.0;
    Dist::param_type param;
    for (float& v : out.pixels()) {
        const double mean = static_cast<double>(v) * scale;
        if (mean == 0.0) {
            v = 0.0f;
            continue;
        }
        if (mean != cached_mean) {
            param = Dist::param_type(mean);
            cached_mean = mean;
        }
        v = static_cast<float>(static_cast<double>(dist(rng.engine(), param)) / scale);
    }
    return out;
}

ScalarImage apply_speckle(const ScalarImage& image, double sigma, Rng& rng)
{
    if (!(sigma >= 0.0))
        throw DomainError("speckle sigma must be >= 0");
    if (sigma == 0.0)
        return image;
    ScalarImage out = image;
    std::normal_distribution<double> normal(0.0, sigma);
    for (float& v : out.pixels()) {
        const double x = v;
        v = static_cast<float>(x + x * normal(rng.engine()));
    }
    return out;
}

ScalarImage apply_rician(const ScalarImage& image, double sigma, Rng& rng)
{
    if (!(sigma >= 0.0))
        throw DomainError("rician sigma must be >= 0");
    require_non_negative(image, "rician");
    if (sigma == 0.0)
        return image;
    ScalarImage out = image;
    std::normal_distribution<double> normal(0.0, sigma);
    for (float& v : out.pixels()) {
        const double re = v + normal(rng.engine());
        const double im = normal(rng.engine());
        v = static_cast<float>(std::sqrt(re * re + im * im));
    }
    return out;
}

PerlinLattice::PerlinLattice(std::uint64_t seed)
{
    std::array<std::uint8_t, 256> p{};
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    Rng rng(seed);
    for (std::size_t i = p.size() - 1; i > 0; --i)
        std::swap(p[i], p[rng.index(i + 1)]);
    for (std::size_t i = 0; i < perm_.size(); ++i)
        perm_[i] = p[i & 255];
}

double PerlinLattice::operator()(double x, double y) const noexcept
{
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const double dx = x - fx;
    const double dy = y - fy;
    const int xi = static_cast<int>(static_cast<long long>(fx) & 255);
    const int yi = static_cast<int>(static_cast<long long>(fy) & 255);

    const auto corner = [&](int cx, int cy, double ox, double oy) {
        const auto& g = kGradients[perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(xi + cx)] + yi + cy)] & 7];
        return g[0] * ox + g[1] * oy;
    };
    const double n00 = corner(0, 0, dx, dy);
    const double n10 = corner(1, 0, dx - 1.0, dy);
    const double n01 = corner(0, 1, dx, dy - 1.0);
    const double n11 = corner(1, 1, dx - 1.0, dy - 1.0);
    const double u = fade(dx);
    const double v = fade(dy);
    return lerp(lerp(n00, n10, u), lerp(n01, n11, u), v);
}

ScalarImage perlin_field(int width, int height, const PerlinParams& params)
{
    if (!(params.base_frequency >= 1.0))
        throw DomainError("perlin base_frequency must be >= 1");
    if (params.octaves < 1)
        throw DomainError("perlin octaves must be >= 1");

    const PerlinLattice lattice(params.seed);
    double norm = 0.0;
    for (int o = 0; o < params.octaves; ++o)
        norm += std::pow(params.persistence, o);
    norm *= PerlinLattice::max_magnitude;
    const double scale = params.amplitude / norm;

    ScalarImage out(width, height);
    const double sx = params.base_frequency / width;
    const double sy = params.base_frequency / height;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double total = 0.0;
            double freq = 1.0;
            double weight = 1.0;
            for (int o = 0; o < params.octaves; ++o) {
                total += weight * lattice(x * sx * freq, y * sy * freq);
                freq *= 2.0;
                weight *= params.persistence;
            }
            out(x, y) = static_cast<float>(total * scale);
        }
    }
    return out;
}

NoiseKind kind_of(const NoiseSpec& spec) noexcept
{
    return static_cast<NoiseKind>(spec.index());
}

const char* to_string(NoiseKind kind)
{
    switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::poisson: return "poisson";
    case NoiseKind::perlin: return "perlin";
    case NoiseKind::speckle: return "speckle";
    case NoiseKind::rician: return "rician";
    case NoiseKind::blur: return "blur";
    }
    return "unknown";
}

ScalarImage apply_noise(const ScalarImage& image, const NoiseSpec& spec, Rng& rng)
{
    struct Visitor {
        const ScalarImage& image;
        Rng& rng;
        ScalarImage operator()(const GaussianNoise& n) const { return apply_gaussian(image, n.sigma, rng); }
        ScalarImage operator()(const PoissonNoise& n) const { return apply_poisson(image, n.scale, rng); }
        ScalarImage operator()(const SpeckleNoise& n) const { return apply_speckle(image, n.sigma, rng); }
        ScalarImage operator()(const RicianNoise& n) const { return apply_rician(image, n.sigma, rng); }
        ScalarImage operator()(const BlurNoise& n) const { return gaussian_blur(image, n.sigma); }
        ScalarImage operator()(const PerlinNoise& n) const
        {
            ScalarImage out = image;
            const ScalarImage field = perlin_field(image.width(), image.height(), n.params);
            auto dst = out.pixels();
            auto src = field.pixels();
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] += src[i];
            return out;
        }
    };
    return std::visit(Visitor{image, rng}, spec);
}

void validate(const NoiseStackSpec& spec)
{
    const auto fail = [](const std::string& msg) { throw ConfigError("NoiseStackSpec." + msg); };
    const auto ordered = [](const Range& r) { return r.lo <= r.hi; };
    if (spec.count.lo < 0 || spec.count.hi > kNoiseKindCount || spec.count.lo > spec.count.hi)
        fail("count_range must satisfy 0 <= lo <= hi <= 6");
    if (!(spec.gaussian_sigma.lo >= 0.0) || !ordered(spec.gaussian_sigma))
        fail("gaussian_sigma must be an ordered range with lo >= 0");
    if (!(spec.poisson_scale.lo > 0.0) || !ordered(spec.poisson_scale))
        fail("poisson_scale must be an ordered range with lo > 0");
    if (!(spec.speckle_sigma.lo >= 0.0) || !ordered(spec.speckle_sigma))
        fail("speckle_sigma must be an ordered range with lo >= 0");
    if (!(spec.rician_sigma.lo >= 0.0) || !ordered(spec.rician_sigma))
        fail("rician_sigma must be an ordered range with lo >= 0");
    if (!(spec.perlin_base_frequency.lo >= 1.0) || !ordered(spec.perlin_base_frequency))
        fail("perlin_base_frequency must be an ordered range with lo >= 1");
    if (spec.perlin_octaves.lo < 1 || spec.perlin_octaves.hi > 6 || spec.perlin_octaves.lo > spec.perlin_octaves.hi)
        fail("perlin_octaves must satisfy 1 <= lo <= hi <= 6");
    if (!(spec.perlin_persistence.lo > 0.0) || !(spec.perlin_persistence.hi <= 1.0) ||
        !ordered(spec.perlin_persistence))
        fail("perlin_persistence must lie in (0, 1]");
    if (!(spec.perlin_amplitude.lo >= 0.0) || !ordered(spec.perlin_amplitude))
        fail("perlin_amplitude must be an ordered range with lo >= 0");
    if (!(spec.blur_sigma.lo >= 0.0) || !ordered(spec.blur_sigma))
        fail("blur_sigma must be an ordered range with lo >= 0");
}

NoiseStackResult apply_noise_stack(const ScalarImage& image, const NoiseStackSpec& spec, Rng& rng)
{
    const int n = rng.uniform_int(spec.count.lo, spec.count.hi);

    std::array<NoiseKind, kNoiseKindCount> kinds{NoiseKind::gaussian, NoiseKind::poisson, NoiseKind::perlin,
                                                 NoiseKind::speckle, NoiseKind::rician, NoiseKind::blur};
    for (int i = 0; i < n; ++i)
        std::swap(kinds[static_cast<std::size_t>(i)],
                  kinds[static_cast<std::size_t>(i) + rng.index(kinds.size() - static_cast<std::size_t>(i))]);
    std::array<bool, kNoiseKindCount> selected{};
    for (int i = 0; i < n; ++i)
        selected[static_cast<std::size_t>(kinds[static_cast<std::size_t>(i)])] = true;

    NoiseStackResult result{image, {}};
    for (NoiseKind kind : kNoiseOrder) {
        if (!selected[static_cast<std::size_t>(kind)])
            continue;
        NoiseSpec applied;
        switch (kind) {
        case NoiseKind::gaussian:
            applied = GaussianNoise{rng.uniform(spec.gaussian_sigma.lo, spec.gaussian_sigma.hi)};
            break;
        case NoiseKind::poisson:
            applied = PoissonNoise{rng.uniform(spec.poisson_scale.lo, spec.poisson_scale.hi)};
            break;
        case NoiseKind::perlin: {
            PerlinParams p;
            p.base_frequency = rng.uniform(spec.perlin_base_frequency.lo, spec.perlin_base_frequency.hi);
            p.octaves = rng.uniform_int(spec.perlin_octaves.lo, spec.perlin_octaves.hi);
            p.persistence = rng.uniform(spec.perlin_persistence.lo, spec.perlin_persistence.hi);
            p.amplitude = rng.uniform(spec.perlin_amplitude.lo, spec.perlin_amplitude.hi);
            p.seed = rng.next_u64();
            applied = PerlinNoise{p};
            break;
        }
        case NoiseKind::speckle:
            applied = SpeckleNoise{rng.uniform(spec.speckle_sigma.lo, spec.speckle_sigma.hi)};
            break;
        case NoiseKind::rician:
            applied = RicianNoise{rng.uniform(spec.rician_sigma.lo, spec.rician_sigma.hi)};
            break;
        case NoiseKind::blur:
            applied = BlurNoise{rng.uniform(spec.blur_sigma.lo, spec.blur_sigma.hi)};
            break;
        }
        if (kind == NoiseKind::poisson || kind == NoiseKind::rician)
            result.image = apply_noise(floored_at_zero(result.image), applied, rng);
        else
            result.image = apply_noise(result.image, applied, rng);
        result.applied.push_back(applied);
    }
    return result;
}

} // namespace synthfm

#include "synthfm/blur.hpp"

#include <cmath>

#include "synthfm/kernels.hpp"

namespace synthfm {

int reflect_index(int i, int n) noexcept
{
    if (n == 1)
        return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0)
        i += period;
    return i < n ? i : period - 1 - i;
}

std::vector<float> gaussian_kernel(double sigma)
{
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double v = std::exp(-0.5 * (k * k) / (sigma * sigma));
        w[static_cast<std::size_t>(k + radius)] = v;
        sum += v;
    }
    std::vector<float> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        out[i] = static_cast<float>(w[i] / sum);
    return out;
}

ScalarImage gaussian_blur(const ScalarImage& image, double sigma)
{
    if (!(sigma >= 0.0))
        throw DomainError("blur sigma must be >= 0");
    if (sigma == 0.0 || image.size() == 0)
        return image;

    const auto& k = kernels::active();
    const std::vector<float> weights = gaussian_kernel(sigma);
    const int radius = static_cast<int>(weights.size() / 2);
    const int w = image.width();
    const int h = image.height();

    ScalarImage horiz(w, h);
    std::vector<float> padded(static_cast<std::size_t>(w + 2 * radius));
    for (int y = 0; y < h; ++y) {
        auto row = image.row(y);
        for (int i = 0; i < w + 2 * radius; ++i)
            padded[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(reflect_index(i - radius, w))];
        k.convolve_row(padded.data(), weights.data(), weights.size(), horiz.row(y).data(),
                       static_cast<std::size_t>(w));
    }

    ScalarImage out(w, h);
    std::vector<const float*> rows(weights.size());
    for (int y = 0; y < h; ++y) {
        for (int t = 0; t < 2 * radius + 1; ++t)
            rows[static_cast<std::size_t>(t)] = horiz.row(reflect_index(y + t - radius, h)).data();
        k.convolve_rows(rows.data(), weights.data(), weights.size(), out.row(y).data(), static_cast<std::size_t>(w));
    }
    return out;
}

} // namespace synthfm

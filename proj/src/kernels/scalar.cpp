#include "kernels_impl.hpp"

namespace synthfm::kernels {
namespace {

void convolve_row(const float* src, const float* weights, std::size_t taps, float* dst, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        float acc = 0.0f;
        for (std::size_t k = 0; k < taps; ++k)
            acc = acc + weights[k] * src[i + k];
        dst[i] = acc;
    }
}

void convolve_rows(const float* const* rows, const float* weights, std::size_t taps, float* dst, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        float acc = 0.0f;
        for (std::size_t k = 0; k < taps; ++k)
            acc = acc + weights[k] * rows[k][i];
        dst[i] = acc;
    }
}

void and3(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c, std::uint8_t* dst, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = static_cast<std::uint8_t>(a[i] & b[i] & c[i]);
}

void or3(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c, std::uint8_t* dst, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = static_cast<std::uint8_t>(a[i] | b[i] | c[i]);
}

void clamp01(float* data, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        float v = data[i];
        v = v > 0.0f ? v : 0.0f;
        v = v < 1.0f ? v : 1.0f;
        data[i] = v;
    }
}

std::uint64_t count_nonzero(const std::uint8_t* data, std::size_t n)
{
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += data[i] != 0;
    return total;
}

std::uint64_t count_and(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += (a[i] != 0) & (b[i] != 0);
    return total;
}

void argmax_update(const float* field, float* best, std::int32_t* label, std::int32_t id, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        if (field[i] > best[i]) {
            best[i] = field[i];
            label[i] = id;
        }
    }
}

} // namespace

const KernelTable& scalar_table()
{
    static const KernelTable table{
        "scalar", convolve_row, convolve_rows, and3, or3, clamp01, count_nonzero, count_and, argmax_update,
    };
    return table;
}

} // namespace synthfm::kernels

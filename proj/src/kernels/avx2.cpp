#include <immintrin.h>

#include "kernels_impl.hpp"

namespace synthfm::kernels {
namespace {

void convolve_row(const float* src, const float* weights, std::size_t taps, float* dst, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 acc = _mm256_setzero_ps();
        for (std::size_t k = 0; k < taps; ++k)
            acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(weights[k]), _mm256_loadu_ps(src + i + k)));
        _mm256_storeu_ps(dst + i, acc);
    }
    for (; i < n; ++i) {
        float acc = 0.0f;
        for (std::size_t k = 0; k < taps; ++k)
            acc = acc + weights[k] * src[i + k];
        dst[i] = acc;
    }
}

void convolve_rows(const float* const* rows, const float* weights, std::size_t taps, float* dst, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 acc = _mm256_setzero_ps();
        for (std::size_t k = 0; k < taps; ++k)
            acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(weights[k]), _mm256_loadu_ps(rows[k] + i)));
        _mm256_storeu_ps(dst + i, acc);
    }
    for (; i < n; ++i) {
        float acc = 0.0f;
        for (std::size_t k = 0; k < taps; ++k)
            acc = acc + weights[k] * rows[k][i];
        dst[i] = acc;
    }
}

inline __m256i load(const std::uint8_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(std::uint8_t* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

void and3(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c, std::uint8_t* dst, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32)
        store(dst + i, _mm256_and_si256(_mm256_and_si256(load(a + i), load(b + i)), load(c + i)));
    for (; i < n; ++i)
        dst[i] = static_cast<std::uint8_t>(a[i] & b[i] & c[i]);
}

void or3(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c, std::uint8_t* dst, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32)
        store(dst + i, _mm256_or_si256(_mm256_or_si256(load(a + i), load(b + i)), load(c + i)));
    for (; i < n; ++i)
        dst[i] = static_cast<std::uint8_t>(a[i] | b[i] | c[i]);
}

void clamp01(float* data, std::size_t n)
{
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.0f);
    std::size_t i = 0;
    // max_ps/min_ps return the second operand on NaN, matching the scalar ternaries.
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(data + i, _mm256_min_ps(_mm256_max_ps(_mm256_loadu_ps(data + i), zero), one));
    for (; i < n; ++i) {
        float v = data[i];
        v = v > 0.0f ? v : 0.0f;
        v = v < 1.0f ? v : 1.0f;
        data[i] = v;
    }
}

std::uint64_t count_nonzero(const std::uint8_t* data, std::size_t n)
{
    const __m256i zero = _mm256_setzero_si256();
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const auto zeros = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(load(data + i), zero)));
        total += 32u - static_cast<unsigned>(__builtin_popcount(zeros));
    }
    for (; i < n; ++i)
        total += data[i] != 0;
    return total;
}

std::uint64_t count_and(const std::uint8_t* a, const std::uint8_t* b, std::size_t n)
{
    const __m256i zero = _mm256_setzero_si256();
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i either_zero =
            _mm256_or_si256(_mm256_cmpeq_epi8(load(a + i), zero), _mm256_cmpeq_epi8(load(b + i), zero));
        const auto bits = static_cast<std::uint32_t>(_mm256_movemask_epi8(either_zero));
        total += 32u - static_cast<unsigned>(__builtin_popcount(bits));
    }
    for (; i < n; ++i)
        total += (a[i] != 0) & (b[i] != 0);
    return total;
}

void argmax_update(const float* field, float* best, std::int32_t* label, std::int32_t id, std::size_t n)
{
    const __m256i ids = _mm256_set1_epi32(id);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 f = _mm256_loadu_ps(field + i);
        const __m256 b = _mm256_loadu_ps(best + i);
        const __m256 gt = _mm256_cmp_ps(f, b, _CMP_GT_OQ);
        _mm256_storeu_ps(best + i, _mm256_blendv_ps(b, f, gt));
        const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(label + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(label + i),
                            _mm256_blendv_epi8(l, ids, _mm256_castps_si256(gt)));
    }
    for (; i < n; ++i) {
        if (field[i] > best[i]) {
            best[i] = field[i];
            label[i] = id;
        }
    }
}

} // namespace

const KernelTable& avx2_table_unchecked()
{
    static const KernelTable table{
        "avx2", convolve_row, convolve_rows, and3, or3, clamp01, count_nonzero, count_and, argmax_update,
    };
    return table;
}

} // namespace synthfm::kernels

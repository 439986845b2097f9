#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference and, on
// x86-64, an AVX2 variant. Variants must agree bit for bit: float kernels
// accumulate taps in the same order and never fuse multiply-add.

namespace synthfm::kernels {

struct KernelTable {
    const char* name;

    /// dst[i] = sum_k weights[k] * src[i + k], k ascending, for i in [0, n).
    /// src holds n + taps - 1 values.
    void (*convolve_row)(const float* src, const float* weights, std::size_t taps, float* dst, std::size_t n);

    /// dst[i] = sum_k weights[k] * rows[k][i], k ascending.
    void (*convolve_rows)(const float* const* rows, const float* weights, std::size_t taps, float* dst,
                          std::size_t n);

    /// Elementwise AND / OR of three 0/1 byte rows (3-tap min / max).
    void (*and3)(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c, std::uint8_t* dst,
                 std::size_t n);
    void (*or3)(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* c, std::uint8_t* dst,
                std::size_t n);

    /// v = v > 0 ? v : 0; v = v < 1 ? v : 1  (NaN maps to 0).
    void (*clamp01)(float* data, std::size_t n);

    std::uint64_t (*count_nonzero)(const std::uint8_t* data, std::size_t n);
    /// Number of i with a[i] != 0 and b[i] != 0.
    std::uint64_t (*count_and)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

    /// if field[i] > best[i]: best[i] = field[i], label[i] = id. Ties keep the older label.
    void (*argmax_update)(const float* field, float* best, std::int32_t* label, std::int32_t id, std::size_t n);
};

const KernelTable& scalar_table();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_table();

/// Table used by the library. Chosen once: AVX2 when available unless the
/// environment variable SYNTHFM_SIMD=scalar is set.
const KernelTable& active();

} // namespace synthfm::kernels

#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "synthfm/kernels.hpp"

using namespace synthfm::kernels;

namespace {

const KernelTable* simd()
{
    return avx2_table();
}

bool same_bits(const std::vector<float>& a, const std::vector<float>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

std::vector<float> random_floats(std::mt19937_64& gen, std::size_t n, float lo, float hi)
{
    std::uniform_real_distribution<float> d(lo, hi);
    std::vector<float> v(n);
    for (auto& x : v)
        x = d(gen);
    return v;
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& gen, std::size_t n)
{
    std::vector<std::uint8_t> v(n);
    for (auto& x : v)
        x = gen() & 1;
    return v;
}

} // namespace

TEST_SUITE("kernels")
{
    TEST_CASE("active table is one of the known variants")
    {
        const KernelTable& t = active();
        CHECK((&t == &scalar_table() || &t == simd()));
    }

    TEST_CASE("scalar convolve_row is the plain tap sum")
    {
        const std::vector<float> src{1, 2, 3, 4, 5};
        const std::vector<float> w{0.25f, 0.5f, 0.25f};
        std::vector<float> dst(3);
        scalar_table().convolve_row(src.data(), w.data(), w.size(), dst.data(), dst.size());
        CHECK(dst == std::vector<float>{2, 3, 4});
    }

    TEST_CASE("simd kernels match scalar bit for bit")
    {
        if (!simd()) {
            MESSAGE("no SIMD variant on this machine; skipped");
            return;
        }
        const KernelTable& s = scalar_table();
        const KernelTable& v = *simd();
        std::mt19937_64 gen(17);

        for (std::size_t n : {1u, 7u, 8u, 9u, 31u, 32u, 33u, 100u, 1024u}) {
            CAPTURE(n);
            for (std::size_t taps : {1u, 3u, 7u, 19u, 97u}) {
                const auto src = random_floats(gen, n + taps - 1, -2.0f, 2.0f);
                const auto w = random_floats(gen, taps, 0.0f, 1.0f);
                std::vector<float> a(n), b(n);
                s.convolve_row(src.data(), w.data(), taps, a.data(), n);
                v.convolve_row(src.data(), w.data(), taps, b.data(), n);
                CHECK(same_bits(a, b));

                std::vector<std::vector<float>> rows;
                std::vector<const float*> ptrs;
                for (std::size_t k = 0; k < taps; ++k)
                    rows.push_back(random_floats(gen, n, -1.0f, 1.0f));
                for (auto& r : rows)
                    ptrs.push_back(r.data());
                s.convolve_rows(ptrs.data(), w.data(), taps, a.data(), n);
                v.convolve_rows(ptrs.data(), w.data(), taps, b.data(), n);
                CHECK(same_bits(a, b));
            }

            const auto x = random_bits(gen, n), y = random_bits(gen, n), z = random_bits(gen, n);
            std::vector<std::uint8_t> a(n), b(n);
            s.and3(x.data(), y.data(), z.data(), a.data(), n);
            v.and3(x.data(), y.data(), z.data(), b.data(), n);
            CHECK(a == b);
            s.or3(x.data(), y.data(), z.data(), a.data(), n);
            v.or3(x.data(), y.data(), z.data(), b.data(), n);
            CHECK(a == b);

            CHECK(s.count_nonzero(x.data(), n) == v.count_nonzero(x.data(), n));
            CHECK(s.count_and(x.data(), y.data(), n) == v.count_and(x.data(), y.data(), n));

            auto c1 = random_floats(gen, n, -0.5f, 1.5f);
            if (n > 2) {
                c1[0] = std::numeric_limits<float>::quiet_NaN();
                c1[1] = -0.0f;
            }
            auto c2 = c1;
            s.clamp01(c1.data(), n);
            v.clamp01(c2.data(), n);
            CHECK(same_bits(c1, c2));

            const auto field = random_floats(gen, n, 0.0f, 1.0f);
            auto best1 = random_floats(gen, n, 0.0f, 1.0f);
            if (n > 3)
                best1[3] = field[3]; // tie keeps the old label
            auto best2 = best1;
            std::vector<std::int32_t> l1(n, 1), l2(n, 1);
            s.argmax_update(field.data(), best1.data(), l1.data(), 5, n);
            v.argmax_update(field.data(), best2.data(), l2.data(), 5, n);
            CHECK(same_bits(best1, best2));
            CHECK(l1 == l2);
            if (n > 3)
                CHECK(l1[3] == 1);
        }
    }

    TEST_CASE("clamp01 maps NaN to zero and saturates")
    {
        std::vector<float> v{std::numeric_limits<float>::quiet_NaN(), -1.0f, 0.25f, 7.0f};
        scalar_table().clamp01(v.data(), v.size());
        CHECK(v == std::vector<float>{0.0f, 0.0f, 0.25f, 1.0f});
    }
}

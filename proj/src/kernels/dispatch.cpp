#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace synthfm::kernels {

const KernelTable* avx2_table()
{
#if defined(SYNTHFM_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active()
{
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("SYNTHFM_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar")
            return scalar_table();
        if (const KernelTable* t = avx2_table())
            return *t;
        return scalar_table();
    }();
    return chosen;
}

} // namespace synthfm::kernels

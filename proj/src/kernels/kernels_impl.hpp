#pragma once

#include "synthfm/kernels.hpp"

namespace synthfm::kernels {

#if defined(SYNTHFM_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

} // namespace synthfm::kernels

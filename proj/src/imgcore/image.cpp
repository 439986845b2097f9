#include "synthfm/image.hpp"

#include "synthfm/kernels.hpp"

namespace synthfm {

std::size_t count(const BinaryMask& mask)
{
    return static_cast<std::size_t>(kernels::active().count_nonzero(mask.data(), mask.size()));
}

BinaryMask complement(const BinaryMask& mask)
{
    BinaryMask out(mask.width(), mask.height());
    auto src = mask.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = src[i] ? 0 : 1;
    return out;
}

BinaryMask mask_of_label(const LabelMap& labels, std::int32_t label)
{
    BinaryMask out(labels.width(), labels.height());
    auto src = labels.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = src[i] == label;
    return out;
}

void clamp01(ScalarImage& image)
{
    kernels::active().clamp01(image.data(), image.size());
}

} // namespace synthfm

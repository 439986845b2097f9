#include "synthfm/morphology.hpp"

#include <vector>

#include "synthfm/kernels.hpp"

namespace synthfm {
namespace {

using Op3 = void (*)(const std::uint8_t*, const std::uint8_t*, const std::uint8_t*, std::uint8_t*, std::size_t);

// One 3-tap pass along rows then columns; `op` is and3 (erode) or or3 (dilate).
BinaryMask step(const BinaryMask& in, StructuringElement se, std::uint8_t border, Op3 op)
{
    const int w = in.width();
    const int h = in.height();
    const auto n = static_cast<std::size_t>(w);

    BinaryMask horiz(w, h);
    std::vector<std::uint8_t> padded(n + 2, border);
    for (int y = 0; y < h; ++y) {
        auto row = in.row(y);
        std::copy(row.begin(), row.end(), padded.begin() + 1);
        op(padded.data(), padded.data() + 1, padded.data() + 2, horiz.row(y).data(), n);
    }

    // Column pass source: the horizontal result for square3, the raw input for cross3.
    const BinaryMask& vsrc = se == StructuringElement::square3 ? horiz : in;
    const std::vector<std::uint8_t> outside(n, border);
    BinaryMask out(w, h);
    std::vector<std::uint8_t> vert(n);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* up = y > 0 ? vsrc.row(y - 1).data() : outside.data();
        const std::uint8_t* down = y + 1 < h ? vsrc.row(y + 1).data() : outside.data();
        if (se == StructuringElement::square3) {
            op(up, vsrc.row(y).data(), down, out.row(y).data(), n);
        } else {
            op(up, vsrc.row(y).data(), down, vert.data(), n);
            op(horiz.row(y).data(), vert.data(), vert.data(), out.row(y).data(), n);
        }
    }
    return out;
}

BinaryMask iterate(const BinaryMask& mask, StructuringElement se, int iterations, Border border, Op3 op)
{
    if (iterations < 0)
        throw DomainError("morphology iterations must be >= 0");
    BinaryMask cur = mask;
    const std::uint8_t b = border == Border::foreground ? 1 : 0;
    for (int i = 0; i < iterations; ++i)
        cur = step(cur, se, b, op);
    return cur;
}

} // namespace

BinaryMask erode(const BinaryMask& mask, StructuringElement se, int iterations, Border border)
{
    return iterate(mask, se, iterations, border, kernels::active().and3);
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se, int iterations, Border border)
{
    return iterate(mask, se, iterations, border, kernels::active().or3);
}

const char* to_string(StructuringElement se)
{
    return se == StructuringElement::square3 ? "square3" : "cross3";
}

StructuringElement structuring_element_from_string(const std::string& name)
{
    if (name == "square3")
        return StructuringElement::square3;
    if (name == "cross3")
        return StructuringElement::cross3;
    throw DomainError("unknown structuring element '" + name + "'");
}

} // namespace synthfm

#include <bit>

#include "fci/kernels/pair_count.hpp"

namespace fci::kernels {

namespace {

ShiftPlan make_plan(const TorusLattice& lat, Coord delta) {
    const int w = lat.width();
    const int h = lat.height();
    const unsigned n = static_cast<unsigned>(w * h);
    const int d1 = TorusLattice::mod(delta.x1, w);
    const int d2 = TorusLattice::mod(delta.x2, h);

    ShiftPlan p;
    p.rot_low = static_cast<unsigned>((d1 + w * d2) % static_cast<int>(n));
    p.rot_high = static_cast<unsigned>(((d1 - w + w * d2) % static_cast<int>(n) +
                                        static_cast<int>(n)) %
                                       static_cast<int>(n));
    for (int s = 0; s < static_cast<int>(n); ++s) {
        const int col = s % w;
        if (col < w - d1)
            p.low_mask |= std::uint64_t{1} << s;
        else
            p.high_mask |= std::uint64_t{1} << s;
    }
    return p;
}

}  // namespace

PairCountTables make_pair_count_tables(const TorusLattice& lat) {
    if (lat.sites() > 64)
        throw std::invalid_argument("pair-count kernels need at most 64 sites");
    PairCountTables t;
    t.bits = lat.sites();
    t.full_mask = t.bits == 64 ? ~std::uint64_t{0}
                               : (std::uint64_t{1} << t.bits) - 1;
    std::size_t i = 0;
    for (const Coord& d : displacement_half(DisplacementSet::u1))
        t.m1_shifts[i++] = make_plan(lat, d);
    for (const Coord& d : displacement_half(DisplacementSet::u3))
        t.m1_shifts[i++] = make_plan(lat, d);
    i = 0;
    for (const Coord& d : displacement_half(DisplacementSet::u2))
        t.m2_shifts[i++] = make_plan(lat, d);
    return t;
}

void pair_counts_scalar(const PairCountTables& t, const std::uint64_t* masks,
                        std::size_t count, std::uint32_t* m1, std::uint32_t* m2) {
    const unsigned bits = static_cast<unsigned>(t.bits);
    const std::uint64_t full = t.full_mask;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t m = masks[i];
        std::uint32_t c1 = 0;
        for (const ShiftPlan& p : t.m1_shifts)
            c1 += static_cast<std::uint32_t>(std::popcount(m & apply_shift(p, m, bits, full)));
        std::uint32_t c2 = 0;
        for (const ShiftPlan& p : t.m2_shifts)
            c2 += static_cast<std::uint32_t>(std::popcount(m & apply_shift(p, m, bits, full)));
        m1[i] = c1;
        m2[i] = c2;
    }
}

}  // namespace fci::kernels

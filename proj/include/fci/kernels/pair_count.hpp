#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "fci/lattice.hpp"

namespace fci::kernels {

// Torus translation of an occupation bitmask by a fixed displacement,
// realized as two masked rotations of the N = W*H bit word: bits in
// low_mask rotate by rot_low, bits that wrap a row boundary rotate by
// rot_high.
struct ShiftPlan {
    std::uint64_t low_mask = 0;
    std::uint64_t high_mask = 0;
    unsigned rot_low = 0;
    unsigned rot_high = 0;
};

// Precomputed shift plans for one lattice geometry (sites <= 64).
// m1 plans cover one representative per {d, -d} pair of U1 and U3,
// m2 plans cover the half of U2, so each pair count is a plain sum of
// popcount(mask & shifted_mask) terms with no halving step.
struct PairCountTables {
    int bits = 0;
    std::uint64_t full_mask = 0;
    std::array<ShiftPlan, 6> m1_shifts{};
    std::array<ShiftPlan, 2> m2_shifts{};
};

PairCountTables make_pair_count_tables(const TorusLattice& lat);

inline std::uint64_t rotate_word(std::uint64_t m, unsigned k, unsigned bits,
                                 std::uint64_t full) {
    if (k == 0) return m;
    return ((m << k) | (m >> (bits - k))) & full;
}

inline std::uint64_t apply_shift(const ShiftPlan& p, std::uint64_t m, unsigned bits,
                                 std::uint64_t full) {
    return rotate_word(m & p.low_mask, p.rot_low, bits, full) |
           rotate_word(m & p.high_mask, p.rot_high, bits, full);
}

// Scalar reference kernel.
void pair_counts_scalar(const PairCountTables& t, const std::uint64_t* masks,
                        std::size_t count, std::uint32_t* m1, std::uint32_t* m2);

// AVX2 variant, 4 masks per step. Call only when avx2_available().
void pair_counts_avx2(const PairCountTables& t, const std::uint64_t* masks,
                      std::size_t count, std::uint32_t* m1, std::uint32_t* m2);

bool avx2_available() noexcept;

// Runtime-dispatched entry point; bit-identical to the scalar kernel.
void pair_counts_batch(const PairCountTables& t, const std::uint64_t* masks,
                       std::size_t count, std::uint32_t* m1, std::uint32_t* m2);

}  // namespace fci::kernels

// AVX2 variant of the pair-count kernel: 4 occupation masks per step.
// Compiled with -mavx2; callers go through pair_counts_batch.

#include "fci/kernels/pair_count.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace fci::kernels {

namespace {

inline __m256i rotate4(__m256i v, unsigned k, unsigned bits, __m256i full) {
    if (k == 0) return v;
    const __m256i l = _mm256_sll_epi64(v, _mm_cvtsi32_si128(static_cast<int>(k)));
    const __m256i r = _mm256_srl_epi64(v, _mm_cvtsi32_si128(static_cast<int>(bits - k)));
    return _mm256_and_si256(_mm256_or_si256(l, r), full);
}

inline __m256i apply_shift4(const ShiftPlan& p, __m256i m, unsigned bits, __m256i full) {
    const __m256i lo = rotate4(_mm256_and_si256(m, _mm256_set1_epi64x(static_cast<long long>(p.low_mask))),
                               p.rot_low, bits, full);
    const __m256i hi = rotate4(_mm256_and_si256(m, _mm256_set1_epi64x(static_cast<long long>(p.high_mask))),
                               p.rot_high, bits, full);
    return _mm256_or_si256(lo, hi);
}

// Per-64-bit-lane popcount via the nibble lookup trick.
inline __m256i popcount4(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i nib = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_shuffle_epi8(lut, _mm256_and_si256(v, nib));
    const __m256i hi = _mm256_shuffle_epi8(lut, _mm256_and_si256(_mm256_srli_epi16(v, 4), nib));
    return _mm256_sad_epu8(_mm256_add_epi8(lo, hi), _mm256_setzero_si256());
}

}  // namespace

void pair_counts_avx2(const PairCountTables& t, const std::uint64_t* masks,
                      std::size_t count, std::uint32_t* m1, std::uint32_t* m2) {
    const unsigned bits = static_cast<unsigned>(t.bits);
    const __m256i full = _mm256_set1_epi64x(static_cast<long long>(t.full_mask));

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks + i));
        __m256i c1 = _mm256_setzero_si256();
        for (const ShiftPlan& p : t.m1_shifts)
            c1 = _mm256_add_epi64(c1, popcount4(_mm256_and_si256(m, apply_shift4(p, m, bits, full))));
        __m256i c2 = _mm256_setzero_si256();
        for (const ShiftPlan& p : t.m2_shifts)
            c2 = _mm256_add_epi64(c2, popcount4(_mm256_and_si256(m, apply_shift4(p, m, bits, full))));

        alignas(32) std::uint64_t b1[4], b2[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(b1), c1);
        _mm256_store_si256(reinterpret_cast<__m256i*>(b2), c2);
        for (int l = 0; l < 4; ++l) {
            m1[i + l] = static_cast<std::uint32_t>(b1[l]);
            m2[i + l] = static_cast<std::uint32_t>(b2[l]);
        }
    }
    if (i < count) pair_counts_scalar(t, masks + i, count - i, m1 + i, m2 + i);
}

}  // namespace fci::kernels

#else

namespace fci::kernels {

void pair_counts_avx2(const PairCountTables& t, const std::uint64_t* masks,
                      std::size_t count, std::uint32_t* m1, std::uint32_t* m2) {
    pair_counts_scalar(t, masks, count, m1, m2);
}

}  // namespace fci::kernels

#endif

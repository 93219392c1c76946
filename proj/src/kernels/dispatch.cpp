#include "fci/kernels/band_scan.hpp"
#include "fci/kernels/pair_count.hpp"

namespace fci::kernels {

bool avx2_available() noexcept {
#if (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

void pair_counts_batch(const PairCountTables& t, const std::uint64_t* masks,
                       std::size_t count, std::uint32_t* m1, std::uint32_t* m2) {
    if (avx2_available())
        pair_counts_avx2(t, masks, count, m1, m2);
    else
        pair_counts_scalar(t, masks, count, m1, m2);
}

BandScanResult band_min_scan(double t1, double t2, double td, int grid) {
    return avx2_available() ? band_min_scan_avx2(t1, t2, td, grid)
                            : band_min_scan_scalar(t1, t2, td, grid);
}

}  // namespace fci::kernels

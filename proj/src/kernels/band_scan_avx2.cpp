// AVX2 variant of the Brillouin-zone minimum scan. Vector lanes run over k2;
// the winning row is rescanned scalar-side with the identical expression to
// recover the first-minimizer index. Compiled with -mavx2 -ffp-contract=off.

#include "fci/kernels/band_scan.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <limits>

namespace fci::kernels {

BandScanResult band_min_scan_avx2(double t1, double t2, double td, int grid) {
    const BandScanTables t = make_band_scan_tables(t1, t2, td, grid);
    BandScanResult r;
    r.min_f = std::numeric_limits<double>::infinity();

    for (int i = 0; i < grid; ++i) {
        const double u = t.u[i];
        const double v = t.v[i];
        const __m256d uv = _mm256_set1_pd(u);
        const __m256d vv = _mm256_set1_pd(v);

        double row_min = std::numeric_limits<double>::infinity();
        __m256d rm = _mm256_set1_pd(row_min);
        int j = 0;
        for (; j + 4 <= grid; j += 4) {
            const __m256d a2 = _mm256_loadu_pd(t.a2.data() + j);
            const __m256d s2 = _mm256_loadu_pd(t.s2.data() + j);
            const __m256d f = _mm256_add_pd(_mm256_add_pd(uv, a2), _mm256_mul_pd(vv, s2));
            rm = _mm256_min_pd(rm, f);
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, rm);
        for (double l : lanes) row_min = l < row_min ? l : row_min;
        for (; j < grid; ++j) {
            const double f = (u + t.a2[j]) + v * t.s2[j];
            row_min = f < row_min ? f : row_min;
        }

        if (row_min < r.min_f) {
            // first j attaining the row minimum, same expression as above
            for (int jj = 0; jj < grid; ++jj) {
                const double f = (u + t.a2[jj]) + v * t.s2[jj];
                if (f == row_min) {
                    r.min_f = f;
                    r.i1 = i;
                    r.i2 = jj;
                    break;
                }
            }
        }
    }
    return r;
}

}  // namespace fci::kernels

#else

namespace fci::kernels {

BandScanResult band_min_scan_avx2(double t1, double t2, double td, int grid) {
    return band_min_scan_scalar(t1, t2, td, grid);
}

}  // namespace fci::kernels

#endif

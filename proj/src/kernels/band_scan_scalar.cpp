// Scalar reference for the Brillouin-zone minimum scan. Compiled with
// -ffp-contract=off so the AVX2 variant (explicit mul/add, no FMA) matches
// bit for bit.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fci/kernels/band_scan.hpp"

namespace fci::kernels {

BandScanTables make_band_scan_tables(double t1, double t2, double td, int grid) {
    if (grid < 2) throw std::invalid_argument("band scan grid must be >= 2");
    BandScanTables t;
    t.u.resize(grid);
    t.v.resize(grid);
    t.a2.resize(grid);
    t.s2.resize(grid);
    const double step = 2.0 * std::numbers::pi / grid;
    for (int i = 0; i < grid; ++i) {
        const double k = -std::numbers::pi + step * i;
        const double cu = 2.0 * t1 * std::cos(0.5 * k);
        const double sv = 4.0 * td * std::sin(0.5 * k);
        t.u[i] = cu * cu;
        t.v[i] = sv * sv;
        const double ca = 2.0 * t2 * std::cos(k);
        const double ss = std::sin(k);
        t.a2[i] = ca * ca;
        t.s2[i] = ss * ss;
    }
    return t;
}

BandScanResult band_min_scan_scalar(double t1, double t2, double td, int grid) {
    const BandScanTables t = make_band_scan_tables(t1, t2, td, grid);
    BandScanResult r;
    r.min_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double u = t.u[i];
        const double v = t.v[i];
        for (int j = 0; j < grid; ++j) {
            const double f = (u + t.a2[j]) + v * t.s2[j];
            if (f < r.min_f) {
                r.min_f = f;
                r.i1 = i;
                r.i2 = j;
            }
        }
    }
    return r;
}

}  // namespace fci::kernels

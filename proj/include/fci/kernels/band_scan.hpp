#pragma once

#include <vector>

namespace fci::kernels {

// Minimum of f(k) = A(k)^2 + |B(k)|^2 over the G x G mesh k_a = -pi + 2*pi*i/G,
// with the row-major first minimizer. The band gap is 2*sqrt(min_f).
struct BandScanResult {
    double min_f = 0.0;
    int i1 = 0;  // k1 mesh index
    int i2 = 0;  // k2 mesh index
};

// Per-axis factor tables; f(i1, i2) = (u[i1] + a2[i2]) + v[i1] * s2[i2].
// Both kernels evaluate exactly this expression so results are bit-identical.
struct BandScanTables {
    std::vector<double> u;   // (2*t1*cos(k1/2))^2
    std::vector<double> v;   // (4*td*sin(k1/2))^2
    std::vector<double> a2;  // (2*t2*cos(k2))^2
    std::vector<double> s2;  // sin(k2)^2
};

BandScanTables make_band_scan_tables(double t1, double t2, double td, int grid);

BandScanResult band_min_scan_scalar(double t1, double t2, double td, int grid);
BandScanResult band_min_scan_avx2(double t1, double t2, double td, int grid);

// Runtime-dispatched entry point.
BandScanResult band_min_scan(double t1, double t2, double td, int grid);

}  // namespace fci::kernels

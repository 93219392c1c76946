#pragma once

#include <array>
#include <vector>

#include "fci/hk_band.hpp"

namespace fci {

// Elliptic path (p1, p2)(theta) = (eps cos theta, eps |t1/(4 td)| sin theta)
// around (pi, pi); the aspect ratio follows the connection's vortex term.
struct LoopSpec {
    double eps = 0.05;
    int steps = 2048;
    LoopSpec(double eps_, int steps_) : eps(eps_), steps(steps_) {
        if (!(eps > 0.0) || eps >= 0.5) throw std::invalid_argument("loop eps must be in (0, 0.5)");
        if (steps < 64) throw std::invalid_argument("loop needs at least 64 quadrature steps");
    }
};

// Per-plaquette Berry field strength on the offset G x G mesh.
struct CurvatureMap {
    int grid = 0;
    std::vector<double> field;  // row-major over (i1, i2) plaquettes
    double total = 0.0;         // sum(field) / (2 pi)
    double center_k1(int i1) const;
    double center_k2(int i2) const;
};

inline constexpr double residue_tolerance = 1e-6;

// Gauge-invariant plaquette link-variable integration of the lower-band
// Berry curvature; integer by construction once the rounding residue is
// below residue_tolerance. The mesh is offset by half a cell so the gauge
// singularity at (pi, pi) is never sampled.
int chern_plaquette(const HKParams& p, int grid);

// Closed form sgn(td/t1), valid for t2 > 0, t1 != 0, td != 0 only.
int chern_analytic(const HKParams& p);

// Lower-band Berry connection from analytic derivatives of A(k), B(k);
// both components purely imaginary. Throws Errc::singular_point when the
// gauge norm is below 1e-12.
std::array<Complex, 2> berry_connection(const HKParams& p, BlochMomentum k);

// (1/2 pi i) times the loop integral of the connection along the ellipse;
// converges to the Chern number as eps -> 0. Requires eps <= 0.2.
double chern_loop(const HKParams& p, const LoopSpec& loop);

CurvatureMap curvature_map(const HKParams& p, int grid);

}  // namespace fci

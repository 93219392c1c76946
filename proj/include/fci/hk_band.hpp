#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "fci/errors.hpp"

namespace fci {

using Complex = std::complex<double>;

// Hopping amplitudes of the two-band square-lattice model: horizontal t1,
// vertical +-t2 alternating by column, pure-imaginary diagonal +-i*td.
struct HKParams {
    double t1 = 1.0;
    double t2 = 1.0;
    double td = 1.0;
    double max_abs() const noexcept;
};

// Wave vector with both components reduced to [-pi, pi).
struct BlochMomentum {
    double k1 = 0.0;
    double k2 = 0.0;
    static BlochMomentum reduced(double k1, double k2);
};

// Momentum-resolved data of the lower band in the fixed gauge
// (alpha, beta) = (B, -A - sqrt(A^2 + |B|^2)).
struct BlochState {
    double a = 0.0;       // A(k) = 2 t2 cos k2
    Complex b;            // B(k) = e^{-i k1/2} (2 t1 cos(k1/2) + 4 i td sin(k1/2) sin k2)
    double e_minus = 0.0;
    double e_plus = 0.0;
    Complex alpha;
    Complex beta;
    double norm = 0.0;    // sqrt(|alpha|^2 + |beta|^2); zero exactly at the gauge singularity
};

// 2*L1 x L2 sites: L1 two-site cells along direction 1, L2 rows.
struct HKLatticeSize {
    int l1 = 1;
    int l2 = 1;
    int sites() const noexcept { return 2 * l1 * l2; }
};

struct TwistAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

std::pair<double, Complex> bloch_components(const HKParams& p, BlochMomentum k);
std::pair<double, double> band_energies(const HKParams& p, BlochMomentum k);
BlochState lower_state(const HKParams& p, BlochMomentum k);

struct GapReport {
    double gap = 0.0;  // min over the BZ of E+ - E- = 2 sqrt(A^2 + |B|^2)
    BlochMomentum at;  // minimizing wave vector after local refinement
};

// Uniform grid scan (grid >= 16) followed by one local coordinate-bisection
// refinement pass around the mesh minimizer.
GapReport band_gap(const HKParams& p, int grid);

// Chern-consuming operations refuse when the gap falls below this fraction
// of max(|t1|, |t2|, |td|).
inline constexpr double gap_refusal_rel = 1e-8;

// Real-space single-particle Hamiltonian on the periodic 2*L1 x L2 lattice.
// Site order is row-major: index = n * 2*L1 + l. Boundary-crossing hops in
// direction a pick up the phase e^{+i theta_a} (forward crossing).
Eigen::MatrixXcd realspace_hamiltonian(const HKParams& p, HKLatticeSize size,
                                       TwistAngles twists = {});

// Analytic band energies on the momentum grid allowed by the finite lattice,
// ascending; equals the real-space spectrum at zero twist.
std::vector<double> band_energies_on_grid(const HKParams& p, HKLatticeSize size);

}  // namespace fci

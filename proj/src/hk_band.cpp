#include "fci/hk_band.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fci/kernels/band_scan.hpp"

namespace fci {

namespace {
constexpr double pi = std::numbers::pi;
}

double HKParams::max_abs() const noexcept {
    return std::max({std::abs(t1), std::abs(t2), std::abs(td)});
}

BlochMomentum BlochMomentum::reduced(double k1, double k2) {
    const auto wrap = [](double k) {
        k = std::fmod(k + pi, 2.0 * pi);
        if (k < 0) k += 2.0 * pi;
        return k - pi;
    };
    return {wrap(k1), wrap(k2)};
}

std::pair<double, Complex> bloch_components(const HKParams& p, BlochMomentum k) {
    const double a = 2.0 * p.t2 * std::cos(k.k2);
    const Complex phase = std::exp(Complex(0.0, -0.5 * k.k1));
    const Complex bracket(2.0 * p.t1 * std::cos(0.5 * k.k1),
                          4.0 * p.td * std::sin(0.5 * k.k1) * std::sin(k.k2));
    return {a, phase * bracket};
}

std::pair<double, double> band_energies(const HKParams& p, BlochMomentum k) {
    const auto [a, b] = bloch_components(p, k);
    const double e = std::sqrt(a * a + std::norm(b));
    return {-e, e};
}

BlochState lower_state(const HKParams& p, BlochMomentum k) {
    BlochState s;
    std::tie(s.a, s.b) = bloch_components(p, k);
    const double e = std::sqrt(s.a * s.a + std::norm(s.b));
    s.e_minus = -e;
    s.e_plus = e;
    s.alpha = s.b;
    s.beta = Complex(-s.a - e, 0.0);
    s.norm = std::sqrt(std::norm(s.alpha) + std::norm(s.beta));
    return s;
}

GapReport band_gap(const HKParams& p, int grid) {
    if (grid < 16) throw std::invalid_argument("band_gap needs grid >= 16");
    const auto scan = kernels::band_min_scan(p.t1, p.t2, p.td, grid);
    const double step = 2.0 * pi / grid;

    const auto f = [&p](double k1, double k2) {
        const auto [a, b] = bloch_components(p, {k1, k2});
        return a * a + std::norm(b);
    };

    // one local bisection pass per coordinate inside the +-1 mesh cell
    double k1 = -pi + step * scan.i1;
    double k2 = -pi + step * scan.i2;
    double lo1 = k1 - step, hi1 = k1 + step;
    double lo2 = k2 - step, hi2 = k2 + step;
    for (int it = 0; it < 200; ++it) {
        {
            const double m1 = 0.5 * (lo1 + k1), m2 = 0.5 * (k1 + hi1);
            const double fl = f(m1, k2), fc = f(k1, k2), fr = f(m2, k2);
            if (fl < fc && fl <= fr) {
                hi1 = k1;
                k1 = m1;
            } else if (fr < fc) {
                lo1 = k1;
                k1 = m2;
            } else {
                lo1 = m1;
                hi1 = m2;
            }
        }
        {
            const double m1 = 0.5 * (lo2 + k2), m2 = 0.5 * (k2 + hi2);
            const double fl = f(k1, m1), fc = f(k1, k2), fr = f(k1, m2);
            if (fl < fc && fl <= fr) {
                hi2 = k2;
                k2 = m1;
            } else if (fr < fc) {
                lo2 = k2;
                k2 = m2;
            } else {
                lo2 = m1;
                hi2 = m2;
            }
        }
        if (hi1 - lo1 < 1e-13 && hi2 - lo2 < 1e-13) break;
    }

    GapReport rep;
    const double fmin = std::min(f(k1, k2), scan.min_f);
    rep.gap = 2.0 * std::sqrt(fmin);
    rep.at = BlochMomentum::reduced(k1, k2);
    return rep;
}

Eigen::MatrixXcd realspace_hamiltonian(const HKParams& p, HKLatticeSize size,
                                       TwistAngles twists) {
    if (size.l1 < 1 || size.l2 < 1) throw std::invalid_argument("lattice sizes must be >= 1");
    const int nx = 2 * size.l1;
    const int ny = size.l2;
    const int dim = nx * ny;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

    const auto idx = [nx](int x, int y) { return y * nx + x; };
    // One equation-row term: row = site (x, y), column = site + (dx, dy).
    // The hop column -> row runs against (dx, dy), so a forward boundary
    // crossing of (dx, dy) carries the conjugate twist phase.
    const auto add = [&](int x, int y, int dx, int dy, Complex amp) {
        int tx = x + dx, ty = y + dy;
        double phase = 0.0;
        if (tx >= nx) {
            tx -= nx;
            phase += twists.theta1;
        } else if (tx < 0) {
            tx += nx;
            phase -= twists.theta1;
        }
        if (ty >= ny) {
            ty -= ny;
            phase += twists.theta2;
        } else if (ty < 0) {
            ty += ny;
            phase -= twists.theta2;
        }
        h(idx(x, y), idx(tx, ty)) += amp * std::exp(Complex(0.0, -phase));
    };

    const Complex itd(0.0, p.td);
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            if (x % 2 == 0) {
                // A column: +t2 vertical bonds, diagonals -i td on (-1,-1) and
                // (+1,+1), +i td on (+1,-1) and (-1,+1)
                add(x, y, -1, 0, p.t1);
                add(x, y, +1, 0, p.t1);
                add(x, y, 0, -1, p.t2);
                add(x, y, 0, +1, p.t2);
                add(x, y, -1, -1, -itd);
                add(x, y, +1, +1, -itd);
                add(x, y, +1, -1, itd);
                add(x, y, -1, +1, itd);
            } else {
                // B column: -t2 vertical bonds, diagonal signs reversed
                add(x, y, -1, 0, p.t1);
                add(x, y, +1, 0, p.t1);
                add(x, y, 0, -1, -p.t2);
                add(x, y, 0, +1, -p.t2);
                add(x, y, -1, -1, itd);
                add(x, y, +1, +1, itd);
                add(x, y, +1, -1, -itd);
                add(x, y, -1, +1, -itd);
            }
        }
    }
    return h;
}

std::vector<double> band_energies_on_grid(const HKParams& p, HKLatticeSize size) {
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(size.sites()));
    for (int j = 0; j < size.l1; ++j) {
        for (int l = 0; l < size.l2; ++l) {
            const BlochMomentum k = BlochMomentum::reduced(2.0 * pi * j / size.l1,
                                                           2.0 * pi * l / size.l2);
            const auto [lo, hi] = band_energies(p, k);
            e.push_back(lo);
            e.push_back(hi);
        }
    }
    std::sort(e.begin(), e.end());
    return e;
}

}  // namespace fci

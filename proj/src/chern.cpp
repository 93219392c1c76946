#include "fci/chern.hpp"

#include <cmath>
#include <numbers>

namespace fci {

namespace {

constexpr double pi = std::numbers::pi;

inline int wrap_index(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

void require_gapped(const HKParams& p, int grid) {
    const GapReport gap = band_gap(p, std::max(grid, 32));
    if (!(gap.gap > gap_refusal_rel * p.max_abs()))
        raise(Errc::gapless, "band gap " + std::to_string(gap.gap) +
                                 " too small for a Chern number; spectrum closes near k = (" +
                                 std::to_string(gap.at.k1) + ", " + std::to_string(gap.at.k2) + ")");
}

struct Mesh {
    int grid;
    // normalized lower eigenvectors, row-major over (i1, i2)
    std::vector<std::array<Complex, 2>> u;
    const std::array<Complex, 2>& at(int i1, int i2) const {
        return u[static_cast<std::size_t>(wrap_index(i1, grid)) * grid +
                 static_cast<std::size_t>(wrap_index(i2, grid))];
    }
};

Mesh make_mesh(const HKParams& p, int grid) {
    Mesh m;
    m.grid = grid;
    m.u.resize(static_cast<std::size_t>(grid) * grid);
    const double step = 2.0 * pi / grid;
    for (int i1 = 0; i1 < grid; ++i1) {
        const double k1 = -pi + step * (i1 + 0.5);
        for (int i2 = 0; i2 < grid; ++i2) {
            const double k2 = -pi + step * (i2 + 0.5);
            const BlochState s = lower_state(p, {k1, k2});
            m.u[static_cast<std::size_t>(i1) * grid + i2] = {s.alpha / s.norm, s.beta / s.norm};
        }
    }
    return m;
}

inline Complex overlap(const std::array<Complex, 2>& a, const std::array<Complex, 2>& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

// Field strength of one plaquette with lower-left mesh corner (i1, i2).
// The traversal direction fixes the sign convention of the whole artifact:
// it is chosen so the plaquette total matches the small-loop integral around
// the gauge singularity, i.e. sgn(td/t1).
double plaquette_angle(const Mesh& m, int i1, int i2) {
    const Complex prod = overlap(m.at(i1, i2), m.at(i1, i2 + 1)) *
                         overlap(m.at(i1, i2 + 1), m.at(i1 + 1, i2 + 1)) *
                         overlap(m.at(i1 + 1, i2 + 1), m.at(i1 + 1, i2)) *
                         overlap(m.at(i1 + 1, i2), m.at(i1, i2));
    if (prod == Complex(0.0, 0.0))
        raise(Errc::non_integer_residue, "vanishing plaquette link; increase the grid");
    return std::arg(prod);
}

}  // namespace

double CurvatureMap::center_k1(int i1) const { return -pi + 2.0 * pi * (i1 + 1.0) / grid; }
double CurvatureMap::center_k2(int i2) const { return -pi + 2.0 * pi * (i2 + 1.0) / grid; }

CurvatureMap curvature_map(const HKParams& p, int grid) {
    if (grid < 16) throw std::invalid_argument("curvature grid must be >= 16");
    require_gapped(p, grid);
    const Mesh m = make_mesh(p, grid);
    CurvatureMap map;
    map.grid = grid;
    map.field.resize(static_cast<std::size_t>(grid) * grid);
    double sum = 0.0;
    for (int i1 = 0; i1 < grid; ++i1) {
        for (int i2 = 0; i2 < grid; ++i2) {
            const double f = plaquette_angle(m, i1, i2);
            map.field[static_cast<std::size_t>(i1) * grid + i2] = f;
            sum += f;
        }
    }
    map.total = sum / (2.0 * pi);
    return map;
}

int chern_plaquette(const HKParams& p, int grid) {
    const CurvatureMap map = curvature_map(p, grid);
    const double rounded = std::round(map.total);
    if (std::abs(map.total - rounded) >= residue_tolerance)
        raise(Errc::non_integer_residue,
              "plaquette sum " + std::to_string(map.total) + " is not integral; increase the grid");
    return static_cast<int>(rounded);
}

int chern_analytic(const HKParams& p) {
    if (!(p.t2 > 0.0) || p.t1 == 0.0 || p.td == 0.0)
        raise(Errc::out_of_derived_domain,
              "closed form requires t2 > 0, t1 != 0, td != 0; use chern_plaquette");
    return (p.td / p.t1) > 0.0 ? 1 : -1;
}

std::array<Complex, 2> berry_connection(const HKParams& p, BlochMomentum k) {
    const BlochState s = lower_state(p, k);
    if (s.norm <= 1e-12)
        raise(Errc::singular_point, "gauge norm vanishes at the requested wave vector");

    // B(k) = t1 (1 + w) + 2 td sin(k2) (1 - w), w = exp(-i k1)
    const Complex w = std::exp(Complex(0.0, -k.k1));
    const double sk2 = std::sin(k.k2);
    const double ck2 = std::cos(k.k2);
    const Complex db1 = Complex(0.0, -1.0) * w * (p.t1 - 2.0 * p.td * sk2);
    const Complex db2 = 2.0 * p.td * ck2 * (1.0 - w);

    // A_mu = i Im(alpha* d alpha + beta* d beta)/N^2; beta = -A - R and its
    // derivatives are real, so only the alpha = B term contributes.
    const double n2 = s.norm * s.norm;
    const double im1 = std::imag(std::conj(s.alpha) * db1);
    const double im2 = std::imag(std::conj(s.alpha) * db2);
    return {Complex(0.0, im1 / n2), Complex(0.0, im2 / n2)};
}

double chern_loop(const HKParams& p, const LoopSpec& loop) {
    if (p.td == 0.0)
        raise(Errc::aspect_undefined, "loop aspect |t1/(4 td)| undefined at td = 0");
    if (!(p.t2 > 0.0) || p.t1 == 0.0)
        raise(Errc::out_of_derived_domain,
              "loop integral follows the t2 > 0, t1 != 0 derivation; use chern_plaquette");
    if (loop.eps > 0.2)
        throw std::invalid_argument("loop eps must be <= 0.2 to stay near the singular point");

    const double aspect = std::abs(p.t1 / (4.0 * p.td));
    const double dtheta = 2.0 * pi / loop.steps;
    Complex acc(0.0, 0.0);
    for (int s = 0; s < loop.steps; ++s) {
        const double theta = dtheta * s;
        const double k1 = pi + loop.eps * std::cos(theta);
        const double k2 = pi + loop.eps * aspect * std::sin(theta);
        const auto a = berry_connection(p, BlochMomentum::reduced(k1, k2));
        const double d1 = -loop.eps * std::sin(theta);
        const double d2 = loop.eps * aspect * std::cos(theta);
        acc += a[0] * d1 + a[1] * d2;
    }
    const Complex integral = acc * dtheta;
    return (integral / Complex(0.0, 2.0 * pi)).real();
}

}  // namespace fci

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fci/hk_band.hpp"

using namespace fci;

namespace {
constexpr double pi = std::numbers::pi;

Eigen::Matrix2cd bloch_matrix(const HKParams& p, BlochMomentum k) {
    const auto [a, b] = bloch_components(p, k);
    Eigen::Matrix2cd m;
    m << a, b, std::conj(b), -a;
    return m;
}
}  // namespace

TEST_CASE("bloch components at the worked momenta") {
    const HKParams p{1, 1, 1};
    {
        const auto [a, b] = bloch_components(p, {0, 0});
        CHECK(a == doctest::Approx(2.0));
        CHECK(std::abs(b - Complex(2.0, 0.0)) < 1e-14);
    }
    {
        const auto [a, b] = bloch_components(p, {pi, pi});
        CHECK(a == doctest::Approx(-2.0));
        CHECK(std::abs(b) < 1e-14);
    }
    {
        const auto [a, b] = bloch_components(p, {pi, 0});
        CHECK(a == doctest::Approx(2.0));
        CHECK(std::abs(b) < 1e-14);
    }
}

TEST_CASE("band energies and particle-hole symmetry") {
    const HKParams p{1, 1, 1};
    const auto [lo0, hi0] = band_energies(p, {0, 0});
    CHECK(hi0 == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(lo0 == doctest::Approx(-2.0 * std::sqrt(2.0)));
    const auto [lo1, hi1] = band_energies(p, {pi, pi});
    CHECK(hi1 == doctest::Approx(2.0));
    CHECK(lo1 == doctest::Approx(-2.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-pi, pi);
    const HKParams q{1, 1, 0.5};
    for (int i = 0; i < 50; ++i) {
        const auto [lo, hi] = band_energies(q, {u(rng), u(rng)});
        CHECK(hi == doctest::Approx(-lo).epsilon(1e-14));
    }
}

TEST_CASE("lower state solves the Bloch eigenproblem in the fixed gauge") {
    const HKParams p{1, 1, 1};
    {
        const BlochState s = lower_state(p, {pi, pi});
        CHECK(s.norm < 1e-12);  // the gauge singularity
    }
    {
        const BlochState s = lower_state(p, {0, 0});
        CHECK(std::abs(s.alpha - Complex(2, 0)) < 1e-14);
        CHECK(std::abs(s.beta - Complex(-2.0 - 2.0 * std::sqrt(2.0), 0)) < 1e-14);
    }
    {
        const BlochState s = lower_state(p, {0, pi});
        CHECK(std::abs(s.alpha - Complex(2, 0)) < 1e-14);
        CHECK(std::abs(s.beta - Complex(2.0 - 2.0 * std::sqrt(2.0), 0)) < 1e-14);
        CHECK(s.norm > 0.1);
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int i = 0; i < 100; ++i) {
        const BlochMomentum k{u(rng), u(rng)};
        const BlochState s = lower_state(p, k);
        const Eigen::Vector2cd v(s.alpha, s.beta);
        const Eigen::Vector2cd r = bloch_matrix(p, k) * v - s.e_minus * v;
        CHECK(r.norm() < 1e-12 * std::max(1.0, v.norm()));
    }
}

TEST_CASE("band gap scan matches the closed-form closures") {
    const GapReport g = band_gap({1, 1, 1}, 64);
    CHECK(g.gap == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(band_gap({1, 1, 0}, 64).gap < 1e-10);
    CHECK(band_gap({1, 0, 1}, 64).gap < 1e-10);
    CHECK_THROWS_AS(band_gap({1, 1, 1}, 8), std::invalid_argument);
}

TEST_CASE("gap stays positive over the parameter sweep") {
    for (const double t1 : {0.5, -0.5, 1.0, -1.0})
        for (const double t2 : {0.5, 1.0, 2.0})
            for (const double td : {0.25, -0.25, 1.0, -1.0, 2.0, -2.0}) {
                CAPTURE(t1);
                CAPTURE(t2);
                CAPTURE(td);
                CHECK(band_gap({t1, t2, td}, 64).gap > 1e-6);
            }
}

TEST_CASE("real-space matrix is exactly Hermitian and has dimension 2 L1 L2") {
    const Eigen::MatrixXcd h8 = realspace_hamiltonian({1, 1, 1}, {2, 2});
    CHECK(h8.rows() == 8);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const HKParams p{u(rng), u(rng), u(rng)};
        const TwistAngles tw{u(rng), u(rng)};
        const Eigen::MatrixXcd h = realspace_hamiltonian(p, {3, 4}, tw);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("real-space spectrum equals the analytic bands on the momentum grid") {
    for (const auto& p : {HKParams{1, 1, 0.5}, HKParams{1, 1, 1}, HKParams{-0.7, 0.4, 1.3}}) {
        for (const auto [l1, l2] : {std::pair{4, 4}, {1, 2}, {3, 5}, {2, 8}}) {
            const Eigen::MatrixXcd h = realspace_hamiltonian(p, {l1, l2});
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            const std::vector<double> analytic = band_energies_on_grid(p, {l1, l2});
            REQUIRE(static_cast<int>(analytic.size()) == h.rows());
            for (int i = 0; i < h.rows(); ++i)
                CHECK(std::abs(es.eigenvalues()[i] - analytic[static_cast<std::size_t>(i)]) <
                      1e-10);
        }
    }
}

TEST_CASE("spectrum is periodic in the twists") {
    const HKParams p{1, 1, 0.5};
    const Eigen::MatrixXcd a = realspace_hamiltonian(p, {2, 3}, {0.7, 1.3});
    const Eigen::MatrixXcd b =
        realspace_hamiltonian(p, {2, 3}, {0.7 + 2 * pi, 1.3 + 2 * pi});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a), eb(b);
    CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("matrix is invariant under (2,0) and (0,1) lattice translations") {
    const HKParams p{0.8, 1.2, -0.6};
    const HKLatticeSize size{3, 4};
    const Eigen::MatrixXcd h = realspace_hamiltonian(p, size);
    const int nx = 2 * size.l1, ny = size.l2;
    const auto idx = [nx](int x, int y) { return y * nx + x; };
    const auto check_shift = [&](int dx, int dy) {
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                for (int x2 = 0; x2 < nx; ++x2)
                    for (int y2 = 0; y2 < ny; ++y2) {
                        const int r = idx(x, y), c = idx(x2, y2);
                        const int pr = idx((x + dx) % nx, (y + dy) % ny);
                        const int pc = idx((x2 + dx) % nx, (y2 + dy) % ny);
                        if (h(pr, pc) != h(r, c)) return false;
                    }
        return true;
    };
    CHECK(check_shift(2, 0));
    CHECK(check_shift(0, 1));
    CHECK(!check_shift(1, 0));  // one column flips the t2 alternation
}

TEST_CASE("the gauge norm vanishes only near (pi, pi)") {
    for (const auto& p : {HKParams{1, 1, 1}, HKParams{0.5, 2, -1}, HKParams{-1, 0.5, 0.25}}) {
        const int grid = 128;
        const double step = 2 * pi / grid;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double k1 = -pi + step * i;
                const double k2 = -pi + step * j;
                const BlochState s = lower_state(p, {k1, k2});
                if (s.norm < 0.01 * p.max_abs()) {
                    // distance to (pi, pi) on the torus, in mesh cells
                    const double d1 = std::abs(std::remainder(k1 - pi, 2 * pi));
                    const double d2 = std::abs(std::remainder(k2 - pi, 2 * pi));
                    CHECK(d1 <= 2 * step);
                    CHECK(d2 <= 2 * step);
                }
            }
    }
}

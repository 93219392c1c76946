#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fci/many_body.hpp"

using namespace fci;

namespace {
constexpr double pi = std::numbers::pi;

std::array<SectorSpec, 4> uniform_specs(const HKParams& p) {
    std::array<SectorSpec, 4> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = {sublattice_order[i], p, 0};
    return out;
}

Eigen::MatrixXcd random_hermitian_hopping(const TorusLattice& lat, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(lat.sites(), lat.sites());
    for (int r = 0; r < lat.sites(); ++r)
        for (int c = 0; c < r; ++c) {
            // keep it short ranged and exactly Hermitian
            const Coord a = lat.coord(r), b = lat.coord(c);
            if (std::abs(a.x1 - b.x1) > 1 || std::abs(a.x2 - b.x2) > 1) continue;
            const Complex v(u(rng), u(rng));
            m(r, c) = v;
            m(c, r) = std::conj(v);
        }
    return m;
}

}  // namespace

TEST_CASE("Fock basis enumeration and lookup") {
    const TorusLattice lat(4, 4);
    const FockBasis b = FockBasis::build(lat, 6);
    CHECK(b.dimension() == 8008);
    CHECK(std::is_sorted(b.masks.begin(), b.masks.end()));
    for (const std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{8007}})
        CHECK(b.index(b.masks[i]) == i);
    CHECK_THROWS_AS(b.index(0), std::invalid_argument);
    CHECK(FockBasis::build(lat, 0).dimension() == 1);

    try {
        FockBasis::build(TorusLattice(8, 8), 16);
        FAIL("expected dimension_exceeded");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dimension_exceeded);
    }
}

TEST_CASE("trivial particle numbers reduce to the expected matrices") {
    const TorusLattice lat(4, 4);
    const auto specs = uniform_specs({1, 1, 0.5});
    {
        const ManyBodyHamiltonian h = build_many_body(lat, 0, specs, {1, 1});
        CHECK(h.dimension() == 1);
        CHECK(h.dense()(0, 0) == Complex(0, 0));
    }
    {
        // single particle: the Fock matrix is the hopping matrix itself
        const ManyBodyHamiltonian h = build_many_body(lat, 1, specs, {1, 1});
        const Eigen::MatrixXcd m = h.dense();
        CHECK((m - h.hopping).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("assembled operator is exactly Hermitian and number conserving") {
    const TorusLattice lat(4, 4);
    const auto specs = uniform_specs({0.7, -1.1, 0.4});
    const ManyBodyHamiltonian h = build_many_body(lat, 3, specs, {2, 1}, {0.9, -0.3});
    const Eigen::MatrixXcd m = h.dense();
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t r = 0; r < h.dimension(); ++r)
        for (std::size_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k)
            CHECK(std::popcount(h.basis.masks[h.col[k]]) == 3);
}

TEST_CASE("diagonal carries the exact interaction pair counts") {
    const TorusLattice lat(4, 4);
    const ManyBodyHamiltonian h = build_many_body(lat, 2, uniform_specs({0, 0, 0}), {10, 3});
    for (std::size_t i = 0; i < h.dimension(); ++i) {
        const PairCounts pc = interaction_pair_counts({h.basis.masks[i]}, lat);
        CHECK(h.diag[i] == 10.0 * pc.m1 + 3.0 * pc.m2);
    }
}

TEST_CASE("single-particle spectrum matches the hopping matrix") {
    const TorusLattice lat(4, 4);
    const auto specs = uniform_specs({1, 1, 0.5});
    const ManyBodyHamiltonian h = build_many_body(lat, 1, specs, {1, 1});
    const ManyBodySpectrum sp = low_spectrum(h, h.dimension());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.hopping);
    for (std::size_t i = 0; i < h.dimension(); ++i)
        CHECK(std::abs(sp.eigenvalues[i] - es.eigenvalues()[static_cast<Eigen::Index>(i)]) <
              1e-10);
}

TEST_CASE("zero hopping reproduces the classical four-fold ground multiplet") {
    const TorusLattice lat(4, 4);
    const ManyBodyHamiltonian h = build_many_body(lat, 4, uniform_specs({0, 0, 0}), {7, 2});
    const ManyBodySpectrum sp = low_spectrum(h, 8);
    for (int i = 0; i < 4; ++i) CHECK(sp.eigenvalues[static_cast<std::size_t>(i)] == 0.0);
    CHECK(sp.eigenvalues[4] > 1.0);
    REQUIRE(!sp.clusters.empty());
    CHECK(sp.clusters[0].size == 4);
    CHECK(sp.clusters[0].splitting == 0.0);
}

TEST_CASE("trace identity holds for the full spectrum") {
    const TorusLattice lat(4, 4);
    const ManyBodyHamiltonian h = build_many_body(lat, 2, uniform_specs({1, 1, 1}), {3, 2});
    const ManyBodySpectrum sp = low_spectrum(h, h.dimension());
    double sum = 0.0, trace = 0.0;
    for (const double e : sp.eigenvalues) sum += e;
    for (const double d : h.diag) trace += d;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
}

TEST_CASE("dense, Lanczos, and symmetry-split routes agree") {
    const TorusLattice lat(4, 4);
    std::mt19937_64 rng(19);

    // generic short-range hopping (not sublattice diagonal): dense vs Lanczos
    {
        const ManyBodyHamiltonian h =
            build_many_body_from_hopping(lat, 2, random_hermitian_hopping(lat, rng), {1, 1});
        CHECK(!h.hopping_sublattice_diagonal);
        const auto dense = low_spectrum(h, 6, false, DiagMethod::dense);
        const auto lanc = low_spectrum(h, 6, false, DiagMethod::lanczos);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(lanc.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-9));
        CHECK_THROWS_AS(low_spectrum(h, 6, false, DiagMethod::symmetry_split),
                        std::invalid_argument);
    }

    // sector hopping: dense vs split, including degenerate multiplets
    {
        const ManyBodyHamiltonian h =
            build_many_body(lat, 3, uniform_specs({1, 1, 0.5}), {9, 2});
        CHECK(h.hopping_sublattice_diagonal);
        const auto dense = low_spectrum(h, 24, false, DiagMethod::dense);
        const auto split = low_spectrum(h, 24, false, DiagMethod::symmetry_split);
        for (std::size_t i = 0; i < 24; ++i)
            CHECK(split.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-9));
    }

    // Lanczos recovers degenerate copies via deflation rounds
    {
        const ManyBodyHamiltonian h =
            build_many_body(lat, 4, uniform_specs({0, 0, 0}), {7, 2});
        const auto lanc = low_spectrum(h, 6, false, DiagMethod::lanczos);
        const auto dense = low_spectrum(h, 6, false, DiagMethod::dense);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(lanc.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
    }
}

TEST_CASE("many-body spectra are twist periodic") {
    const TorusLattice lat(4, 4);
    const auto specs = uniform_specs({1, 1, 0.5});
    const auto a = low_spectrum(build_many_body(lat, 2, specs, {5, 1}, {0.7, 1.3}), 10);
    const auto b =
        low_spectrum(build_many_body(lat, 2, specs, {5, 1}, {0.7 + 2 * pi, 1.3 + 2 * pi}), 10);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-10);
}

TEST_CASE("spectrum clustering splits on relative gaps") {
    const std::vector<double> e{0.0, 0.0, 1e-13, 5.0, 5.0 + 1e-12, 12.0};
    const auto clusters = cluster_spectrum(e);
    REQUIRE(clusters.size() == 3);
    CHECK(clusters[0].start == 0);
    CHECK(clusters[0].size == 3);
    CHECK(clusters[1].start == 3);
    CHECK(clusters[1].size == 2);
    CHECK(clusters[2].size == 1);
}

TEST_CASE("strong-coupling scan converges in the hierarchical regime") {
    const TorusLattice lat(4, 4);
    const std::vector<double> g1s{100, 1000, 10000};

    // hopping bandwidth well below g2: the 24-level family is exact
    const auto rows = strong_coupling_scan(lat, 6, uniform_specs({0.1, 0.1, 0.05}), 5.0, g1s);
    REQUIRE(rows.size() == 3);
    for (const ScanRow& r : rows) CHECK(r.max_deviation <= 1e-10);
    CHECK(rows.back().max_deviation <= 1e-2 * 0.1);

    // zero hopping: deviations exactly zero
    for (const ScanRow& r : strong_coupling_scan(lat, 6, uniform_specs({0, 0, 0}), 5.0, g1s))
        CHECK(r.max_deviation == 0.0);

    // precondition gate
    try {
        strong_coupling_scan(lat, 6, uniform_specs({1, 1, 0.5}), 5.0, std::vector<double>{20});
        FAIL("expected invalid_parameter");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_parameter);
    }
}

TEST_CASE("Slater Chern equals the band Chern over the sweep") {
    for (const double t1 : {1.0, -1.0})
        for (const double td : {1.0, -1.0, 0.25}) {
            const SectorSpec spec{{0, 0}, {t1, 1.0, td}, 0};
            CAPTURE(t1);
            CAPTURE(td);
            CHECK(slater_chern(spec, {2, 4}, {8}) == chern_plaquette(spec.params, 24));
        }
}

TEST_CASE("Slater Chern edge fillings and twist-gap refusal") {
    const SectorSpec spec{{0, 0}, {1, 1, 1}, 0};
    CHECK(slater_chern(spec, {2, 4}, {8}, 16) == 0);  // all orbitals filled
    CHECK(slater_chern(spec, {2, 4}, {8}, 0) == 0);   // no particles
    CHECK_THROWS_AS(slater_chern(spec, {2, 4}, {4}), std::invalid_argument);
    CHECK_THROWS_AS(slater_chern(spec, {1, 2}, {8}), std::invalid_argument);

    try {
        slater_chern({{0, 0}, {1, 1, 0}, 0}, {2, 4}, {8});
        FAIL("expected gap_closed_at_twist");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::gap_closed_at_twist);
    }
}

TEST_CASE("composite Slater Chern reproduces the averaged values") {
    auto mixed = uniform_specs({1, 1, 1});
    mixed[3].params.td = -1;
    CHECK(composite_many_body_chern(mixed, {2, 4}, {8}) == Rational(1, 2));
    CHECK(composite_many_body_chern(uniform_specs({1, 1, 1}), {2, 4}, {8}) == Rational(1, 1));
    auto flipped = uniform_specs({1, 1, -1});
    CHECK(composite_many_body_chern(flipped, {2, 4}, {8}) == Rational(-1, 1));
}

TEST_CASE("per-block Slater Chern numbers add up to the sector sum") {
    const TorusLattice lat(8, 8);
    auto mixed = uniform_specs({1, 1, 1});
    mixed[3].params.td = -1;
    int total = 0;
    for (const SublatticeId& sector : sublattice_order) {
        const auto greens = green_sites(sector, lat);
        const auto builder = [&](TwistAngles tw) {
            const Eigen::MatrixXcd full = build_total_hopping(lat, mixed, tw);
            const auto n = static_cast<Eigen::Index>(greens.size());
            Eigen::MatrixXcd block(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    block(r, c) = full(greens[static_cast<std::size_t>(r)],
                                       greens[static_cast<std::size_t>(c)]);
            return block;
        };
        total += slater_chern_from_builder(builder, 8, {8});
    }
    CHECK(total == 2);  // (+1) + (+1) + (+1) + (-1)
}

TEST_CASE("structure factor worked examples") {
    const TorusLattice lat(4, 4);
    const std::uint64_t pattern = sublattice_mask(lat, {0, 0});
    CHECK(structure_factor(lat, OccupationConfig{pattern}, pi, pi) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(structure_factor(lat, OccupationConfig{0xffff}, pi, 0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(structure_factor(lat, OccupationConfig{pattern}, 0, 0)) < 1e-12);

    // equal-weight mixture of the four translated patterns
    std::vector<std::uint64_t> masks;
    std::vector<double> weights(4, 0.25);
    for (const SublatticeId& id : sublattice_order) masks.push_back(sublattice_mask(lat, id));
    CHECK(structure_factor(lat, masks, weights, pi, pi) == doctest::Approx(1.0).epsilon(1e-12));

    // ground eigenvector of the classical Hamiltonian lives on the patterns
    const ManyBodyHamiltonian h = build_many_body(lat, 4, uniform_specs({0, 0, 0}), {7, 2});
    const ManyBodySpectrum sp = low_spectrum(h, 1, true);
    CHECK(structure_factor(lat, h.basis, sp.vectors.col(0), pi, pi) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

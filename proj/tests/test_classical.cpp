#include <doctest.h>

#include <bit>
#include <random>

#include "fci/classical.hpp"
#include "fci/kernels/pair_count.hpp"

using namespace fci;

namespace {

std::uint64_t mask_of(const TorusLattice& lat, std::initializer_list<Coord> sites) {
    std::uint64_t m = 0;
    for (const Coord& c : sites) m |= std::uint64_t{1} << lat.index(c);
    return m;
}

// independent oracle: count zero-pair configurations by exhaustive scan
BigCount brute_zero_count(const TorusLattice& lat, int n) {
    const auto tables = kernels::make_pair_count_tables(lat);
    if (n == 0) return 1;
    const std::uint64_t full = tables.full_mask;
    const std::uint64_t last = full & (full << (lat.sites() - n));
    std::uint64_t mask = ~std::uint64_t{0} >> (64 - n);
    BigCount count = 0;
    while (true) {
        std::uint32_t m1 = 0, m2 = 0;
        kernels::pair_counts_scalar(tables, &mask, 1, &m1, &m2);
        if (m1 == 0 && m2 == 0) ++count;
        if (mask == last) break;
        const std::uint64_t t = mask | (mask - 1);
        mask = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(mask) + 1));
    }
    return count;
}

std::uint64_t translate_mask(const TorusLattice& lat, std::uint64_t mask, int d1, int d2) {
    std::uint64_t out = 0;
    for (int s = 0; s < lat.sites(); ++s)
        if (mask >> s & 1) out |= std::uint64_t{1} << lat.translate(s, d1, d2);
    return out;
}

}  // namespace

TEST_CASE("interaction pair counts reproduce the worked examples") {
    const TorusLattice lat(4, 4);
    CHECK(interaction_pair_counts({0}, lat) == PairCounts{0, 0});
    CHECK(interaction_pair_counts({mask_of(lat, {{0, 0}, {1, 0}})}, lat) == PairCounts{1, 0});
    CHECK(interaction_pair_counts({mask_of(lat, {{0, 0}, {1, 1}})}, lat) == PairCounts{0, 1});
    // (1,2) and (1,-2) coincide mod 4, doubling the U3 count
    CHECK(interaction_pair_counts({mask_of(lat, {{0, 0}, {1, 2}})}, lat) == PairCounts{2, 0});
    const std::uint64_t pattern = mask_of(lat, {{0, 0}, {2, 0}, {0, 2}, {2, 2}});
    CHECK(interaction_pair_counts({pattern}, lat) == PairCounts{0, 0});
    CHECK_THROWS_AS(interaction_pair_counts({std::uint64_t{1} << 20}, lat),
                    std::invalid_argument);
}

TEST_CASE("quarter filling has exactly the four period-2 ground states") {
    const TorusLattice lat(4, 4);
    for (const auto mode : {GroundSearchMode::lexicographic, GroundSearchMode::numeric}) {
        const auto rep = enumerate_ground_states(lat, 4, {3.7, 1.1}, mode);
        CHECK(rep.degeneracy == 4);
        CHECK(rep.min_counts == PairCounts{0, 0});
        CHECK(rep.counts_uniform);
        CHECK(rep.min_energy == 0.0);
        REQUIRE(rep.configurations.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            REQUIRE(rep.sectors[i].has_value());
            CHECK(*rep.sectors[i] == sublattice_order[i]);
            CHECK(rep.configurations[i].mask == sublattice_mask(lat, sublattice_order[i]));
        }
    }
}

TEST_CASE("empty lattice has a unique trivial ground state") {
    const auto rep = enumerate_ground_states(TorusLattice(4, 4), 0, {1, 1},
                                             GroundSearchMode::lexicographic);
    CHECK(rep.degeneracy == 1);
    CHECK(rep.min_counts == PairCounts{0, 0});
    REQUIRE(rep.configurations.size() == 1);
    CHECK(rep.configurations[0].mask == 0);
}

TEST_CASE("filling 3/8 minimizers are sector patterns plus two green sites") {
    const TorusLattice lat(4, 4);
    const auto rep = enumerate_ground_states(lat, 6, {10, 1}, GroundSearchMode::lexicographic);
    CHECK(rep.min_counts == PairCounts{0, 8});
    CHECK(rep.degeneracy == 24);
    REQUIRE(rep.configurations.size() == 24);
    for (const OccupationConfig& c : rep.configurations) {
        bool matched = false;
        for (const SublatticeId& sector : sublattice_order) {
            const std::uint64_t pattern = sublattice_mask(lat, sector);
            if ((c.mask & pattern) != pattern) continue;
            const std::uint64_t rest = c.mask & ~pattern;
            const std::uint64_t green = sublattice_mask(lat, green_sublattice(sector));
            matched = (rest & ~green) == 0 && std::popcount(rest) == 2;
            if (matched) break;
        }
        CHECK(matched);
    }
}

TEST_CASE("enumeration budget rejects oversized instances by name") {
    const TorusLattice lat(8, 8);
    try {
        enumerate_ground_states(lat, 16, {1, 1}, GroundSearchMode::lexicographic);
        FAIL("expected budget_exceeded");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::budget_exceeded);
        CHECK(std::string(e.what()).find("count_min_energy_configs_dp") != std::string::npos);
    }
}

TEST_CASE("transfer DP reproduces the paper-scale counts") {
    CHECK(count_min_energy_configs_dp(TorusLattice(4, 4), 4) == 4);
    CHECK(count_min_energy_configs_dp(TorusLattice(4, 4), 5) == 0);
    CHECK(count_min_energy_configs_dp(TorusLattice(8, 8), 16) == 4);
    CHECK_THROWS_AS(count_min_energy_configs_dp(TorusLattice(14, 4), 4), Error);
}

TEST_CASE("transfer DP equals the exhaustive zero-energy count") {
    for (const auto [w, h] : {std::pair{4, 4}, {4, 6}, {6, 4}}) {
        const TorusLattice lat(w, h);
        for (int n = 0; n <= 6; ++n) {
            CAPTURE(w);
            CAPTURE(h);
            CAPTURE(n);
            CHECK(count_min_energy_configs_dp(lat, n) == brute_zero_count(lat, n));
        }
    }
}

TEST_CASE("sector classification distinguishes patterns from everything else") {
    const TorusLattice lat(4, 4);
    CHECK(*classify_sector({sublattice_mask(lat, {0, 0})}, lat) == SublatticeId{0, 0});
    const std::uint64_t shifted = translate_mask(lat, sublattice_mask(lat, {0, 0}), 1, 0);
    CHECK(*classify_sector({shifted}, lat) == SublatticeId{1, 0});
    CHECK(!classify_sector({mask_of(lat, {{0, 0}, {1, 0}})}, lat).has_value());
}

TEST_CASE("green sites are the diagonally offset sublattice") {
    const TorusLattice lat(4, 4);
    CHECK(green_sites({0, 0}, lat) ==
          std::vector<int>{lat.index({1, 1}), lat.index({3, 1}), lat.index({1, 3}),
                           lat.index({3, 3})});
    CHECK(green_sites({1, 1}, lat) ==
          std::vector<int>{lat.index({0, 0}), lat.index({2, 0}), lat.index({0, 2}),
                           lat.index({2, 2})});
    CHECK(green_sites({1, 0}, TorusLattice(8, 8)).size() == 16);
}

TEST_CASE("green sites cost exactly (0,4); any other empty site costs m1") {
    for (const auto [w, h] : {std::pair{4, 4}, {8, 8}}) {
        const TorusLattice lat(w, h);
        for (const SublatticeId& sector : sublattice_order) {
            const std::uint64_t pattern = sublattice_mask(lat, sector);
            const PairCounts base = interaction_pair_counts({pattern}, lat);
            REQUIRE(base == PairCounts{0, 0});
            const std::uint64_t green = sublattice_mask(lat, green_sublattice(sector));
            for (int s = 0; s < lat.sites(); ++s) {
                if (pattern >> s & 1) continue;
                const PairCounts pc =
                    interaction_pair_counts({pattern | std::uint64_t{1} << s}, lat);
                if (green >> s & 1) {
                    CHECK(pc == PairCounts{0, 4});
                } else {
                    CHECK(pc.m1 >= 1);
                }
            }
        }
    }
}

TEST_CASE("pair counts are translation covariant") {
    const TorusLattice lat(4, 6);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t mask = rng() & ((std::uint64_t{1} << lat.sites()) - 1);
        const PairCounts base = interaction_pair_counts({mask}, lat);
        for (int d1 = 0; d1 < lat.width(); ++d1)
            for (int d2 = 0; d2 < lat.height(); ++d2)
                CHECK(interaction_pair_counts({translate_mask(lat, mask, d1, d2)}, lat) == base);
    }
}

TEST_CASE("pair counts add over non-interacting unions") {
    const TorusLattice lat(8, 8);
    const std::uint64_t a = mask_of(lat, {{0, 0}, {1, 0}});            // one U1 pair
    const std::uint64_t b = mask_of(lat, {{4, 4}, {5, 5}});            // one U2 pair
    const PairCounts pa = interaction_pair_counts({a}, lat);
    const PairCounts pb = interaction_pair_counts({b}, lat);
    const PairCounts u = interaction_pair_counts({a | b}, lat);
    CHECK(pa == PairCounts{1, 0});
    CHECK(pb == PairCounts{0, 1});
    CHECK(u.m1 == pa.m1 + pb.m1);
    CHECK(u.m2 == pa.m2 + pb.m2);
}

TEST_CASE("bigcount formatting") {
    CHECK(bigcount_str(0) == "0");
    CHECK(bigcount_str(4) == "4");
    BigCount big = 1;
    for (int i = 0; i < 25; ++i) big *= 10;
    CHECK(bigcount_str(big) == "10000000000000000000000000");
}

#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fci/lattice.hpp"

namespace fci {

// Bit-encoded fermion occupation; bit i = site i occupied.
struct OccupationConfig {
    std::uint64_t mask = 0;
    int particles() const noexcept { return std::popcount(mask); }
    friend bool operator==(const OccupationConfig&, const OccupationConfig&) = default;
};

struct CouplingConstants {
    double g1 = 1.0;
    double g2 = 1.0;
};

// Exact integer pair multiplicities: classical energy = g1*m1 + g2*m2.
// m1 counts U1 and U3 pairs, m2 counts U2 pairs, both with wrap multiplicity.
struct PairCounts {
    std::uint32_t m1 = 0;
    std::uint32_t m2 = 0;
    friend bool operator==(const PairCounts&, const PairCounts&) = default;
    friend auto operator<=>(const PairCounts&, const PairCounts&) = default;  // lexicographic
    double energy(const CouplingConstants& g) const noexcept { return g.g1 * m1 + g.g2 * m2; }
};

// numeric compares g1*m1 + g2*m2; lexicographic compares (m1, m2), which is
// the g1 >> g2 regime taken literally.
enum class GroundSearchMode { numeric, lexicographic };

struct GroundStateReport {
    GroundSearchMode mode = GroundSearchMode::lexicographic;
    PairCounts min_counts;       // pair counts of the first minimizer found
    bool counts_uniform = true;  // all minimizers share min_counts (always true in lex mode)
    double min_energy = 0.0;     // numeric-mode minimum (also filled in lex mode)
    std::uint64_t degeneracy = 0;
    std::vector<OccupationConfig> configurations;  // first `cap` minimizers, ascending mask
    std::size_t cap = 0;
    std::vector<std::optional<SublatticeId>> sectors;  // per listed configuration
};

inline constexpr std::uint64_t default_enumeration_budget = 100'000'000;
inline constexpr std::size_t default_config_cap = 64;

PairCounts interaction_pair_counts(OccupationConfig config, const TorusLattice& lat);

// Exhaustive scan over all n-particle configurations. Throws
// Errc::budget_exceeded when binomial(sites, n) exceeds the budget.
GroundStateReport enumerate_ground_states(const TorusLattice& lat, int particles,
                                          CouplingConstants couplings, GroundSearchMode mode,
                                          std::uint64_t budget = default_enumeration_budget,
                                          std::size_t cap = default_config_cap);

using BigCount = unsigned __int128;
std::string bigcount_str(BigCount v);

// Exact count of configurations with PairCounts == (0, 0) and exactly n
// particles, by row-transfer DP with periodic closure over the first two
// rows. Requires width <= 12 (state = two row masks).
BigCount count_min_energy_configs_dp(const TorusLattice& lat, int particles);

// (a, b) iff the configuration occupies exactly the sublattice (a, b).
std::optional<SublatticeId> classify_sector(OccupationConfig config, const TorusLattice& lat);

// The sublattice diagonally offset from the sector's occupied pattern:
// sector (a, b) -> sublattice (1-a, 1-b).
SublatticeId green_sublattice(SublatticeId sector);
std::vector<int> green_sites(SublatticeId sector, const TorusLattice& lat);

// binomial(n, k) saturating at the uint64 max.
std::uint64_t binomial(int n, int k);

}  // namespace fci

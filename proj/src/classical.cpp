#include "fci/classical.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "fci/kernels/pair_count.hpp"

namespace fci {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigCount r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<BigCount>(n - k + i) / static_cast<BigCount>(i);
        if (r > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

std::string bigcount_str(BigCount v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

PairCounts interaction_pair_counts(OccupationConfig config, const TorusLattice& lat) {
    const auto tables = kernels::make_pair_count_tables(lat);
    if ((config.mask & ~tables.full_mask) != 0)
        throw std::invalid_argument("configuration has bits outside the lattice");
    std::uint32_t m1 = 0, m2 = 0;
    kernels::pair_counts_scalar(tables, &config.mask, 1, &m1, &m2);
    return {m1, m2};
}

namespace {

// Gosper's hack: next n-bit combination above v.
inline std::uint64_t next_combination(std::uint64_t v) {
    const std::uint64_t t = v | (v - 1);
    return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

GroundStateReport enumerate_ground_states(const TorusLattice& lat, int particles,
                                          CouplingConstants couplings, GroundSearchMode mode,
                                          std::uint64_t budget, std::size_t cap) {
    if (lat.sites() > 64) throw std::invalid_argument("enumeration needs at most 64 sites");
    if (particles < 0 || particles > lat.sites())
        throw std::invalid_argument("particle count out of range");
    if (couplings.g1 <= 0 || couplings.g2 <= 0)
        throw std::invalid_argument("coupling constants must be positive");

    const std::uint64_t total = binomial(lat.sites(), particles);
    if (total > budget)
        raise(Errc::budget_exceeded,
              "binomial(" + std::to_string(lat.sites()) + "," + std::to_string(particles) +
                  ") = " + std::to_string(total) + " exceeds the enumeration budget " +
                  std::to_string(budget) + "; use count_min_energy_configs_dp instead");

    const auto tables = kernels::make_pair_count_tables(lat);

    GroundStateReport rep;
    rep.mode = mode;
    rep.cap = cap;
    rep.degeneracy = 0;

    PairCounts best_counts{std::numeric_limits<std::uint32_t>::max(),
                           std::numeric_limits<std::uint32_t>::max()};
    double best_energy = std::numeric_limits<double>::infinity();

    constexpr std::size_t batch = 1024;
    std::uint64_t masks[batch];
    std::uint32_t m1[batch], m2[batch];

    std::uint64_t mask = particles == 0 ? 0 : (~std::uint64_t{0} >> (64 - particles));
    bool done = false;
    while (!done) {
        std::size_t fill = 0;
        if (particles == 0) {
            masks[fill++] = 0;
            done = true;
        } else {
            while (fill < batch && mask <= tables.full_mask && (mask & ~tables.full_mask) == 0) {
                masks[fill++] = mask;
                if (mask == (tables.full_mask & (tables.full_mask << (lat.sites() - particles)))) {
                    done = true;  // highest combination reached
                    break;
                }
                mask = next_combination(mask);
            }
            if (fill == 0) break;
        }
        kernels::pair_counts_batch(tables, masks, fill, m1, m2);
        for (std::size_t i = 0; i < fill; ++i) {
            const PairCounts pc{m1[i], m2[i]};
            bool better, equal;
            if (mode == GroundSearchMode::lexicographic) {
                better = pc < best_counts;
                equal = pc == best_counts;
            } else {
                const double e = pc.energy(couplings);
                better = e < best_energy;
                equal = e == best_energy;
            }
            if (better) {
                best_counts = pc;
                best_energy = pc.energy(couplings);
                rep.min_counts = pc;
                rep.counts_uniform = true;
                rep.degeneracy = 1;
                rep.configurations.clear();
                rep.configurations.push_back({masks[i]});
            } else if (equal) {
                ++rep.degeneracy;
                if (pc != rep.min_counts) rep.counts_uniform = false;
                if (rep.configurations.size() < cap) rep.configurations.push_back({masks[i]});
            }
        }
    }
    rep.min_energy = best_energy;
    rep.sectors.reserve(rep.configurations.size());
    for (const auto& c : rep.configurations) rep.sectors.push_back(classify_sector(c, lat));
    return rep;
}

BigCount count_min_energy_configs_dp(const TorusLattice& lat, int particles) {
    const int w = lat.width();
    const int h = lat.height();
    if (w > 12)
        raise(Errc::width_exceeded, "transfer DP supports width <= 12, got " + std::to_string(w));
    if (particles < 0 || particles > lat.sites()) return 0;
    const int n = particles;

    const std::uint32_t full = (1u << w) - 1;
    const auto rotw = [w, full](std::uint32_t m, int k) {
        k = ((k % w) + w) % w;
        if (k == 0) return m;
        return ((m << k) | (m >> (w - k))) & full;
    };
    const auto spread1 = [&](std::uint32_t m) { return rotw(m, 1) | rotw(m, w - 1); };
    const auto spread2 = [&](std::uint32_t m) {
        return m | spread1(m) | rotw(m, 2) | rotw(m, w - 2);
    };

    // rows with no cyclic nearest-neighbor pair (the only within-row constraint)
    std::vector<std::uint32_t> rows;
    for (std::uint32_t m = 0; m <= full; ++m)
        if ((m & rotw(m, 1)) == 0) rows.push_back(m);

    // row pairs at vertical distance 1 forbid column offsets {0, +-1, +-2};
    // at distance 2 they forbid offsets {+-1}
    const auto pair1_ok = [&](std::uint32_t u, std::uint32_t v) { return (v & spread2(u)) == 0; };
    const auto pair2_ok = [&](std::uint32_t u, std::uint32_t v) { return (v & spread1(u)) == 0; };

    const int max_per_row = w / 2;
    BigCount total = 0;

    // key packs the last two row masks
    using StateCounts = std::vector<BigCount>;  // index = particles placed
    for (std::uint32_t a : rows) {
        const int pa = std::popcount(a);
        if (pa > n) continue;
        for (std::uint32_t b : rows) {
            if (!pair1_ok(a, b)) continue;
            const int pb = std::popcount(b);
            if (pa + pb > n) continue;

            std::unordered_map<std::uint32_t, StateCounts> cur;
            {
                StateCounts init(n + 1, 0);
                init[pa + pb] = 1;
                cur.emplace((a << w) | b, std::move(init));
            }
            for (int row = 2; row < h; ++row) {
                const int rows_left = h - row;
                std::unordered_map<std::uint32_t, StateCounts> next;
                for (const auto& [key, counts] : cur) {
                    const std::uint32_t u = key >> w;
                    const std::uint32_t v = key & full;
                    for (std::uint32_t s : rows) {
                        if (!pair1_ok(v, s) || !pair2_ok(u, s)) continue;
                        const int ps = std::popcount(s);
                        auto* dst = &next[(v << w) | s];
                        if (dst->empty()) dst->assign(n + 1, 0);
                        for (int p = 0; p + ps <= n; ++p) {
                            if (counts[p] == 0) continue;
                            // feasibility: remaining rows must be able to reach n
                            if (p + ps + (rows_left - 1) * max_per_row < n) continue;
                            (*dst)[p + ps] += counts[p];
                        }
                    }
                }
                cur = std::move(next);
            }
            for (const auto& [key, counts] : cur) {
                const std::uint32_t u = key >> w;
                const std::uint32_t v = key & full;
                if (pair1_ok(v, a) && pair2_ok(v, b) && pair2_ok(u, a)) total += counts[n];
            }
        }
    }
    return total;
}

std::optional<SublatticeId> classify_sector(OccupationConfig config, const TorusLattice& lat) {
    for (const SublatticeId& id : sublattice_order)
        if (config.mask == sublattice_mask(lat, id)) return id;
    return std::nullopt;
}

SublatticeId green_sublattice(SublatticeId sector) { return {1 - sector.a, 1 - sector.b}; }

std::vector<int> green_sites(SublatticeId sector, const TorusLattice& lat) {
    return sublattice_sites(lat, green_sublattice(sector));
}

}  // namespace fci

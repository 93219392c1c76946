#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fci/errors.hpp"

namespace fci {

// 0-based torus coordinates. The site with linear index i sits at
// (i % W, i / W); both directions wrap.
struct Coord {
    int x1 = 0;
    int x2 = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
};

enum class DisplacementSet { u1, u2, u3 };

// Periodic W x H square lattice, W and H even and >= 4.
class TorusLattice {
public:
    TorusLattice(int width, int height);

    int width() const noexcept { return w_; }
    int height() const noexcept { return h_; }
    int sites() const noexcept { return w_ * h_; }

    // True for the W = H = 4L family.
    bool canonical() const noexcept { return w_ == h_ && w_ % 4 == 0; }

    int index(Coord c) const noexcept {
        const int x1 = mod(c.x1, w_);
        const int x2 = mod(c.x2, h_);
        return x2 * w_ + x1;
    }
    Coord coord(int site) const noexcept { return {site % w_, site / w_}; }

    int translate(int site, int d1, int d2) const noexcept {
        const Coord c = coord(site);
        return index({c.x1 + d1, c.x2 + d2});
    }

    static int mod(int a, int m) noexcept {
        const int r = a % m;
        return r < 0 ? r + m : r;
    }

private:
    int w_;
    int h_;
};

// Fixed ordered displacement lists:
//   U1 = {+e1, -e1, +e2, -e2}
//   U2 = {+e1+e2, -e1+e2, +e1-e2, -e1-e2}
//   U3 = {e1+2e2, -e1+2e2, e1-2e2, -e1-2e2, 2e1+e2, 2e1-e2, -2e1+e2, -2e1-e2}
// Each set is closed under negation.
const std::vector<Coord>& displacements(DisplacementSet s);

// Negation-free halves, one representative per {d, -d} pair. Summing ordered
// pairs over a half set equals half the double sum over the full set.
const std::vector<Coord>& displacement_half(DisplacementSet s);

// One of the four period-2 sublattices: {(x1, x2) : x1 = a, x2 = b (mod 2)}.
struct SublatticeId {
    int a = 0;
    int b = 0;
    friend bool operator==(const SublatticeId&, const SublatticeId&) = default;
};

// Canonical order used for sector vectors and CLI arguments.
inline constexpr std::array<SublatticeId, 4> sublattice_order{
    SublatticeId{0, 0}, SublatticeId{1, 0}, SublatticeId{0, 1}, SublatticeId{1, 1}};

// Wrapped site + delta for every delta in the chosen set, in the set's fixed
// order. Duplicates are retained when distinct deltas wrap to the same site.
std::vector<int> neighbors(const TorusLattice& lat, int site, DisplacementSet set);

// Row-major list of the W*H/4 sites with matching parities.
std::vector<int> sublattice_sites(const TorusLattice& lat, SublatticeId id);

// Bitmask form of sublattice_sites; requires sites() <= 64.
std::uint64_t sublattice_mask(const TorusLattice& lat, SublatticeId id);

}  // namespace fci

#include "fci/lattice.hpp"

#include <stdexcept>

namespace fci {

TorusLattice::TorusLattice(int width, int height) : w_(width), h_(height) {
    if (w_ < 4 || h_ < 4 || w_ % 2 != 0 || h_ % 2 != 0)
        throw std::invalid_argument("lattice must have even width and height, both >= 4");
}

const std::vector<Coord>& displacements(DisplacementSet s) {
    static const std::vector<Coord> u1{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    static const std::vector<Coord> u2{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
    static const std::vector<Coord> u3{{1, 2},  {-1, 2}, {1, -2}, {-1, -2},
                                       {2, 1},  {2, -1}, {-2, 1}, {-2, -1}};
    switch (s) {
        case DisplacementSet::u1: return u1;
        case DisplacementSet::u2: return u2;
        case DisplacementSet::u3: return u3;
    }
    throw std::invalid_argument("unknown displacement set");
}

const std::vector<Coord>& displacement_half(DisplacementSet s) {
    static const std::vector<Coord> u1{{1, 0}, {0, 1}};
    static const std::vector<Coord> u2{{1, 1}, {-1, 1}};
    static const std::vector<Coord> u3{{1, 2}, {-1, 2}, {2, 1}, {2, -1}};
    switch (s) {
        case DisplacementSet::u1: return u1;
        case DisplacementSet::u2: return u2;
        case DisplacementSet::u3: return u3;
    }
    throw std::invalid_argument("unknown displacement set");
}

std::vector<int> neighbors(const TorusLattice& lat, int site, DisplacementSet set) {
    if (site < 0 || site >= lat.sites()) throw std::invalid_argument("site out of range");
    const auto& deltas = displacements(set);
    std::vector<int> out;
    out.reserve(deltas.size());
    for (const Coord& d : deltas) out.push_back(lat.translate(site, d.x1, d.x2));
    return out;
}

std::vector<int> sublattice_sites(const TorusLattice& lat, SublatticeId id) {
    std::vector<int> out;
    out.reserve(lat.sites() / 4);
    for (int s = 0; s < lat.sites(); ++s) {
        const Coord c = lat.coord(s);
        if (c.x1 % 2 == id.a && c.x2 % 2 == id.b) out.push_back(s);
    }
    return out;
}

std::uint64_t sublattice_mask(const TorusLattice& lat, SublatticeId id) {
    if (lat.sites() > 64) throw std::invalid_argument("bitmask form needs at most 64 sites");
    std::uint64_t m = 0;
    for (int s : sublattice_sites(lat, id)) m |= std::uint64_t{1} << s;
    return m;
}

}  // namespace fci

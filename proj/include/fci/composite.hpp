#pragma once

#include <array>

#include <Eigen/Dense>

#include "fci/chern.hpp"
#include "fci/classical.hpp"
#include "fci/rational.hpp"

namespace fci {

// HK model parameters of the copy living on the sector's green sublattice.
// alternation_origin rotates the +-t2 column pattern within the embedding;
// 0 keeps all four copies in phase in original torus coordinates.
struct SectorSpec {
    SublatticeId sector;
    HKParams params;
    int alternation_origin = 0;
};

enum class PhaseLabel { fci, cdw, other };

struct CompositeReport {
    std::array<int, 4> sigma{};  // per sublattice_order entry of the sector id
    Rational average;            // (sum sigma) / 4, reduced
    PhaseLabel phase = PhaseLabel::other;
    bool translation_invariant_e1 = false;
    bool translation_invariant_e2 = false;
};

const char* phase_name(PhaseLabel p);

// |sum| = 4 -> CDW, |sum| = 2 -> FCI, sum = 0 -> OTHER.
PhaseLabel classify_phase(int sigma_sum);

enum class ChernMethod { plaquette, analytic, loop };

// Chern number of the half-filled HK copy on the sector's green sublattice.
int sector_chern(const SectorSpec& spec, ChernMethod method, int grid = 24);

inline constexpr int default_composite_check_size = 8;

// Per-sector Chern vector, exact-rational average, phase label, and the
// translation flags of the total hopping matrix on an embeddable check
// lattice (default 8 x 8, zero twists).
CompositeReport composite_chern(const std::array<SectorSpec, 4>& specs, int grid = 24,
                                int check_size = default_composite_check_size);

// Four decoupled HK copies, one per period-2 sublattice, each embedded with
// spacing 2 on its sector's green sublattice. Requires W and H multiples
// of 4 (the sector sublattice is W/2 x H/2, read as 2*L1 x L2).
Eigen::MatrixXcd build_total_hopping(const TorusLattice& lat,
                                     const std::array<SectorSpec, 4>& specs,
                                     TwistAngles twists = {});

// True iff conjugating by the torus-translation permutation leaves the
// matrix exactly unchanged.
bool translation_check(const Eigen::MatrixXcd& m, const TorusLattice& lat, Coord shift);

}  // namespace fci

#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fci/composite.hpp"

namespace fci {

inline constexpr std::size_t max_fock_dimension = 1'000'000;
inline constexpr std::size_t dense_diag_threshold = 10'000;
inline constexpr std::size_t symmetry_split_threshold = 2'048;
inline constexpr double cluster_gap_factor = 10.0;

// n-particle occupation bitmasks in ascending order, with index lookup.
// Fermionic signs follow the row-major site order.
struct FockBasis {
    int sites = 0;
    int particles = 0;
    std::vector<std::uint64_t> masks;

    static FockBasis build(const TorusLattice& lat, int particles,
                           std::size_t limit = max_fock_dimension);
    std::size_t dimension() const noexcept { return masks.size(); }
    std::size_t index(std::uint64_t mask) const;  // throws if absent
};

// Sparse Hermitian operator on the Fock basis: interaction diagonal plus
// single-hop off-diagonals from a site-space hopping matrix.
struct ManyBodyHamiltonian {
    TorusLattice lattice;
    FockBasis basis;
    CouplingConstants couplings;
    Eigen::MatrixXcd hopping;  // site-space matrix the hops came from
    std::vector<double> diag;  // g1*m1 + g2*m2 per basis state
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<Complex> val;
    bool hopping_sublattice_diagonal = false;

    std::size_t dimension() const noexcept { return basis.dimension(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::MatrixXcd dense() const;
};

ManyBodyHamiltonian build_many_body(const TorusLattice& lat, int particles,
                                    const std::array<SectorSpec, 4>& specs,
                                    CouplingConstants couplings, TwistAngles twists = {});

// Same assembly from an arbitrary Hermitian site-space hopping matrix.
ManyBodyHamiltonian build_many_body_from_hopping(const TorusLattice& lat, int particles,
                                                 const Eigen::MatrixXcd& hopping,
                                                 CouplingConstants couplings);

struct SpectrumCluster {
    std::size_t start = 0;
    std::size_t size = 0;
    double splitting = 0.0;  // max consecutive gap inside the cluster
};

struct ManyBodySpectrum {
    std::vector<double> eigenvalues;  // ascending, lowest m
    std::vector<SpectrumCluster> clusters;
    Eigen::MatrixXcd vectors;  // columns; empty unless requested
};

enum class DiagMethod { automatic, dense, lanczos, symmetry_split };

// Lowest m eigenvalues. The automatic route goes dense below
// dense_diag_threshold, splits by conserved per-sublattice particle numbers
// when the hopping allows it, and otherwise falls back to Lanczos with full
// reorthogonalization (deterministic start vector).
ManyBodySpectrum low_spectrum(const ManyBodyHamiltonian& h, std::size_t m,
                              bool want_vectors = false,
                              DiagMethod method = DiagMethod::automatic);

std::vector<SpectrumCluster> cluster_spectrum(std::span<const double> eigenvalues);

struct ScanRow {
    double g1 = 0.0;
    double max_deviation = 0.0;
};

// Compares the lowest 4*C(greens, extra) eigenvalues of the full Hamiltonian
// against {4*extra*g2 + per-sector free spectra on the green blocks} for each
// g1. Each g1 must be >= 10*(g2 + max hopping scale).
std::vector<ScanRow> strong_coupling_scan(const TorusLattice& lat, int particles,
                                          const std::array<SectorSpec, 4>& specs, double g2,
                                          std::span<const double> g1_values);

struct TwistGrid {
    int n = 8;
};

// Many-body Chern number of the Slater ground state over the twist torus,
// via determinant-overlap links. nocc = -1 means half filling.
int slater_chern(const SectorSpec& spec, HKLatticeSize green, TwistGrid grid, int nocc = -1);

// Same computation for any twist-parametrized Hermitian matrix family.
int slater_chern_from_builder(const std::function<Eigen::MatrixXcd(TwistAngles)>& builder,
                              int nocc, TwistGrid grid);

// (sum of per-sector Slater Chern numbers) / 4, exact.
Rational composite_many_body_chern(const std::array<SectorSpec, 4>& specs,
                                   HKLatticeSize green, TwistGrid grid);

// S(Q) from weighted classical configurations (weights summing to 1):
// S(Q) = (1/N) sum_w w |F_w(Q)|^2 - (nu^2/N) |sum_x e^{iQx}|^2 with
// F_w(Q) = sum_x e^{iQx} n_x(w).
double structure_factor(const TorusLattice& lat, std::span<const std::uint64_t> masks,
                        std::span<const double> weights, double q1, double q2);
double structure_factor(const TorusLattice& lat, OccupationConfig config, double q1, double q2);
// Connected density-density form for an eigenvector on the Fock basis.
double structure_factor(const TorusLattice& lat, const FockBasis& basis,
                        const Eigen::VectorXcd& state, double q1, double q2);

}  // namespace fci

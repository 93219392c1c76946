#include "fci/many_body.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <lapacke.h>

#include "fci/kernels/pair_count.hpp"

namespace fci {

namespace {
constexpr double pi = std::numbers::pi;
}

FockBasis FockBasis::build(const TorusLattice& lat, int particles, std::size_t limit) {
    if (lat.sites() > 64) throw std::invalid_argument("Fock basis needs at most 64 sites");
    if (particles < 0 || particles > lat.sites())
        throw std::invalid_argument("particle count out of range");
    const std::uint64_t dim = binomial(lat.sites(), particles);
    if (dim > limit)
        raise(Errc::dimension_exceeded,
              "Fock dimension " + std::to_string(dim) + " exceeds the limit " +
                  std::to_string(limit));

    FockBasis b;
    b.sites = lat.sites();
    b.particles = particles;
    b.masks.reserve(dim);
    if (particles == 0) {
        b.masks.push_back(0);
        return b;
    }
    const std::uint64_t full =
        lat.sites() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lat.sites()) - 1;
    const std::uint64_t last = full & (full << (lat.sites() - particles));
    std::uint64_t mask = ~std::uint64_t{0} >> (64 - particles);
    while (true) {
        b.masks.push_back(mask);
        if (mask == last) break;
        const std::uint64_t t = mask | (mask - 1);
        mask = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(mask) + 1));
    }
    return b;
}

std::size_t FockBasis::index(std::uint64_t mask) const {
    const auto it = std::lower_bound(masks.begin(), masks.end(), mask);
    if (it == masks.end() || *it != mask)
        throw std::invalid_argument("mask is not a basis element");
    return static_cast<std::size_t>(it - masks.begin());
}

namespace {

// sign of a_to^dagger a_from on |mask>; from occupied, to empty, from != to
inline int hop_sign(std::uint64_t mask, int from, int to) {
    const std::uint64_t below_from = (std::uint64_t{1} << from) - 1;
    int crossings = std::popcount(mask & below_from);
    const std::uint64_t without = mask ^ (std::uint64_t{1} << from);
    const std::uint64_t below_to = (std::uint64_t{1} << to) - 1;
    crossings += std::popcount(without & below_to);
    return (crossings & 1) ? -1 : 1;
}

}  // namespace

ManyBodyHamiltonian build_many_body_from_hopping(const TorusLattice& lat, int particles,
                                                 const Eigen::MatrixXcd& hopping,
                                                 CouplingConstants couplings) {
    if (hopping.rows() != lat.sites() || hopping.cols() != lat.sites())
        throw std::invalid_argument("hopping matrix dimension does not match the lattice");
    if ((hopping - hopping.adjoint()).cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("hopping matrix must be exactly Hermitian");

    ManyBodyHamiltonian h{lat, FockBasis::build(lat, particles), couplings, hopping,
                          {},  {},                               {},        {},
                          false};

    // interaction diagonal
    const std::size_t dim = h.dimension();
    h.diag.resize(dim);
    {
        const auto tables = kernels::make_pair_count_tables(lat);
        std::vector<std::uint32_t> m1(dim), m2(dim);
        kernels::pair_counts_batch(tables, h.basis.masks.data(), dim, m1.data(), m2.data());
        for (std::size_t i = 0; i < dim; ++i)
            h.diag[i] = couplings.g1 * m1[i] + couplings.g2 * m2[i];
    }

    // nonzero off-diagonal hops, plus any on-site terms folded into the diagonal
    struct Hop {
        int to;
        int from;
        Complex amp;
    };
    std::vector<Hop> hops;
    std::vector<double> onsite(lat.sites(), 0.0);
    for (int to = 0; to < lat.sites(); ++to)
        for (int from = 0; from < lat.sites(); ++from) {
            const Complex a = hopping(to, from);
            if (a == Complex(0.0, 0.0)) continue;
            if (to == from)
                onsite[to] += a.real();
            else
                hops.push_back({to, from, a});
        }

    const auto sub_of = [&lat](int site) {
        const Coord c = lat.coord(site);
        return (c.x1 % 2) * 2 + (c.x2 % 2);
    };
    h.hopping_sublattice_diagonal = std::all_of(hops.begin(), hops.end(), [&](const Hop& e) {
        return sub_of(e.to) == sub_of(e.from);
    });

    h.row_ptr.assign(dim + 1, 0);
    std::vector<std::pair<std::uint32_t, Complex>> row;
    for (std::size_t r = 0; r < dim; ++r) {
        const std::uint64_t mask = h.basis.masks[r];
        for (int s = 0; s < lat.sites(); ++s)
            if (mask >> s & 1) h.diag[r] += onsite[s];
        row.clear();
        for (const Hop& e : hops) {
            if (!(mask >> e.from & 1) || (mask >> e.to & 1)) continue;
            const std::uint64_t target =
                mask ^ (std::uint64_t{1} << e.from) ^ (std::uint64_t{1} << e.to);
            const int sign = hop_sign(mask, e.from, e.to);
            // H|r> lands on |target> with amplitude amp*sign, so row r of the
            // matrix carries the conjugate at that column
            row.emplace_back(static_cast<std::uint32_t>(h.basis.index(target)),
                             std::conj(e.amp) * static_cast<double>(sign));
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [c, v] : row) {
            h.col.push_back(c);
            h.val.push_back(v);
        }
        h.row_ptr[r + 1] = h.col.size();
    }
    return h;
}

ManyBodyHamiltonian build_many_body(const TorusLattice& lat, int particles,
                                    const std::array<SectorSpec, 4>& specs,
                                    CouplingConstants couplings, TwistAngles twists) {
    return build_many_body_from_hopping(lat, particles, build_total_hopping(lat, specs, twists),
                                        couplings);
}

Eigen::VectorXcd ManyBodyHamiltonian::apply(const Eigen::VectorXcd& x) const {
    const std::size_t dim = dimension();
    Eigen::VectorXcd y(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        Complex acc = diag[r] * x[static_cast<Eigen::Index>(r)];
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            acc += val[k] * x[col[k]];
        y[static_cast<Eigen::Index>(r)] = acc;
    }
    return y;
}

Eigen::MatrixXcd ManyBodyHamiltonian::dense() const {
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        m(r, r) = diag[static_cast<std::size_t>(r)];
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) m(r, col[k]) += val[k];
    }
    return m;
}

namespace {

// eigenvalues (and optionally vectors) of a Hermitian matrix, in place
void heev_inplace(Eigen::MatrixXcd& a, std::vector<double>& w, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 0) return;
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                       reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0)
        raise(Errc::no_convergence, "zheevd failed with info " + std::to_string(info));
}

ManyBodySpectrum dense_spectrum(const ManyBodyHamiltonian& h, std::size_t m, bool want_vectors) {
    Eigen::MatrixXcd a = h.dense();
    std::vector<double> w;
    heev_inplace(a, w, want_vectors);
    ManyBodySpectrum out;
    out.eigenvalues.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
    if (want_vectors)
        out.vectors = a.leftCols(static_cast<Eigen::Index>(m));
    return out;
}

// Lanczos with full reorthogonalization on a Hermitian operator.
struct LanczosResult {
    std::vector<double> eigenvalues;
    Eigen::MatrixXcd vectors;
};

using MatVec = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct RitzPair {
    double value;
    Eigen::VectorXcd vector;
};

// One Krylov run in the orthogonal complement of `deflate`, converging the
// lowest `q` Ritz pairs of the restriction.
std::vector<RitzPair> lanczos_run(const MatVec& op, std::size_t dim,
                                  const std::vector<Eigen::VectorXcd>& deflate, std::size_t q,
                                  std::mt19937_64& rng) {
    const std::size_t free_dim = dim - deflate.size();
    q = std::min(q, free_dim);
    const std::size_t maxit = std::min(free_dim, std::max<std::size_t>(3 * q + 80, 200));
    const auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    };
    const auto project_out = [&](Eigen::VectorXcd& x) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : deflate) x -= u.dot(x) * u;
    };

    std::vector<Eigen::VectorXcd> basis;
    basis.reserve(maxit);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        v[static_cast<Eigen::Index>(i)] = Complex(uniform(), uniform());
    project_out(v);
    v.normalize();

    std::vector<double> alpha, beta;
    double scale = 1.0;
    for (std::size_t it = 0; it < maxit; ++it) {
        basis.push_back(v);
        Eigen::VectorXcd w = op(v);
        project_out(w);
        const double a = std::real(v.dot(w));
        alpha.push_back(a);
        scale = std::max(scale, std::abs(a));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) w -= u.dot(w) * u;
        const double b = w.norm();

        const std::size_t k = alpha.size();
        if (k >= q || k == free_dim) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
            for (std::size_t i = 0; i < k; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            bool converged = true;
            for (std::size_t i = 0; i < q && converged; ++i)
                if (b * std::abs(es.eigenvectors()(k - 1, i)) > 1e-11 * scale)
                    converged = false;
            if (converged || k == free_dim) {
                if (!converged && b > 1e-7 * scale)
                    raise(Errc::no_convergence,
                          "Lanczos exhausted the subspace with residual " + std::to_string(b));
                std::vector<RitzPair> out;
                for (std::size_t i = 0; i < q; ++i) {
                    Eigen::VectorXcd x =
                        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
                    for (std::size_t j = 0; j < k; ++j) x += es.eigenvectors()(j, i) * basis[j];
                    out.push_back({es.eigenvalues()[static_cast<Eigen::Index>(i)],
                                   x.normalized()});
                }
                return out;
            }
        }

        if (b < 1e-13 * scale) {
            // invariant subspace; continue in a fresh orthogonal direction
            Eigen::VectorXcd f(static_cast<Eigen::Index>(dim));
            for (std::size_t i = 0; i < dim; ++i)
                f[static_cast<Eigen::Index>(i)] = Complex(uniform(), uniform());
            project_out(f);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : basis) f -= u.dot(f) * u;
            const double fn = f.norm();
            if (fn < 1e-13) break;
            beta.push_back(0.0);
            v = f / fn;
        } else {
            beta.push_back(b);
            v = w / b;
        }
    }
    raise(Errc::no_convergence, "Lanczos did not converge " + std::to_string(q) +
                                    " eigenpairs in " + std::to_string(maxit) + " iterations");
}

// A single Krylov run finds one Ritz pair per eigenspace, so degenerate
// levels need repeated runs deflated against everything found so far. Rounds
// stop once the next-lowest remaining eigenvalue provably exceeds the m-th
// collected one.
LanczosResult lanczos_lowest(const MatVec& op, std::size_t dim, std::size_t m,
                             bool want_vectors) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::vector<RitzPair> found;
    std::vector<Eigen::VectorXcd> deflate;
    const std::size_t max_rounds = m + 4;
    double spread = 1.0;
    bool certified = false;

    for (std::size_t round = 0; round < max_rounds && !certified; ++round) {
        const std::size_t need = found.size() < m ? m - found.size() : 1;
        auto got = lanczos_run(op, dim, deflate, need, rng);
        if (got.empty()) break;
        const double lowest_new = got.front().value;
        for (auto& pair : got) {
            spread = std::max(spread, std::abs(pair.value));
            deflate.push_back(pair.vector);
            found.push_back(std::move(pair));
        }
        std::sort(found.begin(), found.end(),
                  [](const RitzPair& a, const RitzPair& b) { return a.value < b.value; });
        certified = (found.size() >= m && deflate.size() >= dim) ||
                    (found.size() > m && lowest_new >= found[m - 1].value - 1e-10 * spread);
    }
    if (found.size() < m || !certified)
        raise(Errc::no_convergence, "Lanczos rounds collected " + std::to_string(found.size()) +
                                        " certified eigenvalues, needed " + std::to_string(m));

    LanczosResult out;
    out.eigenvalues.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.eigenvalues.push_back(found[i].value);
    if (want_vectors) {
        out.vectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i)
            out.vectors.col(static_cast<Eigen::Index>(i)) = found[i].vector;
    }
    return out;
}

ManyBodySpectrum lanczos_spectrum(const ManyBodyHamiltonian& h, std::size_t m, bool want_vectors) {
    const auto op = [&h](const Eigen::VectorXcd& x) { return h.apply(x); };
    LanczosResult r = lanczos_lowest(op, h.dimension(), m, want_vectors);
    ManyBodySpectrum out;
    out.eigenvalues = std::move(r.eigenvalues);
    out.vectors = std::move(r.vectors);
    return out;
}

// Diagonalization split over the conserved per-sublattice particle numbers.
ManyBodySpectrum split_spectrum(const ManyBodyHamiltonian& h, std::size_t m, bool want_vectors) {
    const std::size_t dim = h.dimension();
    std::array<std::uint64_t, 4> sub_masks{};
    for (std::size_t s = 0; s < 4; ++s)
        sub_masks[s] = sublattice_mask(h.lattice, sublattice_order[s]);

    std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t mask = h.basis.masks[i];
        std::uint32_t key = 0;
        for (std::size_t s = 0; s < 4; ++s)
            key = key << 8 | static_cast<std::uint32_t>(std::popcount(mask & sub_masks[s]));
        groups[key].push_back(static_cast<std::uint32_t>(i));
    }

    struct Entry {
        double value;
        std::uint32_t group;
        std::uint32_t local;
    };
    std::vector<Entry> all;
    all.reserve(dim);
    std::vector<std::vector<std::uint32_t>> group_list;
    std::vector<Eigen::MatrixXcd> group_vectors;

    for (const auto& [key, idx] : groups) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::size_t gr = idx[static_cast<std::size_t>(r)];
            block(r, r) = h.diag[gr];
            for (std::size_t k = h.row_ptr[gr]; k < h.row_ptr[gr + 1]; ++k) {
                const auto it = std::lower_bound(idx.begin(), idx.end(), h.col[k]);
                if (it == idx.end() || *it != h.col[k])
                    throw std::logic_error("hop leaves the symmetry block");
                block(r, static_cast<Eigen::Index>(it - idx.begin())) += h.val[k];
            }
        }
        std::vector<double> w;
        heev_inplace(block, w, want_vectors);
        const auto g = static_cast<std::uint32_t>(group_list.size());
        for (std::uint32_t l = 0; l < idx.size(); ++l) all.push_back({w[l], g, l});
        group_list.push_back(idx);
        if (want_vectors) group_vectors.push_back(std::move(block));
    }

    std::stable_sort(all.begin(), all.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });
    ManyBodySpectrum out;
    out.eigenvalues.reserve(m);
    if (want_vectors)
        out.vectors = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        out.eigenvalues.push_back(all[i].value);
        if (want_vectors) {
            const auto& idx = group_list[all[i].group];
            const auto& vecs = group_vectors[all[i].group];
            for (std::size_t r = 0; r < idx.size(); ++r)
                out.vectors(idx[r], static_cast<Eigen::Index>(i)) =
                    vecs(static_cast<Eigen::Index>(r), all[i].local);
        }
    }
    return out;
}

}  // namespace

std::vector<SpectrumCluster> cluster_spectrum(std::span<const double> e) {
    std::vector<SpectrumCluster> out;
    if (e.empty()) return out;
    const double scale =
        std::max({1.0, std::abs(e.front()), std::abs(e.back())});
    const double floor = 1e-12 * scale;
    SpectrumCluster cur{0, 1, 0.0};
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        const double gap = e[i + 1] - e[i];
        if (gap > cluster_gap_factor * std::max(cur.splitting, floor)) {
            out.push_back(cur);
            cur = {i + 1, 1, 0.0};
        } else {
            cur.splitting = std::max(cur.splitting, gap);
            ++cur.size;
        }
    }
    out.push_back(cur);
    return out;
}

ManyBodySpectrum low_spectrum(const ManyBodyHamiltonian& h, std::size_t m, bool want_vectors,
                              DiagMethod method) {
    const std::size_t dim = h.dimension();
    if (m == 0 || m > dim)
        throw std::invalid_argument("requested eigenvalue count out of range");

    if (method == DiagMethod::automatic) {
        if (h.hopping_sublattice_diagonal && dim > symmetry_split_threshold)
            method = DiagMethod::symmetry_split;
        else if (dim <= dense_diag_threshold)
            method = DiagMethod::dense;
        else
            method = DiagMethod::lanczos;
    }

    ManyBodySpectrum out;
    switch (method) {
        case DiagMethod::dense: out = dense_spectrum(h, m, want_vectors); break;
        case DiagMethod::symmetry_split:
            if (!h.hopping_sublattice_diagonal)
                throw std::invalid_argument(
                    "symmetry split requires sublattice-diagonal hopping");
            out = split_spectrum(h, m, want_vectors);
            break;
        case DiagMethod::lanczos: out = lanczos_spectrum(h, m, want_vectors); break;
        case DiagMethod::automatic: break;  // unreachable
    }
    out.clusters = cluster_spectrum(out.eigenvalues);
    return out;
}

std::vector<ScanRow> strong_coupling_scan(const TorusLattice& lat, int particles,
                                          const std::array<SectorSpec, 4>& specs, double g2,
                                          std::span<const double> g1_values) {
    if (lat.width() % 4 != 0 || lat.height() % 4 != 0)
        raise(Errc::size_not_embeddable, "scan lattice must embed the HK copies");
    const int quarter = lat.sites() / 4;
    const int extra = particles - quarter;
    if (extra < 1 || extra > quarter)
        throw std::invalid_argument("scan needs quarter filling plus 1..W*H/4 extra fermions");
    if (!(g2 > 0)) throw std::invalid_argument("g2 must be positive");
    if (g1_values.empty()) throw std::invalid_argument("empty g1 list");

    double tmax = 0.0;
    for (const auto& s : specs) tmax = std::max(tmax, s.params.max_abs());
    for (std::size_t i = 0; i < g1_values.size(); ++i) {
        if (i > 0 && !(g1_values[i] > g1_values[i - 1]))
            throw std::invalid_argument("g1 values must be ascending");
        if (!(g1_values[i] >= 10.0 * (g2 + tmax)))
            raise(Errc::invalid_parameter,
                  "g1 = " + std::to_string(g1_values[i]) +
                      " is below the strong-coupling precondition 10*(g2 + max|t|)");
    }

    // reference: per sector, extra free fermions on the green block on top of
    // the 4*extra*g2 interaction offset
    const Eigen::MatrixXcd total = build_total_hopping(lat, specs);
    std::vector<double> ref;
    for (const SublatticeId& sector : sublattice_order) {
        const SectorSpec* spec = nullptr;
        for (const auto& s : specs)
            if (s.sector == sector) spec = &s;
        const std::vector<int> greens = green_sites(spec->sector, lat);
        const auto n = static_cast<Eigen::Index>(greens.size());
        Eigen::MatrixXcd block(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                block(r, c) = total(greens[static_cast<std::size_t>(r)],
                                    greens[static_cast<std::size_t>(c)]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
        const Eigen::VectorXd eps = es.eigenvalues();

        // all sums over extra-element subsets of the single-particle levels
        const int g = static_cast<int>(greens.size());
        std::uint64_t subset = (~std::uint64_t{0}) >> (64 - extra);
        const std::uint64_t last = ((std::uint64_t{1} << extra) - 1) << (g - extra);
        while (true) {
            double sum = 4.0 * extra * g2;
            for (int b = 0; b < g; ++b)
                if (subset >> b & 1) sum += eps[b];
            ref.push_back(sum);
            if (subset == last) break;
            const std::uint64_t t = subset | (subset - 1);
            subset = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(subset) + 1));
        }
    }
    std::sort(ref.begin(), ref.end());

    std::vector<ScanRow> rows;
    rows.reserve(g1_values.size());
    for (const double g1 : g1_values) {
        const ManyBodyHamiltonian h =
            build_many_body(lat, particles, specs, {g1, g2});
        const ManyBodySpectrum sp = low_spectrum(h, ref.size());
        double dev = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i)
            dev = std::max(dev, std::abs(sp.eigenvalues[i] - ref[i]));
        rows.push_back({g1, dev});
    }
    return rows;
}

int slater_chern_from_builder(const std::function<Eigen::MatrixXcd(TwistAngles)>& builder,
                              int nocc, TwistGrid grid) {
    if (grid.n < 6) throw std::invalid_argument("twist grid needs at least 6 points per side");

    std::vector<Eigen::MatrixXcd> frames(static_cast<std::size_t>(grid.n) * grid.n);
    const double step = 2.0 * pi / grid.n;
    Eigen::Index dim = 0;
    for (int a = 0; a < grid.n; ++a) {
        for (int b = 0; b < grid.n; ++b) {
            const Eigen::MatrixXcd h = builder({step * a, step * b});
            dim = h.rows();
            if (nocc < 0 || nocc > dim)
                throw std::invalid_argument("occupied-orbital count out of range");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            if (nocc > 0 && nocc < dim) {
                const double scale = std::max(
                    {1e-300, std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[dim - 1])});
                if (es.eigenvalues()[nocc] - es.eigenvalues()[nocc - 1] <= 1e-8 * scale)
                    raise(Errc::gap_closed_at_twist,
                          "spectrum closes at twist (" + std::to_string(step * a) + ", " +
                              std::to_string(step * b) + ")");
            }
            frames[static_cast<std::size_t>(a) * grid.n + b] = es.eigenvectors().leftCols(nocc);
        }
    }

    const auto frame = [&](int a, int b) -> const Eigen::MatrixXcd& {
        return frames[static_cast<std::size_t>(TorusLattice::mod(a, grid.n)) * grid.n +
                      static_cast<std::size_t>(TorusLattice::mod(b, grid.n))];
    };
    const auto link = [&](int a0, int b0, int a1, int b1) -> Complex {
        if (nocc == 0) return Complex(1.0, 0.0);
        return (frame(a0, b0).adjoint() * frame(a1, b1)).determinant();
    };

    // plaquette traversal matches the chern module's orientation convention
    double total = 0.0;
    for (int a = 0; a < grid.n; ++a) {
        for (int b = 0; b < grid.n; ++b) {
            const Complex prod = link(a, b, a, b + 1) * link(a, b + 1, a + 1, b + 1) *
                                 link(a + 1, b + 1, a + 1, b) * link(a + 1, b, a, b);
            if (prod == Complex(0.0, 0.0))
                raise(Errc::non_integer_residue, "vanishing determinant link on the twist grid");
            total += std::arg(prod);
        }
    }
    total /= 2.0 * pi;
    const double rounded = std::round(total);
    if (std::abs(total - rounded) >= residue_tolerance)
        raise(Errc::non_integer_residue,
              "twist-grid sum " + std::to_string(total) + " is not integral; refine the grid");
    return static_cast<int>(rounded);
}

int slater_chern(const SectorSpec& spec, HKLatticeSize green, TwistGrid grid, int nocc) {
    if (2 * green.l1 < 4 || green.l2 < 4)
        throw std::invalid_argument("green lattice must be at least 4x4 sites");
    if (nocc < 0) nocc = green.l1 * green.l2;
    const HKParams p = spec.params;
    return slater_chern_from_builder(
        [&p, green](TwistAngles tw) { return realspace_hamiltonian(p, green, tw); }, nocc, grid);
}

Rational composite_many_body_chern(const std::array<SectorSpec, 4>& specs, HKLatticeSize green,
                                   TwistGrid grid) {
    int sum = 0;
    for (const auto& s : specs) sum += slater_chern(s, green, grid);
    return Rational(sum, 4);
}

double structure_factor(const TorusLattice& lat, std::span<const std::uint64_t> masks,
                        std::span<const double> weights, double q1, double q2) {
    if (masks.size() != weights.size() || masks.empty())
        throw std::invalid_argument("masks and weights must match and be nonempty");
    const int sites = lat.sites();
    std::vector<Complex> phases(static_cast<std::size_t>(sites));
    Complex phase_sum(0.0, 0.0);
    for (int s = 0; s < sites; ++s) {
        const Coord c = lat.coord(s);
        phases[static_cast<std::size_t>(s)] = std::exp(Complex(0.0, q1 * c.x1 + q2 * c.x2));
        phase_sum += phases[static_cast<std::size_t>(s)];
    }

    double particles = 0.0;
    for (std::size_t i = 0; i < masks.size(); ++i)
        particles += weights[i] * std::popcount(masks[i]);
    const double nu = particles / sites;

    double sum = 0.0;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        Complex f(0.0, 0.0);
        std::uint64_t m = masks[i];
        while (m) {
            const int s = std::countr_zero(m);
            f += phases[static_cast<std::size_t>(s)];
            m &= m - 1;
        }
        sum += weights[i] * std::norm(f);
    }
    return sum / sites - nu * nu * std::norm(phase_sum) / sites;
}

double structure_factor(const TorusLattice& lat, OccupationConfig config, double q1, double q2) {
    const std::uint64_t mask = config.mask;
    const double weight = 1.0;
    return structure_factor(lat, {&mask, 1}, {&weight, 1}, q1, q2);
}

double structure_factor(const TorusLattice& lat, const FockBasis& basis,
                        const Eigen::VectorXcd& state, double q1, double q2) {
    if (static_cast<std::size_t>(state.size()) != basis.dimension())
        throw std::invalid_argument("state dimension does not match the basis");
    std::vector<double> weights(basis.dimension());
    double norm = 0.0;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        weights[i] = std::norm(state[static_cast<Eigen::Index>(i)]);
        norm += weights[i];
    }
    if (norm <= 0.0) throw std::invalid_argument("state has zero norm");
    for (double& w : weights) w /= norm;
    return structure_factor(lat, basis.masks, weights, q1, q2);
}

}  // namespace fci

#include "fci/composite.hpp"

#include <cmath>

namespace fci {

const char* phase_name(PhaseLabel p) {
    switch (p) {
        case PhaseLabel::fci: return "FCI";
        case PhaseLabel::cdw: return "CDW";
        case PhaseLabel::other: return "OTHER";
    }
    return "OTHER";
}

PhaseLabel classify_phase(int sigma_sum) {
    const int a = std::abs(sigma_sum);
    if (a == 4) return PhaseLabel::cdw;
    if (a == 2) return PhaseLabel::fci;
    return PhaseLabel::other;
}

int sector_chern(const SectorSpec& spec, ChernMethod method, int grid) {
    switch (method) {
        case ChernMethod::analytic: return chern_analytic(spec.params);
        case ChernMethod::plaquette: return chern_plaquette(spec.params, grid);
        case ChernMethod::loop: {
            const double v = chern_loop(spec.params, LoopSpec(0.05, 2048));
            const double r = std::round(v);
            if (std::abs(v - r) > 0.1)
                raise(Errc::non_integer_residue, "loop integral " + std::to_string(v) +
                                                     " too far from an integer");
            return static_cast<int>(r);
        }
    }
    throw std::invalid_argument("unknown Chern method");
}

namespace {

// specs reordered to sublattice_order, validated to cover all four sectors
std::array<const SectorSpec*, 4> ordered(const std::array<SectorSpec, 4>& specs) {
    std::array<const SectorSpec*, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (const SectorSpec& s : specs)
            if (s.sector == sublattice_order[i]) {
                if (out[i]) throw std::invalid_argument("duplicate sector in composite specs");
                out[i] = &s;
            }
        if (!out[i]) throw std::invalid_argument("composite specs must cover all four sectors");
    }
    return out;
}

}  // namespace

CompositeReport composite_chern(const std::array<SectorSpec, 4>& specs, int grid,
                                int check_size) {
    const auto by_order = ordered(specs);
    CompositeReport rep;
    int sum = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        rep.sigma[i] = sector_chern(*by_order[i], ChernMethod::plaquette, grid);
        sum += rep.sigma[i];
    }
    rep.average = Rational(sum, 4);
    rep.phase = classify_phase(sum);

    const TorusLattice check(check_size, check_size);
    const Eigen::MatrixXcd total = build_total_hopping(check, specs);
    rep.translation_invariant_e1 = translation_check(total, check, {1, 0});
    rep.translation_invariant_e2 = translation_check(total, check, {0, 1});
    return rep;
}

Eigen::MatrixXcd build_total_hopping(const TorusLattice& lat,
                                     const std::array<SectorSpec, 4>& specs,
                                     TwistAngles twists) {
    if (lat.width() % 4 != 0 || lat.height() % 4 != 0)
        raise(Errc::size_not_embeddable,
              "HK embedding needs width and height divisible by 4, got " +
                  std::to_string(lat.width()) + "x" + std::to_string(lat.height()));
    ordered(specs);  // validates coverage

    const int dim = lat.sites();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

    for (const SectorSpec& spec : specs) {
        const SublatticeId g = green_sublattice(spec.sector);
        const int lx = lat.width() / 2;   // embedded HK columns (= 2 L1)
        const int ly = lat.height() / 2;  // embedded HK rows (= L2)
        const HKParams& p = spec.params;
        const Complex itd(0.0, p.td);
        const int origin = TorusLattice::mod(spec.alternation_origin, 2);

        // row = equation site, column = site + (dc, dr); forward boundary
        // crossings of (dc, dr) carry the conjugate twist phase, as in
        // realspace_hamiltonian
        const auto add = [&](int c, int r, int dc, int dr, Complex amp) {
            double phase = 0.0;
            int tc = c + dc, tr = r + dr;
            if (tc >= lx) {
                tc -= lx;
                phase += twists.theta1;
            } else if (tc < 0) {
                tc += lx;
                phase -= twists.theta1;
            }
            if (tr >= ly) {
                tr -= ly;
                phase += twists.theta2;
            } else if (tr < 0) {
                tr += ly;
                phase -= twists.theta2;
            }
            const int row = lat.index({g.a + 2 * c, g.b + 2 * r});
            const int col = lat.index({g.a + 2 * tc, g.b + 2 * tr});
            h(row, col) += amp * std::exp(Complex(0.0, -phase));
        };

        for (int r = 0; r < ly; ++r) {
            for (int c = 0; c < lx; ++c) {
                if ((c + origin) % 2 == 0) {
                    add(c, r, -1, 0, p.t1);
                    add(c, r, +1, 0, p.t1);
                    add(c, r, 0, -1, p.t2);
                    add(c, r, 0, +1, p.t2);
                    add(c, r, -1, -1, -itd);
                    add(c, r, +1, +1, -itd);
                    add(c, r, +1, -1, itd);
                    add(c, r, -1, +1, itd);
                } else {
                    add(c, r, -1, 0, p.t1);
                    add(c, r, +1, 0, p.t1);
                    add(c, r, 0, -1, -p.t2);
                    add(c, r, 0, +1, -p.t2);
                    add(c, r, -1, -1, itd);
                    add(c, r, +1, +1, itd);
                    add(c, r, +1, -1, -itd);
                    add(c, r, -1, +1, -itd);
                }
            }
        }
    }
    return h;
}

bool translation_check(const Eigen::MatrixXcd& m, const TorusLattice& lat, Coord shift) {
    if (m.rows() != lat.sites() || m.cols() != lat.sites())
        throw std::invalid_argument("matrix dimension does not match the lattice");
    for (int r = 0; r < m.rows(); ++r) {
        const int pr = lat.translate(r, shift.x1, shift.x2);
        for (int c = 0; c < m.cols(); ++c) {
            const int pc = lat.translate(c, shift.x1, shift.x2);
            if (m(pr, pc) != m(r, c)) return false;
        }
    }
    return true;
}

}  // namespace fci

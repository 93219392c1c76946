// Command-line front end: classical ground-state reports, Chern numbers,
// phase-diagram sweeps, composite sector analysis, and small-torus exact
// diagonalization. Identical invocations produce byte-identical CSV/JSON.

#include <atomic>
#include <chrono>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fci/chern.hpp"
#include "fci/classical.hpp"
#include "fci/composite.hpp"
#include "fci/io.hpp"
#include "fci/many_body.hpp"

namespace {

constexpr const char* version = "0.1.0";

using json = nlohmann::ordered_json;
using namespace fci;

struct SizeArg {
    int w = 0;
    int h = 0;
};

SizeArg parse_size(const std::string& s) {
    SizeArg out;
    char sep = 0;
    std::istringstream is(s);
    if (!(is >> out.w >> sep >> out.h) || (sep != 'x' && sep != 'X') || !is.eof())
        throw std::invalid_argument("size must look like 4x4");
    return out;
}

HKParams parse_triple(const std::string& s) {
    HKParams p;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> p.t1 >> c1 >> p.t2 >> c2 >> p.td) || c1 != ',' || c2 != ',' || !is.eof())
        throw std::invalid_argument("hopping parameters must look like t1,t2,td");
    return p;
}

std::array<SectorSpec, 4> make_specs(const std::vector<std::string>& quads) {
    if (quads.size() != 4)
        throw std::invalid_argument("expected four t1,t2,td triples, one per sector");
    std::array<SectorSpec, 4> specs;
    for (std::size_t i = 0; i < 4; ++i)
        specs[i] = SectorSpec{sublattice_order[i], parse_triple(quads[i]), 0};
    return specs;
}

std::string sector_name(SublatticeId id) {
    return "(" + std::to_string(id.a) + "," + std::to_string(id.b) + ")";
}

std::string hex_mask(std::uint64_t m) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(m));
    return buf;
}

// Results are buffered per index, so the output order never depends on jobs.
template <typename Fn>
void run_indexed(std::size_t count, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int width = std::min<std::size_t>(jobs, count);
    pool.reserve(width);
    for (int t = 0; t < width; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

class Manifest {
public:
    Manifest(std::string subcommand, json parameters)
        : start_(std::chrono::steady_clock::now()),
          doc_{{"subcommand", std::move(subcommand)},
               {"version", version},
               {"parameters", std::move(parameters)},
               {"outputs", json::object()}} {}

    void emit(const std::string& path, std::string_view payload) {
        io::write_file(path, payload);
        char digest[24];
        std::snprintf(digest, sizeof(digest), "0x%016llx",
                      static_cast<unsigned long long>(io::fnv1a64(payload)));
        doc_["outputs"][path] = {{"bytes", payload.size()}, {"fnv1a64", digest}};
    }

    void write(const std::string& out_path) {
        doc_["wall_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
                .count();
        io::write_file(out_path + ".manifest.json", doc_.dump(2) + "\n");
    }

private:
    std::chrono::steady_clock::time_point start_;
    json doc_;
};

// ---------------------------------------------------------------- classical

int cmd_classical(const SizeArg& size, int particles, double g1, double g2,
                  const std::string& mode_name, std::uint64_t budget, std::size_t cap,
                  const std::string& out) {
    const TorusLattice lat(size.w, size.h);
    const GroundSearchMode mode =
        mode_name == "numeric" ? GroundSearchMode::numeric : GroundSearchMode::lexicographic;

    Manifest manifest("classical", {{"size", std::to_string(size.w) + "x" + std::to_string(size.h)},
                                    {"particles", particles},
                                    {"g1", g1},
                                    {"g2", g2},
                                    {"mode", mode_name},
                                    {"budget", budget},
                                    {"cap", cap}});

    const GroundStateReport rep = enumerate_ground_states(lat, particles, {g1, g2}, mode, budget, cap);

    json configs = json::array();
    for (std::size_t i = 0; i < rep.configurations.size(); ++i) {
        json sites = json::array();
        std::uint64_t m = rep.configurations[i].mask;
        while (m) {
            const int s = std::countr_zero(m);
            const Coord c = lat.coord(s);
            sites.push_back({c.x1, c.x2});
            m &= m - 1;
        }
        json entry = {{"mask", hex_mask(rep.configurations[i].mask)}, {"sites", sites}};
        entry["sector"] = rep.sectors[i] ? json(sector_name(*rep.sectors[i])) : json(nullptr);
        configs.push_back(entry);
    }

    const json doc = {{"lattice", {{"width", lat.width()}, {"height", lat.height()}}},
                      {"particles", particles},
                      {"mode", mode_name},
                      {"couplings", {{"g1", g1}, {"g2", g2}}},
                      {"minimum",
                       {{"m1", rep.min_counts.m1},
                        {"m2", rep.min_counts.m2},
                        {"counts_uniform", rep.counts_uniform},
                        {"energy", rep.min_energy}}},
                      {"degeneracy", rep.degeneracy},
                      {"cap", rep.cap},
                      {"configurations", configs}};
    manifest.emit(out, doc.dump(2) + "\n");
    manifest.write(out);
    return 0;
}

// -------------------------------------------------------------------- chern

int cmd_chern(const HKParams& p, int grid, const std::string& method, double eps, int steps,
              const std::string& out, const std::string& map_path,
              const std::string& bands_path, int bands_grid) {
    Manifest manifest("chern", {{"t1", p.t1},
                                {"t2", p.t2},
                                {"td", p.td},
                                {"grid", grid},
                                {"method", method},
                                {"eps", eps},
                                {"steps", steps}});

    json doc = {{"params", {{"t1", p.t1}, {"t2", p.t2}, {"td", p.td}}}, {"method", method}};
    if (method == "analytic") {
        doc["chern"] = chern_analytic(p);
    } else if (method == "loop") {
        const double v = chern_loop(p, LoopSpec(eps, steps));
        doc["eps"] = eps;
        doc["steps"] = steps;
        doc["value"] = v;
        doc["chern"] = static_cast<int>(std::llround(v));
        doc["residue"] = std::abs(v - std::round(v));
    } else if (method == "plaquette") {
        const CurvatureMap map = curvature_map(p, grid);
        const int chern = chern_plaquette(p, grid);
        doc["grid"] = grid;
        doc["chern"] = chern;
        doc["residue"] = std::abs(map.total - std::round(map.total));
        if (!map_path.empty()) {
            std::string csv = "k1,k2,F\n";
            for (int i1 = 0; i1 < map.grid; ++i1)
                for (int i2 = 0; i2 < map.grid; ++i2)
                    csv += io::fmt(map.center_k1(i1)) + "," + io::fmt(map.center_k2(i2)) + "," +
                           io::fmt(map.field[static_cast<std::size_t>(i1) * map.grid + i2]) + "\n";
            manifest.emit(map_path, csv);
        }
    } else {
        throw std::invalid_argument("method must be plaquette, analytic, or loop");
    }

    if (!bands_path.empty()) {
        std::string csv = "k1,k2,e_minus,e_plus\n";
        const double step = 2.0 * std::numbers::pi / bands_grid;
        for (int i = 0; i < bands_grid; ++i)
            for (int j = 0; j < bands_grid; ++j) {
                const BlochMomentum k{-std::numbers::pi + step * i,
                                      -std::numbers::pi + step * j};
                const auto [lo, hi] = band_energies(p, k);
                csv += io::fmt(k.k1) + "," + io::fmt(k.k2) + "," + io::fmt(lo) + "," +
                       io::fmt(hi) + "\n";
            }
        manifest.emit(bands_path, csv);
    }

    manifest.emit(out, doc.dump(2) + "\n");
    manifest.write(out);
    return 0;
}

// ------------------------------------------------------------ phase-diagram

int cmd_phase_diagram(const std::string& range, double t1, double t2, int grid, int jobs,
                      const std::string& out) {
    double lo = 0, hi = 0, step = 0;
    {
        char c1 = 0, c2 = 0;
        std::istringstream is(range);
        if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof() ||
            !(step > 0))
            throw std::invalid_argument("td range must look like a:b:step with step > 0");
    }
    std::vector<double> tds;
    for (double v = lo; v <= hi + 1e-12 * std::abs(step); v += step) tds.push_back(v);

    Manifest manifest("phase-diagram", {{"td_range", range},
                                        {"t1", t1},
                                        {"t2", t2},
                                        {"grid", grid},
                                        {"jobs", jobs}});

    struct Row {
        double td = 0;
        double gap = 0;
        std::optional<int> chern;
    };
    std::vector<Row> rows(tds.size());
    std::atomic<int> warnings{0};
    run_indexed(tds.size(), jobs, [&](std::size_t i) {
        const HKParams p{t1, t2, tds[i]};
        Row& r = rows[i];
        r.td = tds[i];
        r.gap = band_gap(p, std::max(grid, 32)).gap;
        try {
            r.chern = chern_plaquette(p, grid);
        } catch (const Error&) {
            warnings.fetch_add(1);
        }
    });

    std::string csv = "td,gap,chern\n";
    for (const Row& r : rows) {
        csv += io::fmt(r.td) + "," + io::fmt(r.gap) + ",";
        if (r.chern) csv += std::to_string(*r.chern);
        csv += "\n";
    }
    manifest.emit(out, csv);
    manifest.write(out);
    if (warnings.load() > 0)
        std::fprintf(stderr, "warning: %d sweep point(s) had no Chern number (gapless)\n",
                     warnings.load());
    return 0;
}

// ---------------------------------------------------------------- composite

int cmd_composite(const std::vector<std::string>& sector_params, int grid,
                  const std::string& out) {
    const auto specs = make_specs(sector_params);
    Manifest manifest("composite", {{"sector_params", sector_params}, {"grid", grid}});
    const CompositeReport rep = composite_chern(specs, grid);

    json order = json::array();
    for (const auto& id : sublattice_order) order.push_back(sector_name(id));
    const json doc = {{"sector_order", order},
                      {"sigma", rep.sigma},
                      {"average", rep.average.str()},
                      {"phase", phase_name(rep.phase)},
                      {"translation_invariant",
                       {{"e1", rep.translation_invariant_e1}, {"e2", rep.translation_invariant_e2}}}};
    manifest.emit(out, doc.dump(2) + "\n");
    manifest.write(out);
    return 0;
}

// ----------------------------------------------------------------------- ed

int cmd_ed(const SizeArg& size, int particles, double g1, double g2,
           const std::vector<std::string>& sector_params, const std::string& twists_arg,
           std::size_t levels, const std::vector<double>& scan_g1,
           const std::string& slater_green, int twist_grid, const std::string& out) {
    const TorusLattice lat(size.w, size.h);
    std::array<SectorSpec, 4> specs =
        sector_params.empty() ? make_specs({"0,0,0", "0,0,0", "0,0,0", "0,0,0"})
                              : make_specs(sector_params);

    TwistAngles twists;
    if (!twists_arg.empty()) {
        char c = 0;
        std::istringstream is(twists_arg);
        if (!(is >> twists.theta1 >> c >> twists.theta2) || c != ',' || !is.eof())
            throw std::invalid_argument("twists must look like theta1,theta2");
    }

    Manifest manifest("ed", {{"size", std::to_string(size.w) + "x" + std::to_string(size.h)},
                             {"particles", particles},
                             {"g1", g1},
                             {"g2", g2},
                             {"sector_params", sector_params},
                             {"twists", twists_arg},
                             {"levels", levels},
                             {"scan_g1", scan_g1},
                             {"slater_green", slater_green},
                             {"twist_grid", twist_grid}});

    json doc = {{"lattice", {{"width", lat.width()}, {"height", lat.height()}}},
                {"particles", particles},
                {"couplings", {{"g1", g1}, {"g2", g2}}}};

    if (!slater_green.empty()) {
        const SizeArg g = parse_size(slater_green);
        if (g.w % 2 != 0) throw std::invalid_argument("green lattice width must be even");
        const HKLatticeSize green{g.w / 2, g.h};
        json sigma = json::array();
        int sum = 0;
        for (const auto& spec : specs) {
            const int c = slater_chern(spec, green, TwistGrid{twist_grid});
            sigma.push_back(c);
            sum += c;
        }
        doc["slater"] = {{"green", slater_green},
                         {"twist_grid", twist_grid},
                         {"sigma", sigma},
                         {"average", Rational(sum, 4).str()}};
        manifest.emit(out, doc.dump(2) + "\n");
        manifest.write(out);
        return 0;
    }

    if (!scan_g1.empty()) {
        const auto rows = strong_coupling_scan(lat, particles, specs, g2, scan_g1);
        std::string csv = "g1,max_deviation\n";
        json jrows = json::array();
        for (const ScanRow& r : rows) {
            csv += io::fmt(r.g1) + "," + io::fmt(r.max_deviation) + "\n";
            jrows.push_back({{"g1", r.g1}, {"max_deviation", r.max_deviation}});
        }
        doc["scan"] = jrows;
        manifest.emit(out + ".scan.csv", csv);
        manifest.emit(out, doc.dump(2) + "\n");
        manifest.write(out);
        return 0;
    }

    const ManyBodyHamiltonian h = build_many_body(lat, particles, specs, {g1, g2}, twists);
    levels = std::min<std::size_t>(std::max<std::size_t>(levels, 1), h.dimension());
    const bool want_vectors = h.dimension() <= dense_diag_threshold;
    const ManyBodySpectrum sp = low_spectrum(h, levels, want_vectors);

    std::string csv = "index,energy\n";
    json evs = json::array();
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
        csv += std::to_string(i) + "," + io::fmt(sp.eigenvalues[i]) + "\n";
        evs.push_back(sp.eigenvalues[i]);
    }
    json clusters = json::array();
    for (const SpectrumCluster& c : sp.clusters)
        clusters.push_back({{"start", c.start}, {"size", c.size}, {"splitting", c.splitting}});

    doc["twists"] = {twists.theta1, twists.theta2};
    doc["levels"] = levels;
    doc["dimension"] = h.dimension();
    doc["eigenvalues"] = evs;
    doc["clusters"] = clusters;
    doc["ground_degeneracy"] = sp.clusters.empty() ? 0 : sp.clusters.front().size;
    if (want_vectors && sp.vectors.cols() > 0) {
        const double s = structure_factor(lat, h.basis, sp.vectors.col(0), std::numbers::pi,
                                          std::numbers::pi);
        doc["ground_structure_factor_pi_pi"] = s;
    }
    manifest.emit(out + ".spectrum.csv", csv);
    manifest.emit(out, doc.dump(2) + "\n");
    manifest.write(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-range lattice-fermion toolkit: classical ground states, "
                 "Chern numbers, and small-torus exact diagonalization"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    // classical
    std::string size_arg = "4x4", mode = "lexicographic", out = "out.json";
    int particles = 4;
    double g1 = 10.0, g2 = 1.0;
    std::uint64_t budget = default_enumeration_budget;
    std::size_t cap = default_config_cap;
    auto* classical = app.add_subcommand("classical", "exact classical ground-state enumeration");
    classical->add_option("--size", size_arg, "lattice size WxH");
    classical->add_option("--particles", particles, "fermion count");
    classical->add_option("--g1", g1, "U1/U3 coupling");
    classical->add_option("--g2", g2, "U2 coupling");
    classical->add_option("--mode", mode, "numeric or lexicographic (lex)")
        ->check(CLI::IsMember({"numeric", "lexicographic", "lex"}));
    classical->add_option("--budget", budget, "enumeration budget");
    classical->add_option("--cap", cap, "max configurations listed");
    classical->add_option("--out", out, "output JSON path");

    // chern
    double t1 = 1.0, t2 = 1.0, td = 1.0, eps = 0.05;
    int grid = 24, steps = 2048, bands_grid = 64;
    std::string method = "plaquette", map_path, bands_path;
    auto* chern = app.add_subcommand("chern", "Chern number of the two-band hopping model");
    chern->add_option("--t1", t1, "horizontal hopping");
    chern->add_option("--t2", t2, "vertical hopping");
    chern->add_option("--td", td, "diagonal hopping");
    chern->add_option("--grid", grid, "plaquette mesh size");
    chern->add_option("--method", method, "plaquette, analytic, or loop")
        ->check(CLI::IsMember({"plaquette", "analytic", "loop"}));
    chern->add_option("--eps", eps, "loop radius");
    chern->add_option("--steps", steps, "loop quadrature steps");
    chern->add_option("--map", map_path, "also write the Berry-curvature CSV here");
    chern->add_option("--bands", bands_path, "also write the band-structure CSV here");
    chern->add_option("--bands-grid", bands_grid, "band CSV mesh size");
    chern->add_option("--out", out, "output JSON path");

    // phase-diagram
    std::string td_range = "-1:1:0.25";
    int jobs = 1;
    auto* phase = app.add_subcommand("phase-diagram", "gap and Chern sweep over td");
    phase->add_option("--td-range", td_range, "sweep a:b:step");
    phase->add_option("--t1", t1, "horizontal hopping");
    phase->add_option("--t2", t2, "vertical hopping");
    phase->add_option("--grid", grid, "plaquette mesh size");
    phase->add_option("--jobs", jobs, "worker threads");
    phase->add_option("--out", out, "output CSV path");

    // composite
    std::vector<std::string> sector_params;
    auto* composite = app.add_subcommand("composite", "per-sector Chern vector and phase label");
    composite->add_option("--sector-params", sector_params,
                          "four t1,t2,td triples in sector order (0,0) (1,0) (0,1) (1,1)")
        ->expected(4);
    composite->add_option("--grid", grid, "plaquette mesh size");
    composite->add_option("--out", out, "output JSON path");

    // ed
    std::string twists_arg, slater_green;
    std::size_t levels = 8;
    std::vector<double> scan_g1;
    int twist_grid = 8;
    auto* ed = app.add_subcommand("ed", "exact diagonalization on the torus");
    ed->add_option("--size", size_arg, "lattice size WxH");
    ed->add_option("--particles", particles, "fermion count");
    ed->add_option("--g1", g1, "U1/U3 coupling");
    ed->add_option("--g2", g2, "U2 coupling");
    ed->add_option("--sector-params", sector_params,
                   "four t1,t2,td triples in sector order (defaults to zero hopping)")
        ->expected(4);
    ed->add_option("--twists", twists_arg, "boundary phases theta1,theta2");
    ed->add_option("--levels", levels, "eigenvalues to report");
    ed->add_option("--scan-g1", scan_g1, "strong-coupling scan g1 list")->delimiter(',');
    ed->add_option("--slater-green", slater_green,
                   "green lattice WxH for the Slater-determinant Chern mode");
    ed->add_option("--twist-grid", twist_grid, "twist grid points per side");
    ed->add_option("--out", out, "output JSON path");

    try {
        app.parse(argc, argv);
        if (classical->parsed())
            return cmd_classical(parse_size(size_arg), particles, g1, g2,
                                 mode == "lex" ? "lexicographic" : mode, budget, cap, out);
        if (chern->parsed())
            return cmd_chern({t1, t2, td}, grid, method, eps, steps, out, map_path, bands_path,
                             bands_grid);
        if (phase->parsed()) return cmd_phase_diagram(td_range, t1, t2, grid, jobs, out);
        if (composite->parsed()) return cmd_composite(sector_params, grid, out);
        if (ed->parsed())
            return cmd_ed(parse_size(size_arg), particles, g1, g2, sector_params, twists_arg,
                          levels, scan_g1, slater_green, twist_grid, out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const fci::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

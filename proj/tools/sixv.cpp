// Command-line front end: exact and stochastic computations for the
// stochastic six-vertex model on a strip with two open boundaries.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "sixv/askey_wilson.hpp"
#include "sixv/dynamics.hpp"
#include "sixv/exact.hpp"
#include "sixv/lattice.hpp"
#include "sixv/mpa.hpp"
#include "sixv/output.hpp"
#include "sixv/params.hpp"
#include "sixv/rng.hpp"

using nlohmann::json;
using namespace sixv;

namespace {

// a config-file section can trigger a subcommand a second time; run once
std::set<const void*> g_executed;

template <class F>
auto once(const void* key, F fn) {
    return [key, fn = std::move(fn)] {
        if (g_executed.insert(key).second) fn();
    };
}

struct StripOpts {
    double a = 0, b = 0, c = 0, d = 0, theta1 = 0, theta2 = 0;
    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "left-boundary creation probability")->required();
        cmd->add_option("--b", b, "right-boundary annihilation probability")->required();
        cmd->add_option("--c", c, "left-boundary annihilation probability")->required();
        cmd->add_option("--d", d, "right-boundary creation probability")->required();
        cmd->add_option("--theta1", theta1, "bulk weight of a continuing vertical arrow")
            ->required();
        cmd->add_option("--theta2", theta2, "bulk weight of a continuing horizontal arrow")
            ->required();
    }
    StripParams params() const { return {a, b, c, d, theta1, theta2}; }
};

struct PathOpts {
    int n = 0;
    std::string labels;
    long long anchor = 0;
    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "path width (number of outgoing edges)")->required();
        cmd->add_option("--path", labels,
                        "path literal over {U,R}, up-left to down-right (default horizontal)");
        cmd->add_option("--anchor", anchor, "height of the down-right endpoint");
    }
    DownRightPath path() const { return build_path(n, parse_labels(labels), anchor); }
};

std::string bitstring(int state, int n) {
    std::string s(static_cast<size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((state >> i) & 1) s[static_cast<size_t>(i)] = '1';
    return s;
}

Configuration parse_bits(const std::string& s, int n) {
    if (s.empty()) return Configuration(static_cast<size_t>(n), 0);
    if (static_cast<int>(s.size()) != n)
        throw precondition_error("initial configuration length must equal the path width");
    Configuration tau(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw precondition_error("initial configuration must be a string over {0,1}");
        tau[i] = static_cast<std::uint8_t>(s[i] - '0');
    }
    return tau;
}

void write_distribution(const std::string& out, int n, const std::vector<double>& w) {
    std::vector<std::string> lines{"state,probability"};
    for (size_t s = 0; s < w.size(); ++s)
        lines.push_back(bitstring(static_cast<int>(s), n) + "," + fmt17(w[s]));
    write_lines(out, lines);
}

void parallel_for(int count, const std::function<void(int)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
            } catch (...) {
                failed = true;
            }
        });
    for (auto& t : pool) t.join();
    if (failed) throw std::runtime_error("a worker task failed");
}

json params_json(const StripParams& sp) {
    return json{{"a", sp.a},           {"b", sp.b},           {"c", sp.c},
                {"d", sp.d},           {"theta1", sp.theta1}, {"theta2", sp.theta2}};
}

json derived_json(const DerivedParams& dp) {
    return json{{"q", dp.q},         {"r", dp.r},         {"alpha", dp.alpha},
                {"beta", dp.beta},   {"gamma", dp.gamma}, {"delta", dp.delta},
                {"A", dp.A},         {"B", dp.B},         {"C", dp.C},
                {"D", dp.D},         {"tilde_A", dp.tA},  {"tilde_B", dp.tB},
                {"tilde_C", dp.tC},  {"tilde_D", dp.tD}};
}

int default_precision() {
    if (const char* env = std::getenv("SIXV_PRECISION")) return std::atoi(env);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic six-vertex model on a strip: sampling, exact stationary "
                 "measures, matrix-product evaluation and Askey-Wilson asymptotics"};
    app.require_subcommand(1);
    app.set_config("--cfg-file", "", "read options from a key=value config file");

    // ---- simulate ----------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "sample trajectories of the particle system");
    StripOpts sim_sp;
    PathOpts sim_path;
    sim_sp.attach(sim);
    sim_path.attach(sim);
    std::uint64_t sim_seed = 1;
    long long sim_steps = 100;
    int sim_replicas = 1;
    std::string sim_init, sim_out = "trajectory.csv";
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--steps", sim_steps, "number of slab updates");
    sim->add_option("--replicas", sim_replicas, "independent replicas");
    sim->add_option("--init", sim_init, "initial occupation bits (default empty)");
    sim->add_option("--out", sim_out, "output CSV");
    sim->callback(once(sim, [&] {
        const StripParams sp = sim_sp.params();
        const DownRightPath p = sim_path.path();
        const Configuration init = parse_bits(sim_init, p.N);
        const CounterRng rng(sim_seed);
        std::vector<std::vector<Configuration>> trajs(static_cast<size_t>(sim_replicas));
        parallel_for(sim_replicas, [&](int rep) {
            trajs[static_cast<size_t>(rep)] =
                evolve(p, init, sp, sim_steps, rng, static_cast<std::uint64_t>(rep));
        });
        std::vector<std::string> lines;
        lines.push_back(sim_replicas > 1 ? "replica,step,site,occupation"
                                         : "step,site,occupation");
        for (int rep = 0; rep < sim_replicas; ++rep)
            for (size_t k = 0; k < trajs[static_cast<size_t>(rep)].size(); ++k)
                for (int i = 0; i < p.N; ++i) {
                    std::ostringstream os;
                    if (sim_replicas > 1) os << rep << ',';
                    os << k << ',' << i + 1 << ','
                       << int(trajs[static_cast<size_t>(rep)][k][static_cast<size_t>(i)]);
                    lines.push_back(os.str());
                }
        write_lines(sim_out, lines);
        std::cout << "simulate: " << sim_replicas << " replica(s) x " << sim_steps
                  << " steps on width " << p.N << " -> " << sim_out << "\n";
    }));

    // ---- couple ------------------------------------------------------
    auto* cpl = app.add_subcommand("couple", "sample the two-species attractive coupling");
    StripOpts cpl_sp;
    PathOpts cpl_path;
    cpl_sp.attach(cpl);
    cpl_path.attach(cpl);
    double a2 = 0, b2 = 0, c2 = 0, d2 = 0;
    cpl->add_option("--a2", a2, "looser-model a'")->required();
    cpl->add_option("--b2", b2, "looser-model b'")->required();
    cpl->add_option("--c2", c2, "looser-model c'")->required();
    cpl->add_option("--d2", d2, "looser-model d'")->required();
    std::uint64_t cpl_seed = 1;
    long long cpl_steps = 100;
    int cpl_replicas = 1;
    std::string cpl_init1, cpl_init2, cpl_out = "coupled.csv";
    cpl->add_option("--seed", cpl_seed, "random seed");
    cpl->add_option("--steps", cpl_steps, "number of slab updates");
    cpl->add_option("--replicas", cpl_replicas, "independent replicas");
    cpl->add_option("--init1", cpl_init1, "tight-model initial bits (default empty)");
    cpl->add_option("--init2", cpl_init2, "loose-model initial bits (default empty)");
    cpl->add_option("--out", cpl_out, "output CSV");
    cpl->callback(once(cpl, [&] {
        const StripParams p1 = cpl_sp.params();
        const StripParams p2{a2, b2, c2, d2, cpl_sp.theta1, cpl_sp.theta2};
        const DownRightPath p = cpl_path.path();
        const CounterRng rng(cpl_seed);
        const Configuration i1 = parse_bits(cpl_init1, p.N), i2 = parse_bits(cpl_init2, p.N);
        std::vector<std::vector<ColoredConfiguration>> trajs(
            static_cast<size_t>(cpl_replicas));
        parallel_for(cpl_replicas, [&](int rep) {
            trajs[static_cast<size_t>(rep)] = evolve_coupled(
                p, i1, i2, p1, p2, cpl_steps, rng, static_cast<std::uint64_t>(rep));
        });
        std::vector<std::string> lines;
        lines.push_back(cpl_replicas > 1 ? "replica,step,site,color" : "step,site,color");
        for (int rep = 0; rep < cpl_replicas; ++rep)
            for (size_t k = 0; k < trajs[static_cast<size_t>(rep)].size(); ++k)
                for (int i = 0; i < p.N; ++i) {
                    std::ostringstream os;
                    if (cpl_replicas > 1) os << rep << ',';
                    os << k << ',' << i + 1 << ','
                       << int(trajs[static_cast<size_t>(rep)][k][static_cast<size_t>(i)]);
                    lines.push_back(os.str());
                }
        write_lines(cpl_out, lines);
        std::cout << "couple: " << cpl_replicas << " replica(s) x " << cpl_steps
                  << " steps -> " << cpl_out << "\n";
    }));

    // ---- stationary ----------------------------------------------------
    auto* st = app.add_subcommand("stationary",
                                  "brute-force stationary measure of the strip chain");
    StripOpts st_sp;
    PathOpts st_path;
    st_sp.attach(st);
    st_path.attach(st);
    std::string st_out = "stationary.csv";
    st->add_option("--out", st_out, "output CSV (state bits, probability)");
    st->callback(once(st, [&] {
        const DownRightPath p = st_path.path();
        const Distribution mu = stationary_exact(transition_matrix(p, st_sp.params()));
        std::vector<double> w(mu.data(), mu.data() + mu.size());
        write_distribution(st_out, p.N, w);
        std::cout << "stationary: width " << p.N << ", " << w.size() << " states -> "
                  << st_out << "\n";
    }));

    // ---- mpa -----------------------------------------------------------
    auto* mp =
        app.add_subcommand("mpa", "stationary measure from the matrix-product construction");
    StripOpts mp_sp;
    PathOpts mp_path;
    mp_sp.attach(mp);
    mp_path.attach(mp);
    int mp_precision = default_precision();
    std::string mp_out = "mpa.csv", mp_json;
    mp->add_option("--precision", mp_precision,
                   "decimal digits for word evaluation (0 = auto; env SIXV_PRECISION)");
    mp->add_option("--out", mp_out, "output CSV (state bits, probability)");
    mp->add_option("--derived-json", mp_json, "also write derived parameters as JSON");
    mp->callback(once(mp, [&] {
        const DownRightPath p = mp_path.path();
        const StripParams sp = mp_sp.params();
        const auto w = mpa_measure(p, sp, mp_precision);
        write_distribution(mp_out, p.N, w);
        if (!mp_json.empty()) {
            json j{{"params", params_json(sp)}, {"derived", derived_json(derive_params(sp))}};
            write_lines(mp_json, {j.dump(2)});
        }
        std::cout << "mpa: width " << p.N << " path " << format_labels(p) << " -> " << mp_out
                  << "\n";
    }));

    // ---- verify-tilting --------------------------------------------------
    auto* vt = app.add_subcommand(
        "verify-tilting",
        "compare the strip stationary measure with the tilted exclusion-process measure");
    StripOpts vt_sp;
    vt_sp.attach(vt);
    int vt_n = 3;
    std::string vt_out = "tilting.json";
    vt->add_option("--n", vt_n, "number of sites")->required();
    vt->add_option("--out", vt_out, "output JSON report");
    vt->callback(once(vt, [&] {
        const StripParams sp = vt_sp.params();
        const TiltingReport rep = verify_tilting(sp, vt_n);
        json j{{"N", rep.N},
               {"r", rep.r},
               {"max_abs_error", rep.max_abs_error},
               {"params", params_json(sp)},
               {"derived", derived_json(rep.derived)}};
        write_lines(vt_out, {j.dump(2)});
        std::cout << "verify-tilting: N=" << vt_n << " max_abs_error=" << rep.max_abs_error
                  << " -> " << vt_out << "\n";
    }));

    // ---- scaling-check ----------------------------------------------------
    auto* sc = app.add_subcommand(
        "scaling-check", "first-order convergence of the strip kernel to the ASEP generator");
    double r_alpha = 0, r_beta = 0, r_gamma = 0, r_delta = 0, r_L = 0, r_R = 1;
    int sc_n = 2;
    std::vector<double> sc_eps{1e-2, 1e-3, 1e-4};
    std::string sc_out = "scaling.json";
    sc->add_option("--alpha", r_alpha)->required();
    sc->add_option("--beta", r_beta)->required();
    sc->add_option("--gamma", r_gamma)->required();
    sc->add_option("--delta", r_delta)->required();
    sc->add_option("--hop-left", r_L, "left hop rate L")->required();
    sc->add_option("--hop-right", r_R, "right hop rate R");
    sc->add_option("--n", sc_n, "number of sites")->required();
    sc->add_option("--eps", sc_eps, "scaling parameters");
    sc->add_option("--out", sc_out, "output JSON report");
    sc->callback(once(sc, [&] {
        const AsepRates rates{r_alpha, r_beta, r_gamma, r_delta, r_L, r_R};
        const ScalingReport rep = scaling_limit_check(rates, sc_n, sc_eps);
        json pts = json::array();
        for (const auto& p : rep.points) pts.push_back({{"eps", p.eps}, {"err", p.err}});
        json j{{"N", sc_n}, {"residuals", pts}, {"decade_ratios", rep.decade_ratios}};
        write_lines(sc_out, {j.dump(2)});
        std::cout << "scaling-check: N=" << sc_n << " finest residual "
                  << rep.points.back().err << " -> " << sc_out << "\n";
    }));

    // ---- aw-measure ----------------------------------------------------
    auto* awc = app.add_subcommand("aw-measure",
                                   "Askey-Wilson measure: atoms, masses and total mass");
    double pa = 0, pb = 0, pc = 0, pd = 0, pq = 0;
    std::string aw_out = "aw_measure.json", aw_density_csv;
    int aw_grid = 0;
    awc->add_option("--pa", pa, "measure parameter a")->required();
    awc->add_option("--pb", pb, "measure parameter b")->required();
    awc->add_option("--pc", pc, "measure parameter c")->required();
    awc->add_option("--pd", pd, "measure parameter d")->required();
    awc->add_option("--q", pq, "measure parameter q")->required();
    awc->add_option("--out", aw_out, "output JSON");
    awc->add_option("--density-csv", aw_density_csv, "sample the density to CSV");
    awc->add_option("--density-points", aw_grid, "number of density sample points");
    awc->callback(once(awc, [&] {
        const AWMeasure m = aw_measure(pa, pb, pc, pd, pq);
        json atoms = json::array();
        for (const AWAtom& a : m.atoms)
            atoms.push_back({{"y", a.y}, {"mass", a.mass}, {"chi", a.chi}, {"j", a.j}});
        const double mass = total_mass(m);
        json j{{"pa", pa},
               {"pb", pb},
               {"pc", pc},
               {"pd", pd},
               {"q", pq},
               {"atoms", atoms},
               {"atom_mass", m.atom_mass_total()},
               {"continuous_mass", mass - m.atom_mass_total()},
               {"total_mass", mass},
               {"near_degenerate", m.near_degenerate}};
        write_lines(aw_out, {j.dump(2)});
        if (!aw_density_csv.empty()) {
            const int pts = aw_grid > 0 ? aw_grid : 201;
            std::vector<std::string> lines{"y,density"};
            for (int i = 1; i < pts; ++i) {
                const double y = -1.0 + 2.0 * i / pts;
                lines.push_back(fmt17(y) + "," + fmt17(m.density(y)));
            }
            write_lines(aw_density_csv, lines);
        }
        std::cout << "aw-measure: " << m.atoms.size() << " atom(s), total mass " << mass
                  << " -> " << aw_out << "\n";
    }));

    // ---- partition ----------------------------------------------------
    auto* pz = app.add_subcommand("partition",
                                  "normalizing constant Z_N(t) by measure quadrature");
    StripOpts pz_sp;
    pz_sp.attach(pz);
    int pz_n = 1;
    double pz_t = 1.0;
    std::string pz_out = "partition.json";
    bool pz_cross = false;
    pz->add_option("--n", pz_n, "number of sites")->required();
    pz->add_option("--t", pz_t, "fugacity t");
    pz->add_flag("--cross-check", pz_cross, "also evaluate through the word algebra");
    pz->add_option("--out", pz_out, "output JSON");
    pz->callback(once(pz, [&] {
        const StripParams sp = pz_sp.params();
        const double logz = log_partition_aw(pz_n, pz_t, sp);
        json j{{"N", pz_n}, {"t", pz_t}, {"log_Z", logz}, {"params", params_json(sp)}};
        if (pz_n <= 300) j["Z"] = std::exp(logz);
        if (pz_cross) {
            const double alg = log_partition_mpa(pz_n, pz_t, sp);
            j["log_Z_word_algebra"] = alg;
            j["cross_check_rel_error"] = std::fabs(std::exp(logz - alg) - 1.0);
        }
        write_lines(pz_out, {j.dump(2)});
        std::cout << "partition: N=" << pz_n << " t=" << pz_t << " log Z=" << logz << " -> "
                  << pz_out << "\n";
    }));

    // ---- density ----------------------------------------------------
    auto* dn = app.add_subcommand("density", "mean particle density at one or more widths");
    StripOpts dn_sp;
    dn_sp.attach(dn);
    std::vector<int> dn_n{100};
    std::string dn_out = "density.csv";
    dn->add_option("--n", dn_n, "widths N")->required();
    dn->add_option("--out", dn_out, "output CSV");
    dn->callback(once(dn, [&] {
        const StripParams sp = dn_sp.params();
        const PhaseReport rep = phase_limit(sp);
        std::vector<std::string> lines{"n,density,limit,phase,region"};
        for (int n : dn_n) {
            std::ostringstream os;
            os << n << ',' << fmt17(mean_density(n, sp)) << ','
               << (rep.limit_density ? fmt17(*rep.limit_density) : std::string()) << ','
               << to_string(rep.phase) << ',' << to_string(rep.region);
            lines.push_back(os.str());
        }
        write_lines(dn_out, lines);
        std::cout << "density: " << dn_n.size() << " width(s), phase "
                  << to_string(rep.phase) << " -> " << dn_out << "\n";
    }));

    // ---- phase-sweep ----------------------------------------------------
    auto* ps = app.add_subcommand("phase-sweep", "classify a grid in the (A,C) plane");
    double ps_r = 0.5, ps_q = 0.4, ps_B = 0, ps_D = 0;
    std::string ps_grid = "20x20", ps_out = "phase_sweep.csv";
    double ps_amax = 2.5, ps_cmax = 2.5;
    std::vector<int> ps_density_n;
    ps->add_option("--r", ps_r, "tilting parameter r")->required();
    ps->add_option("--q", ps_q, "bulk ratio q");
    ps->add_option("--bb", ps_B, "kappa-minus parameter B in (-1,0]");
    ps->add_option("--dd", ps_D, "kappa-minus parameter D in (-1,0]");
    ps->add_option("--grid", ps_grid, "grid size WxH");
    ps->add_option("--amax", ps_amax, "largest A");
    ps->add_option("--cmax", ps_cmax, "largest C");
    ps->add_option("--density-n", ps_density_n, "also evaluate density at these widths");
    ps->add_option("--out", ps_out, "output CSV");
    ps->callback(once(ps, [&] {
        int W = 0, H = 0;
        if (std::sscanf(ps_grid.c_str(), "%dx%d", &W, &H) != 2 || W <= 0 || H <= 0)
            throw precondition_error("grid must have the form WxH, e.g. 50x50");
        std::vector<std::string> rows(static_cast<size_t>(W) * H);
        parallel_for(W * H, [&](int idx) {
            const int i = idx % W, jdx = idx / W;
            const double A = ps_amax * (i + 1) / W;
            const double C = ps_cmax * (jdx + 1) / H;
            const PhaseReport rep = phase_limit_from(A, C, ps_r);
            std::ostringstream os;
            os << fmt17(A) << ',' << fmt17(C) << ',' << fmt17(ps_r) << ','
               << to_string(rep.region) << ',' << to_string(rep.phase) << ','
               << (rep.limit_density ? fmt17(*rep.limit_density) : std::string());
            for (int n : ps_density_n) {
                os << ',';
                if (rep.region != Region::Fan) continue;
                try {
                    const double beta = (1 - ps_q) / ((1 + A) * (1 + ps_B));
                    const double delta = -A * ps_B * beta;
                    const double alpha = (1 - ps_q) / ((1 + C) * (1 + ps_D));
                    const double gamma = -C * ps_D * alpha;
                    const StripParams sp =
                        strip_from_rates(ps_q, ps_r, alpha, beta, gamma, delta);
                    os << fmt17(mean_density(n, sp));
                } catch (const std::exception&) {
                    // grid point has no strip realization; leave the cell empty
                }
            }
            rows[static_cast<size_t>(idx)] = os.str();
        });
        std::vector<std::string> lines;
        std::string header = "A,C,r,region,phase,limit_density";
        for (int n : ps_density_n) header += ",density_n" + std::to_string(n);
        lines.push_back(header);
        for (auto& r : rows) lines.push_back(std::move(r));
        write_lines(ps_out, lines);
        std::cout << "phase-sweep: " << W << "x" << H << " grid -> " << ps_out << "\n";
    }));

    for (CLI::App* s : {sim, cpl, st, mp, vt, sc, awc, pz, dn, ps}) {
        s->configurable();
        s->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// plapsys: simulation and verification front end for the degenerate
// p-Laplacian system. Subcommands emit plot-ready CSVs and exit 0 only if
// every printed verdict is PASS.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "plapsys/barenblatt.hpp"
#include "plapsys/config.hpp"
#include "plapsys/diagnostics.hpp"
#include "plapsys/emit.hpp"
#include "plapsys/field_io.hpp"
#include "plapsys/selfsim.hpp"
#include "plapsys/solver.hpp"

namespace fs = std::filesystem;
using namespace plapsys;

namespace {

// PLAPSYS_THREADS caps data-parallel width (0 = auto). The current kernels
// are serial, which trivially respects any cap; the value is still validated
// so configs stay portable.
int threadCap() {
    const char* env = std::getenv("PLAPSYS_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0)
        throw std::runtime_error("PLAPSYS_THREADS must be a nonnegative integer");
    return static_cast<int>(v);
}

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFile(const fs::path& dir, const std::string& name,
               const std::string& content) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
}

struct RunProducts {
    RunConfig cfg;
    SystemParams params;
    VectorField initial;
    Trajectory traj;
};

RunProducts runFromConfig(const std::string& config_path) {
    const RunConfig cfg = parseConfig(readFile(config_path));
    const SystemParams params = cfg.makeParams();
    const Grid grid = cfg.makeGrid();
    const VectorField u0 = makeInitial(cfg.makePreset(), grid, params);
    Trajectory traj = run(u0, params, cfg.makeSolverConfig());
    return {cfg, params, u0, std::move(traj)};
}

double l1Distance(const VectorField& a, const VectorField& b) {
    double d = 0.0;
    for (int l = 0; l < a.k(); ++l)
        for (std::size_t i = 0; i < a.comp[l].size(); ++i)
            d += std::abs(a.comp[l][i] - b.comp[l][i]);
    return d * a.grid.cell_volume();
}

// average 2 (1d) or 2x2 (2d) fine cells into each coarse cell
VectorField coarsen(const VectorField& f) {
    const Grid& g = f.grid;
    const Grid cg = g.dim == 1
                        ? Grid::make1d(g.cells[0] / 2, g.half_extent)
                        : Grid::make2d(g.cells[0] / 2, g.cells[1] / 2,
                                       g.half_extent);
    VectorField out(cg, f.k(), f.time);
    for (int l = 0; l < f.k(); ++l)
        for (int ix = 0; ix < cg.cells[0]; ++ix)
            for (int iy = 0; iy < cg.cells[1]; ++iy) {
                double acc = 0.0;
                int cnt = 0;
                for (int dx = 0; dx < 2; ++dx)
                    for (int dy = 0; dy < (g.dim == 2 ? 2 : 1); ++dy) {
                        acc += f.comp[l][g.index(2 * ix + dx,
                                                 g.dim == 2 ? 2 * iy + dy : iy)];
                        ++cnt;
                    }
                out.comp[l][cg.index(ix, iy)] = acc / cnt;
            }
    return out;
}

bool report(const DiagnosticsReport& rep) {
    std::cout << rep.verdictLine() << "\n";
    return rep.pass;
}

int cmdSimulate(const std::string& config_path, const std::string& out_dir) {
    const RunProducts rp = runFromConfig(config_path);
    writeFile(out_dir, "run_log.csv", runLogCsv(rp.traj));
    for (std::size_t i = 0; i < rp.traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%03zu.field", i);
        std::ostringstream os;
        writeSnapshot(os, rp.traj.snapshots[i]);
        writeFile(out_dir, name, os.str());
    }
    bool ok = report(massConservationReport(rp.traj));
    if (rp.traj.snapshots.size() >= 2) {
        // envelope window starts at the first requested snapshot
        const double T = rp.traj.snapshots[1].time;
        const DiagnosticsReport grad =
            gradientBoundReport(rp.traj, T, rp.params);
        writeFile(out_dir, "gradient_bound.csv", grad.csv());
        ok = report(grad) && ok;
    }
    return ok ? 0 : 1;
}

int cmdVerifyBarenblatt(double p, int n, double mass, int cells, double L,
                        double t0, const std::string& out_dir) {
    const BarenblattProfile prof = makeProfile(mass, p, n);
    const double mass_error =
        std::abs(profileMass(prof.C, p, n) / mass - 1.0);
    const Grid g1 = n == 1 ? Grid::make1d(cells, L) : Grid::make2d(cells, cells, L);
    const Grid g2 = n == 1 ? Grid::make1d(2 * cells, L)
                           : Grid::make2d(2 * cells, 2 * cells, L);
    const double res_h = pdeResidual(prof, g1, t0);
    const double res_h2 = pdeResidual(prof, g2, t0);
    const double ratio = res_h2 > 0.0 ? res_h / res_h2 : 0.0;

    std::ostringstream os;
    os << "p,n,M,C_M,mass_error,residual_h,residual_h2,ratio\n"
       << fmt(p) << "," << n << "," << fmt(mass) << "," << fmt(prof.C) << ","
       << fmt(mass_error) << "," << fmt(res_h) << "," << fmt(res_h2) << ","
       << fmt(ratio) << "\n";
    std::cout << os.str();
    if (!out_dir.empty()) writeFile(out_dir, "barenblatt.csv", os.str());

    const bool ok = mass_error <= 1e-8 && ratio >= 1.5;
    std::cout << "verify_barenblatt," << (ok ? "PASS" : "FAIL") << ","
              << fmt(std::max(mass_error, ratio > 0 ? 1.5 / ratio : 1e9)) << ",1\n";
    return ok ? 0 : 1;
}

int cmdEntropy(const std::string& config_path, const std::string& out_dir) {
    const RunProducts rp = runFromConfig(config_path);
    const MassVector masses = l1Mass(rp.traj.snapshots.front());
    const BarenblattProfile prof =
        makeProfile(masses.total_norm, rp.cfg.p, rp.cfg.n);

    const EntropyReport rep =
        entropyDecayReport(rp.traj.snapshots, rp.params, prof);
    writeFile(out_dir, "entropy.csv", entropyCsv(rep));
    writeFile(out_dir, "proportionality.csv",
              proportionalityCsv(rp.traj.snapshots, rp.params, masses));

    bool ordered = true;
    const double tol = 1e-8 * sigma(masses.total_norm, rp.params);
    for (const auto& r : rep.records)
        if (!(r.Hhat >= r.H - tol && r.H >= -tol)) ordered = false;

    std::cout << "entropy_decay," << (rep.pass ? "PASS" : "FAIL") << "\n";
    std::cout << "entropy_ordering," << (ordered ? "PASS" : "FAIL") << "\n";
    return (rep.pass && ordered) ? 0 : 1;
}

int cmdHarnack(const std::string& config_path, const std::string& out_dir,
               double T, std::vector<double> radii) {
    RunConfig cfg = parseConfig(readFile(config_path));
    cfg.t_end = T;
    cfg.snapshots = {T};
    const SystemParams params = cfg.makeParams();
    const VectorField u0 = makeInitial(cfg.makePreset(), cfg.makeGrid(), params);
    const Trajectory traj = run(u0, params, cfg.makeSolverConfig());

    if (radii.empty()) {
        // default sweep over [2 T^(1/p), L/2]
        const double lo = 2.0 * std::pow(T, 1.0 / cfg.p);
        const double hi = cfg.L / 2.0;
        if (hi > lo)
            for (int i = 0; i < 4; ++i)
                radii.push_back(lo + (hi - lo) * i / 3.0);
        else
            radii.push_back(hi);
    }
    const HarnackReport rep = harnackReport(traj, radii, T, params);
    std::cout << rep.csv();
    writeFile(out_dir, "harnack.csv", rep.csv());
    for (const auto& n : rep.notes) std::cerr << "note: " << n << "\n";
    return rep.pass ? 0 : 1;
}

int cmdConvergenceStudy(const std::string& config_path,
                        const std::string& out_dir) {
    const RunConfig base = parseConfig(readFile(config_path));
    std::vector<VectorField> finals;
    std::vector<double> drifts;
    bool mass_ok = true;
    std::ostringstream os;
    os << "cells,mass_drift\n";
    for (int level = 0; level < 3; ++level) {
        RunConfig cfg = base;
        cfg.cells[0] = base.cells[0] << level;
        if (cfg.n == 2) cfg.cells[1] = base.cells[1] << level;
        cfg.snapshots = {cfg.t_end};
        const SystemParams params = cfg.makeParams();
        const VectorField u0 =
            makeInitial(cfg.makePreset(), cfg.makeGrid(), params);
        Trajectory traj = run(u0, params, cfg.makeSolverConfig());
        const DiagnosticsReport mass = massConservationReport(traj);
        mass_ok = mass_ok && mass.pass;
        drifts.push_back(mass.worst);
        os << cfg.cells[0] << "," << fmt(mass.worst) << "\n";
        finals.push_back(traj.snapshots.back());
    }
    // self-convergence: distance between successive levels, restricted to
    // the coarser grid
    std::vector<double> dist;
    os << "coarse_cells,level_distance\n";
    for (int level = 0; level < 2; ++level) {
        VectorField fine = finals[level + 1];
        fine = coarsen(fine);
        dist.push_back(l1Distance(finals[level], fine));
        os << finals[level].grid.cells[0] << "," << fmt(dist.back()) << "\n";
    }
    const double ratio = dist[1] > 0.0 ? dist[0] / dist[1] : 0.0;
    const double order = ratio > 0.0 ? std::log2(ratio) : 0.0;
    os << "observed_order," << fmt(order) << "\n";
    std::cout << os.str();
    writeFile(out_dir, "convergence.csv", os.str());

    const bool ok = mass_ok && ratio >= 1.3;
    std::cout << "convergence_study," << (ok ? "PASS" : "FAIL") << ","
              << fmt(order) << "," << fmt(std::log2(1.3)) << "\n";
    return ok ? 0 : 1;
}

int cmdEpsilonLadder(const std::string& config_path,
                     const std::string& out_dir) {
    const RunConfig base = parseConfig(readFile(config_path));
    const std::vector<double> ladder{1e-2, 1e-3, 1e-4, 0.0};
    std::vector<VectorField> finals;
    double total_mass = 0.0;
    for (double eps : ladder) {
        RunConfig cfg = base;
        cfg.epsilon = eps;
        cfg.snapshots = {cfg.t_end};
        const SystemParams params = cfg.makeParams();
        const VectorField u0 =
            makeInitial(cfg.makePreset(), cfg.makeGrid(), params);
        Trajectory traj = run(u0, params, cfg.makeSolverConfig());
        if (finals.empty()) {
            const MassVector m = l1Mass(u0);
            for (double v : m.masses) total_mass += v;
        }
        finals.push_back(traj.snapshots.back());
    }
    std::ostringstream os;
    os << "epsilon_a,epsilon_b,l1_distance\n";
    std::vector<double> dist;
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        dist.push_back(l1Distance(finals[i], finals[i + 1]));
        os << fmt(ladder[i]) << "," << fmt(ladder[i + 1]) << ","
           << fmt(dist.back()) << "\n";
    }
    std::cout << os.str();
    writeFile(out_dir, "epsilon_ladder.csv", os.str());

    bool ok = dist.back() <= 0.01 * total_mass;
    for (std::size_t i = 1; i < dist.size(); ++i)
        if (dist[i] >= dist[i - 1]) ok = false;
    std::cout << "epsilon_ladder," << (ok ? "PASS" : "FAIL") << ","
              << fmt(dist.back() / total_mass) << ",0.01\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degenerate p-Laplacian system toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    double p = 3.0, mass = 1.0, L = 6.0, t0 = 1.0, T = 1.0;
    int n = 1, cells = 200;
    std::vector<double> radii;

    auto* sim = app.add_subcommand("simulate", "evolve a configured system");
    sim->add_option("--config", config_path)->required();
    sim->add_option("--out", out_dir);

    auto* vb = app.add_subcommand("verify-barenblatt",
                                  "closed-form source solution checks");
    vb->add_option("--p", p);
    vb->add_option("--n", n)->check(CLI::Range(1, 2));
    vb->add_option("--mass", mass);
    vb->add_option("--cells", cells);
    vb->add_option("--L", L);
    vb->add_option("--t0", t0);
    vb->add_option("--out", out_dir);

    auto* ent = app.add_subcommand("entropy",
                                   "entropy decay and component proportionality");
    ent->add_option("--config", config_path)->required();
    ent->add_option("--out", out_dir);

    auto* har = app.add_subcommand("harnack", "average-vs-point bracket sweep");
    har->add_option("--config", config_path)->required();
    har->add_option("--T", T);
    har->add_option("--radii", radii)->delimiter(',');
    har->add_option("--out", out_dir);

    auto* conv = app.add_subcommand("convergence-study",
                                    "diagnostics at h, h/2, h/4");
    conv->add_option("--config", config_path)->required();
    conv->add_option("--out", out_dir);

    auto* eps = app.add_subcommand("epsilon-ladder",
                                   "regularization ladder comparison");
    eps->add_option("--config", config_path)->required();
    eps->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        threadCap();
        if (sim->parsed()) return cmdSimulate(config_path, out_dir);
        if (vb->parsed())
            return cmdVerifyBarenblatt(p, n, mass, cells, L, t0,
                                       out_dir == "." ? "" : out_dir);
        if (ent->parsed()) return cmdEntropy(config_path, out_dir);
        if (har->parsed()) return cmdHarnack(config_path, out_dir, T, radii);
        if (conv->parsed()) return cmdConvergenceStudy(config_path, out_dir);
        if (eps->parsed()) return cmdEpsilonLadder(config_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

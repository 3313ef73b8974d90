#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "plapsys/barenblatt.hpp"
#include "plapsys/field.hpp"
#include "plapsys/operators.hpp"
#include "plapsys/params.hpp"

namespace plapsys {

struct SolverConfig {
    double cfl_safety = 0.4;
    double epsilon = 0.0;
    double t_end = 1.0;
    long max_steps = 100'000'000;
    std::vector<double> snapshot_times;  // sorted, within (0, t_end]
};

struct SimulationState {
    VectorField field;
    double t = 0.0;
    long step = 0;
    double dt_last = 0.0;
    double sup_grad = 0.0;      // max face Theta of the last step
    double clipped_mass = 0.0;  // cumulative mass removed by clipping
};

struct InitialPreset {
    enum class Kind { Bump, BarenblattWeighted, RandomCompact };
    Kind kind = Kind::Bump;
    std::vector<double> weights;       // k values c^l >= 0, not all zero
    std::array<double, 2> center{0.0, 0.0};
    double width = 1.0;
    std::vector<double> offsets;       // optional per-component x-shift
    double t0 = 1.0;                   // reference time, barenblatt-weighted
    std::uint32_t seed = 0;            // random-compact
};

struct LogEntry {
    long step;
    double t;
    double dt;
    std::vector<double> masses;
    double sup_grad;
    double clipped_mass;  // cumulative
};

struct Trajectory {
    std::vector<VectorField> snapshots;  // initial state first, then requested
    std::vector<LogEntry> log;
    double clipped_total = 0.0;
};

using Observer = std::function<void(const VectorField&)>;

/// Parabolic stability bound with the diffusivity frozen at its maximum.
/// dt = cfl * h^2 / (2n * (max Theta^(p-2) + eps)); when the diffusivity
/// vanishes identically any dt is stable and cfl * h^2 is returned.
inline double stableTimestep(const VectorField& field, const SystemParams& params,
                             const SolverConfig& config) {
    const FaceField theta = systemGradientNorm(field);
    const double tmax = maxFaceValue(theta);
    const double diff = (tmax > 0.0 ? std::pow(tmax, params.p - 2.0) : 0.0) +
                        config.epsilon;
    const Grid& g = field.grid;
    double inv_h2 = 1.0 / (g.h[0] * g.h[0]);
    if (g.dim == 2) inv_h2 += 1.0 / (g.h[1] * g.h[1]);
    if (diff <= 0.0) {
        const double h = g.min_spacing();
        return config.cfl_safety * h * h;
    }
    return config.cfl_safety / (2.0 * diff * inv_h2);
}

namespace detail {

inline void checkSupportMargin(const VectorField& f) {
    const Grid& g = f.grid;
    const int nx = g.cells[0], ny = g.cells[1];
    constexpr double thresh = 1e-14;
    auto hot = [&](int ix, int iy) {
        for (const auto& c : f.comp)
            if (c[g.index(ix, iy)] > thresh) return true;
        return false;
    };
    for (int iy = 0; iy < ny; ++iy)
        for (int ix : {0, 1, nx - 2, nx - 1})
            if (ix >= 0 && ix < nx && hot(ix, iy))
                throw std::runtime_error(
                    "support overflow: field support within 2h of the boundary");
    if (g.dim == 2)
        for (int ix = 0; ix < nx; ++ix)
            for (int iy : {0, 1, ny - 2, ny - 1})
                if (iy >= 0 && iy < ny && hot(ix, iy))
                    throw std::runtime_error(
                        "support overflow: field support within 2h of the boundary");
}

}  // namespace detail

/// One forward-Euler update of the regularized system. Conservative by
/// construction; roundoff negatives are clipped to zero with the removed
/// mass tallied in state.clipped_mass.
inline SimulationState step(const SimulationState& state,
                            const SystemParams& params,
                            const SolverConfig& config) {
    detail::checkSupportMargin(state.field);
    const FaceField theta = systemGradientNorm(state.field);

    SimulationState next = state;
    const double dt = [&] {
        const double tmax = maxFaceValue(theta);
        const double diff =
            (tmax > 0.0 ? std::pow(tmax, params.p - 2.0) : 0.0) + config.epsilon;
        const Grid& g = state.field.grid;
        if (diff <= 0.0) {
            const double h = g.min_spacing();
            return config.cfl_safety * h * h;
        }
        double inv_h2 = 1.0 / (g.h[0] * g.h[0]);
        if (g.dim == 2) inv_h2 += 1.0 / (g.h[1] * g.h[1]);
        return config.cfl_safety / (2.0 * diff * inv_h2);
    }();

    const Grid& g = state.field.grid;
    const double vol = g.cell_volume();
    double clipped = 0.0;
    for (int l = 0; l < state.field.k(); ++l) {
        const std::vector<double> div =
            divDegenerateFlux(state.field, theta, l, params.p, config.epsilon);
        auto& u = next.field.comp[l];
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] += dt * div[i];
            if (u[i] < 0.0) {
                clipped -= u[i] * vol;
                u[i] = 0.0;
            }
            if (!std::isfinite(u[i]))
                throw std::runtime_error("non-finite value at step " +
                                         std::to_string(state.step + 1) +
                                         ", component " + std::to_string(l) +
                                         ", cell " + std::to_string(i));
        }
    }
    next.t = state.t + dt;
    next.field.time = next.t;
    next.step = state.step + 1;
    next.dt_last = dt;
    next.sup_grad = maxFaceValue(theta);
    next.clipped_mass = state.clipped_mass + clipped;
    return next;
}

/// Evolve the initial field to t_end, recording snapshots at the requested
/// times by linear interpolation between the bracketing steps.
inline Trajectory run(const VectorField& initial, const SystemParams& params,
                      const SolverConfig& config,
                      const std::vector<Observer>& observers = {}) {
    if (!(config.t_end > 0.0))
        throw std::invalid_argument("run: t_end must be > 0");
    SimulationState state{initial, initial.time, 0, 0.0, 0.0, 0.0};

    Trajectory traj;
    traj.snapshots.push_back(initial);

    std::vector<double> wanted = config.snapshot_times;
    std::sort(wanted.begin(), wanted.end());
    std::size_t next_snap = 0;

    while (state.t < config.t_end) {
        if (state.step >= config.max_steps)
            throw std::runtime_error("run: max_steps exhausted at t = " +
                                     std::to_string(state.t));
        const SimulationState prev = state;
        state = step(state, params, config);

        traj.log.push_back({state.step, state.t, state.dt_last,
                            l1Mass(state.field).masses, state.sup_grad,
                            state.clipped_mass});

        while (next_snap < wanted.size() && wanted[next_snap] <= state.t) {
            const double s = wanted[next_snap];
            const double w = (s - prev.t) / (state.t - prev.t);
            VectorField snap(initial.grid, initial.k(), s);
            for (int l = 0; l < snap.k(); ++l)
                for (std::size_t i = 0; i < snap.comp[l].size(); ++i)
                    snap.comp[l][i] = (1.0 - w) * prev.field.comp[l][i] +
                                      w * state.field.comp[l][i];
            for (const auto& obs : observers) obs(snap);
            traj.snapshots.push_back(std::move(snap));
            ++next_snap;
        }
    }
    traj.clipped_total = state.clipped_mass;
    return traj;
}

/// Build an initial field from a preset.
inline VectorField makeInitial(const InitialPreset& preset, const Grid& grid,
                               const SystemParams& params) {
    const int k = params.k;
    if (static_cast<int>(preset.weights.size()) != k)
        throw std::invalid_argument("makeInitial: weights size must equal k");
    double wnorm2 = 0.0;
    for (double c : preset.weights) {
        if (c < 0.0)
            throw std::invalid_argument("makeInitial: weights must be >= 0");
        wnorm2 += c * c;
    }
    if (wnorm2 == 0.0)
        throw std::invalid_argument("makeInitial: weights must not all be zero");
    if (!preset.offsets.empty() &&
        static_cast<int>(preset.offsets.size()) != k)
        throw std::invalid_argument("makeInitial: offsets size must equal k");

    VectorField f(grid, k, 0.0);
    auto radius2 = [&](int ix, int iy, double xshift) {
        const double dx = grid.center(0, ix) - preset.center[0] - xshift;
        double rr = dx * dx;
        if (grid.dim == 2) {
            const double dy = grid.center(1, iy) - preset.center[1];
            rr += dy * dy;
        }
        return rr;
    };

    switch (preset.kind) {
        case InitialPreset::Kind::Bump: {
            const double w2 = preset.width * preset.width;
            for (int l = 0; l < k; ++l) {
                const double off = preset.offsets.empty() ? 0.0 : preset.offsets[l];
                for (int ix = 0; ix < grid.cells[0]; ++ix)
                    for (int iy = 0; iy < grid.cells[1]; ++iy) {
                        const double s = 1.0 - radius2(ix, iy, off) / w2;
                        f.comp[l][grid.index(ix, iy)] =
                            s > 0.0 ? preset.weights[l] * s * s : 0.0;
                    }
            }
            break;
        }
        case InitialPreset::Kind::BarenblattWeighted: {
            const double cnorm = std::sqrt(wnorm2);
            const BarenblattProfile prof =
                makeProfile(cnorm, params.p, grid.dim);
            f.time = preset.t0;
            VectorField shape = sampleProfile(prof, grid, preset.t0);
            const double vol = grid.cell_volume();
            double shape_mass = 0.0;
            for (double v : shape.comp[0]) shape_mass += v;
            shape_mass *= vol;
            for (int l = 0; l < k; ++l) {
                // rescale so the discrete component mass equals the weight
                const double scale = preset.weights[l] / shape_mass;
                for (std::size_t i = 0; i < shape.comp[0].size(); ++i)
                    f.comp[l][i] = scale * shape.comp[0][i];
            }
            break;
        }
        case InitialPreset::Kind::RandomCompact: {
            std::mt19937 rng(preset.seed);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            const double w2 = preset.width * preset.width;
            for (int l = 0; l < k; ++l)
                for (int ix = 0; ix < grid.cells[0]; ++ix)
                    for (int iy = 0; iy < grid.cells[1]; ++iy) {
                        const double v = uni(rng);
                        if (radius2(ix, iy, 0.0) < w2)
                            f.comp[l][grid.index(ix, iy)] = preset.weights[l] * v;
                    }
            // two averaging passes, support kept inside the original mask
            for (int pass = 0; pass < 2; ++pass) {
                for (int l = 0; l < k; ++l) {
                    std::vector<double> s(f.comp[l]);
                    for (int ix = 0; ix < grid.cells[0]; ++ix)
                        for (int iy = 0; iy < grid.cells[1]; ++iy) {
                            if (!(radius2(ix, iy, 0.0) < w2)) continue;
                            double acc = s[grid.index(ix, iy)];
                            int cnt = 1;
                            auto add = [&](int jx, int jy) {
                                if (jx < 0 || jx >= grid.cells[0] || jy < 0 ||
                                    jy >= grid.cells[1])
                                    return;
                                if (!(radius2(jx, jy, 0.0) < w2)) return;
                                acc += s[grid.index(jx, jy)];
                                ++cnt;
                            };
                            add(ix - 1, iy);
                            add(ix + 1, iy);
                            if (grid.dim == 2) {
                                add(ix, iy - 1);
                                add(ix, iy + 1);
                            }
                            f.comp[l][grid.index(ix, iy)] = acc / cnt;
                        }
                }
            }
            break;
        }
    }
    detail::checkSupportMargin(f);
    return f;
}

}  // namespace plapsys

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "plapsys/barenblatt.hpp"
#include "plapsys/field.hpp"
#include "plapsys/params.hpp"

namespace plapsys {

/// A physical snapshot mapped to self-similar variables:
/// eta = x / R(t), tau = log R(t), theta^l = R^n u^l with R = (t/a2)^a2.
struct RescaledState {
    Grid eta_grid;
    std::vector<std::vector<double>> theta;
    double tau = 0.0;
    double source_time = 0.0;

    int k() const { return static_cast<int>(theta.size()); }
};

inline RescaledState toSelfSimilar(const VectorField& field,
                                   const SystemParams& params) {
    if (!(field.time > 0.0))
        throw std::invalid_argument("toSelfSimilar: snapshot time must be > 0");
    const auto [a1, a2] = similarityExponents(params.p, field.grid.dim);
    const double R = std::pow(field.time / a2, a2);
    const double Rn = std::pow(R, field.grid.dim);

    RescaledState rs;
    rs.eta_grid = field.grid;
    rs.eta_grid.half_extent = field.grid.half_extent / R;
    rs.eta_grid.h[0] = field.grid.h[0] / R;
    if (field.grid.dim == 2) rs.eta_grid.h[1] = field.grid.h[1] / R;
    rs.tau = a2 * std::log(field.time / a2);
    rs.source_time = field.time;
    rs.theta.resize(field.k());
    for (int l = 0; l < field.k(); ++l) {
        rs.theta[l].resize(field.comp[l].size());
        for (std::size_t i = 0; i < field.comp[l].size(); ++i)
            rs.theta[l][i] = Rn * field.comp[l][i];
    }
    return rs;
}

/// Convex entropy density sigma(s) = (p-1)^2 / ((2p-3)(p-2)) s^((2p-3)/(p-1)).
inline double sigma(double s, const SystemParams& params) {
    if (s < 0.0) throw std::invalid_argument("sigma: s must be >= 0");
    const double p = params.p;
    return (p - 1.0) * (p - 1.0) / ((2.0 * p - 3.0) * (p - 2.0)) *
           std::pow(s, (2.0 * p - 3.0) / (p - 1.0));
}

inline double sigmaPrime(double s, const SystemParams& params) {
    if (s < 0.0) throw std::invalid_argument("sigmaPrime: s must be >= 0");
    const double p = params.p;
    return (p - 1.0) / (p - 2.0) * std::pow(s, (p - 2.0) / (p - 1.0));
}

namespace detail {

inline void checkEntropyMass(const RescaledState& rs,
                             const BarenblattProfile& prof) {
    const double vol = rs.eta_grid.cell_volume();
    // compare |M| of the state against the profile mass
    double norm2 = 0.0;
    for (const auto& th : rs.theta) {
        double ml = 0.0;
        for (double v : th) ml += v;
        ml *= vol;
        norm2 += ml * ml;
    }
    const double m = std::sqrt(norm2);
    if (std::abs(m / prof.M - 1.0) > 1e-6)
        throw std::invalid_argument(
            "entropy: profile mass does not match the state's |M|");
}

/// Pointwise Euclidean norm of theta at cell i.
inline double thetaNorm(const RescaledState& rs, std::size_t i) {
    double s = 0.0;
    for (const auto& th : rs.theta) s += th[i] * th[i];
    return std::sqrt(s);
}

inline double etaNorm(const Grid& g, int ix, int iy) {
    const double x = g.center(0, ix);
    if (g.dim == 2) {
        const double y = g.center(1, iy);
        return std::sqrt(x * x + y * y);
    }
    return std::abs(x);
}

}  // namespace detail

/// Relative entropy of f = |theta| against the rescaled profile:
/// integral of sigma(f) - sigma(B) - sigma'(B)(f - B). Nonnegative pointwise
/// by convexity; vanishes when the state is profile-proportional.
inline double entropyH(const RescaledState& rs, const BarenblattProfile& prof,
                       const SystemParams& params) {
    detail::checkEntropyMass(rs, prof);
    const Grid& g = rs.eta_grid;
    double acc = 0.0;
    for (int ix = 0; ix < g.cells[0]; ++ix)
        for (int iy = 0; iy < g.cells[1]; ++iy) {
            const std::size_t i = g.index(ix, iy);
            const double f = detail::thetaNorm(rs, i);
            const double b = rescaledProfile(detail::etaNorm(g, ix, iy), prof);
            // sigma'(0) = 0, so the truncated profile needs no special case
            acc += sigma(f, params) - sigma(b, params) -
                   sigmaPrime(b, params) * (f - b);
        }
    return acc * g.cell_volume();
}

/// Majorant entropy with the explicit |eta|-weight in place of sigma'(B):
/// integral of sigma(f) - sigma(B) + (p-1)/p |eta|^(p/(p-1)) (f - B).
inline double entropyHhat(const RescaledState& rs, const BarenblattProfile& prof,
                          const SystemParams& params) {
    detail::checkEntropyMass(rs, prof);
    const Grid& g = rs.eta_grid;
    const double p = params.p;
    double acc = 0.0;
    for (int ix = 0; ix < g.cells[0]; ++ix)
        for (int iy = 0; iy < g.cells[1]; ++iy) {
            const std::size_t i = g.index(ix, iy);
            const double f = detail::thetaNorm(rs, i);
            const double eta = detail::etaNorm(g, ix, iy);
            const double b = rescaledProfile(eta, prof);
            acc += sigma(f, params) - sigma(b, params) +
                   (p - 1.0) / p * std::pow(eta, p / (p - 1.0)) * (f - b);
        }
    return acc * g.cell_volume();
}

struct EntropyRecord {
    double tau;
    double t;
    double H;
    double Hhat;
};

struct EntropyReport {
    std::vector<EntropyRecord> records;
    std::vector<double> envelope;  // e^{-(tau - tau0)} Hhat(tau0) per record
    bool pass = false;
    double slack = 0.15;
};

/// Check the exponential decay envelope Hhat(tau) <= e^{-(tau-tau0)} Hhat(tau0)
/// against a trajectory of physical snapshots. Measurement starts at the
/// first snapshot with t >= a2 (tau >= 0).
inline EntropyReport entropyDecayReport(const std::vector<VectorField>& snapshots,
                                        const SystemParams& params,
                                        const BarenblattProfile& prof,
                                        double slack = 0.15) {
    EntropyReport rep;
    rep.slack = slack;
    const auto [a1, a2] = similarityExponents(params.p,
                                              snapshots.empty()
                                                  ? 1
                                                  : snapshots.front().grid.dim);
    for (const auto& snap : snapshots) {
        if (snap.time < a2) continue;
        const RescaledState rs = toSelfSimilar(snap, params);
        rep.records.push_back({rs.tau, snap.time, entropyH(rs, prof, params),
                               entropyHhat(rs, prof, params)});
    }
    if (rep.records.empty()) {
        rep.pass = false;
        return rep;
    }
    const double tau0 = rep.records.front().tau;
    const double h0 = rep.records.front().Hhat;
    rep.pass = true;
    for (const auto& r : rep.records) {
        const double env = std::exp(-(r.tau - tau0)) * h0;
        rep.envelope.push_back(env);
        if (r.Hhat > env * (1.0 + slack)) rep.pass = false;
    }
    return rep;
}

/// Per-component normalized L1 deviation from mass-weighted proportionality:
/// ||theta^l - (M_l/|M|) |theta| ||_1 / M_l (zero-mass components report 0).
inline std::vector<double> componentDeviations(const RescaledState& rs,
                                               const MassVector& masses) {
    if (!(masses.total_norm > 0.0))
        throw std::invalid_argument("componentDeviations: zero total mass");
    const double vol = rs.eta_grid.cell_volume();
    std::vector<double> out(rs.k(), 0.0);
    for (int l = 0; l < rs.k(); ++l) {
        if (masses.masses[l] <= 0.0) continue;
        const double w = masses.masses[l] / masses.total_norm;
        double dev = 0.0;
        for (std::size_t i = 0; i < rs.theta[l].size(); ++i)
            dev += std::abs(rs.theta[l][i] - w * detail::thetaNorm(rs, i));
        out[l] = dev * vol / masses.masses[l];
    }
    return out;
}

/// Worst normalized component deviation (see componentDeviations).
inline double componentProportionality(const RescaledState& rs,
                                       const MassVector& masses) {
    const auto devs = componentDeviations(rs, masses);
    return *std::max_element(devs.begin(), devs.end());
}

}  // namespace plapsys

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plapsys/barenblatt.hpp"
#include "plapsys/csv.hpp"
#include "plapsys/field.hpp"
#include "plapsys/params.hpp"
#include "plapsys/selfsim.hpp"
#include "plapsys/solver.hpp"

namespace plapsys {

struct LabeledValue {
    std::string label;
    double value;
};

struct DiagnosticsReport {
    std::string name;
    std::string inputs;
    std::vector<LabeledValue> values;
    double tolerance = 0.0;
    double worst = 0.0;
    bool pass = false;
    std::vector<std::string> notes;

    std::string csv() const {
        std::ostringstream os;
        os << "metric,value\n";
        for (const auto& v : values) os << v.label << "," << fmt(v.value) << "\n";
        os << name << "," << (pass ? "PASS" : "FAIL") << "," << fmt(worst) << ","
           << fmt(tolerance) << "\n";
        return os.str();
    }

    std::string verdictLine() const {
        return name + "," + (pass ? "PASS" : "FAIL") + "," + fmt(worst) + "," +
               fmt(tolerance);
    }
};

/// Max relative drift of the component masses over a run; also reports the
/// cumulative clipped mass relative to the total initial mass.
inline DiagnosticsReport massConservationReport(const Trajectory& traj) {
    DiagnosticsReport rep;
    rep.name = "mass_conservation";
    rep.tolerance = 1e-10;
    if (traj.snapshots.empty())
        throw std::invalid_argument("massConservationReport: empty trajectory");
    const MassVector m0 = l1Mass(traj.snapshots.front());
    double drift = 0.0;
    double total0 = 0.0;
    for (double m : m0.masses) total0 += m;
    for (std::size_t l = 0; l < m0.masses.size(); ++l) {
        if (m0.masses[l] <= 0.0) {
            rep.notes.push_back("component " + std::to_string(l) +
                                " has zero initial mass; skipped");
            continue;
        }
        for (const auto& e : traj.log)
            drift = std::max(drift, std::abs(e.masses[l] / m0.masses[l] - 1.0));
        for (const auto& s : traj.snapshots) {
            const MassVector m = l1Mass(s);
            drift = std::max(drift, std::abs(m.masses[l] / m0.masses[l] - 1.0));
        }
    }
    const double clipped_rel = total0 > 0.0 ? traj.clipped_total / total0 : 0.0;
    rep.values.push_back({"max_rel_drift", drift});
    rep.values.push_back({"clipped_mass_rel", clipped_rel});
    rep.worst = std::max(drift, clipped_rel);
    rep.pass = rep.worst <= rep.tolerance;
    return rep;
}

/// Envelope test for sup |grad u|: E(t) = sup Theta * t^(n/(n(p-2)+2p))
/// must have a nonincreasing running max (within slack) for t >= T.
inline DiagnosticsReport gradientBoundReport(const Trajectory& traj, double T,
                                             const SystemParams& params,
                                             double slack = 0.2) {
    DiagnosticsReport rep;
    rep.name = "gradient_bound";
    rep.tolerance = slack;
    const int n = traj.snapshots.empty() ? 1 : traj.snapshots.front().grid.dim;
    const double expo = n / (n * (params.p - 2.0) + 2.0 * params.p);
    std::vector<double> E;
    for (const auto& s : traj.snapshots) {
        if (s.time < T) continue;
        const double sup = maxFaceValue(systemGradientNorm(s));
        E.push_back(sup * std::pow(s.time, expo));
        rep.values.push_back({"E(t=" + fmt(s.time) + ")", E.back()});
    }
    if (E.empty()) throw std::invalid_argument("gradientBoundReport: empty window");
    if (E.size() == 1) {
        rep.notes.push_back("single snapshot; envelope vacuous");
        rep.pass = true;
        rep.worst = 0.0;
        return rep;
    }
    const double e0 = E.front();
    double running = 0.0, worst = 0.0;
    for (double e : E) {
        running = std::max(running, e);
        if (e0 > 0.0) worst = std::max(worst, running / e0 - 1.0);
        else if (e > 0.0) worst = std::max(worst, 1.0);  // grew from zero
    }
    rep.worst = worst;
    rep.pass = worst <= slack;
    return rep;
}

namespace detail {

/// Least-squares slope of log(y) against log(x).
inline double loglogSlope(const std::vector<double>& x,
                          const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double radius(const Grid& g, int ix, int iy) {
    const double x = g.center(0, ix);
    if (g.dim == 2) {
        const double y = g.center(1, iy);
        return std::sqrt(x * x + y * y);
    }
    return std::abs(x);
}

}  // namespace detail

/// Distance to the mass-matched profile: d(t) = || |u|(.,t) - B(.,t) ||_1 and
/// per-component d_l(t) = || u^l - (M_l/|M|) B ||_1, with a log-log rate fit
/// of d over the snapshots with t >= a2.
inline DiagnosticsReport l1ConvergenceReport(const Trajectory& traj,
                                             const MassVector& masses,
                                             const BarenblattProfile& prof) {
    DiagnosticsReport rep;
    rep.name = "l1_convergence";
    const auto a2 = prof.a2;
    std::vector<double> times, d_total;
    std::vector<std::vector<double>> d_comp;  // [component][snapshot]
    const int k = traj.snapshots.empty() ? 0 : traj.snapshots.front().k();
    d_comp.resize(k);
    for (const auto& s : traj.snapshots) {
        if (s.time < a2) continue;
        const Grid& g = s.grid;
        const double vol = g.cell_volume();
        double dt_total = 0.0;
        std::vector<double> dt_l(k, 0.0);
        for (int ix = 0; ix < g.cells[0]; ++ix)
            for (int iy = 0; iy < g.cells[1]; ++iy) {
                const std::size_t i = g.index(ix, iy);
                const double b = evaluate(detail::radius(g, ix, iy), s.time, prof);
                double norm2 = 0.0;
                for (int l = 0; l < k; ++l) {
                    const double v = s.comp[l][i];
                    norm2 += v * v;
                    dt_l[l] += std::abs(v - masses.masses[l] /
                                                masses.total_norm * b);
                }
                dt_total += std::abs(std::sqrt(norm2) - b);
            }
        times.push_back(s.time);
        d_total.push_back(dt_total * vol);
        for (int l = 0; l < k; ++l) d_comp[l].push_back(dt_l[l] * vol);
    }
    if (times.size() < 4)
        throw std::invalid_argument("l1ConvergenceReport: need >= 4 snapshots");

    for (std::size_t i = 0; i < times.size(); ++i)
        rep.values.push_back({"d(t=" + fmt(times[i]) + ")", d_total[i]});
    for (int l = 0; l < k; ++l) {
        rep.values.push_back({"d_" + std::to_string(l) + "_first", d_comp[l].front()});
        rep.values.push_back({"d_" + std::to_string(l) + "_last", d_comp[l].back()});
    }

    const double quad_tol = 1e-8 * masses.total_norm;
    const bool all_tiny =
        *std::max_element(d_total.begin(), d_total.end()) <= quad_tol;
    bool decreasing = true;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (d_total[i] > d_total[i - 1]) decreasing = false;

    const double target = -0.6 * (a2 / 2.0);
    rep.tolerance = target;
    if (all_tiny) {
        rep.notes.push_back("distances at quadrature tolerance; slope fit skipped");
        rep.pass = true;
        rep.worst = d_total.back();
        return rep;
    }
    const double slope = detail::loglogSlope(times, d_total);
    rep.values.push_back({"fitted_slope", slope});
    rep.worst = slope;
    rep.pass = decreasing && slope <= target;
    if (!decreasing) rep.notes.push_back("d(t) not monotonically decreasing");
    return rep;
}

/// Squared L2 distance between two trajectories must never exceed its
/// initial value.
inline DiagnosticsReport l2ContractionReport(const Trajectory& a,
                                             const Trajectory& b) {
    DiagnosticsReport rep;
    rep.name = "l2_contraction";
    rep.tolerance = 1e-8;
    if (a.snapshots.size() != b.snapshots.size())
        throw std::invalid_argument("l2ContractionReport: mismatched trajectories");
    std::vector<double> D;
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        const auto& fa = a.snapshots[i];
        const auto& fb = b.snapshots[i];
        if (!(fa.grid == fb.grid) || fa.k() != fb.k() ||
            std::abs(fa.time - fb.time) > 1e-12 * (1.0 + std::abs(fa.time)))
            throw std::invalid_argument("l2ContractionReport: mismatched trajectories");
        double d = 0.0;
        for (int l = 0; l < fa.k(); ++l)
            for (std::size_t c = 0; c < fa.comp[l].size(); ++c) {
                const double diff = fa.comp[l][c] - fb.comp[l][c];
                d += diff * diff;
            }
        D.push_back(d * fa.grid.cell_volume());
        rep.values.push_back({"D(t=" + fmt(fa.time) + ")", D.back()});
    }
    const double d0 = D.front();
    const double dmax = *std::max_element(D.begin(), D.end());
    rep.worst = d0 > 0.0 ? dmax / d0 - 1.0 : dmax;
    rep.pass = dmax <= d0 * (1.0 + 1e-8) + (d0 == 0.0 ? 1e-30 : 0.0);
    return rep;
}

/// Average-vs-point bracket: for each component and ball radius R,
///   lhs     = integral of u^l(.,0) over {|x| < R}
///   bracket = R^(n+p/(p-2)) / T^(1/(p-2)) + T^(n/p) u^l(0,T)^(1+n(p-2)/p)
///   Chat    = lhs * (mu^l)^(1+n(p-2)/p) / bracket
/// with mu^l the component mass relative to the largest component mass.
struct HarnackReport {
    std::vector<double> R_values;
    double T = 0.0;
    std::vector<double> mu;                     // per component
    double mu0 = 0.0;                           // min/max mass ratio
    std::vector<std::vector<double>> lhs;       // [component][R]
    std::vector<std::vector<double>> bracket;   // [component][R]
    std::vector<std::vector<double>> constants; // Chat, [component][R]
    std::vector<std::string> notes;
    double cap = 1e3;
    double stability_cap = 1e2;
    bool pass = false;

    std::string csv() const {
        std::ostringstream os;
        os << "component,R,lhs,bracket,mu,chat\n";
        for (std::size_t l = 0; l < constants.size(); ++l)
            for (std::size_t r = 0; r < R_values.size(); ++r)
                os << l << "," << fmt(R_values[r]) << "," << fmt(lhs[l][r]) << ","
                   << fmt(bracket[l][r]) << "," << fmt(mu[l]) << ","
                   << fmt(constants[l][r]) << "\n";
        os << "harnack," << (pass ? "PASS" : "FAIL") << "\n";
        return os.str();
    }
};

inline HarnackReport harnackReport(const Trajectory& traj,
                                   std::vector<double> R_values, double T,
                                   const SystemParams& params,
                                   double cap = 1e3, double stability_cap = 1e2) {
    HarnackReport rep;
    rep.T = T;
    rep.cap = cap;
    rep.stability_cap = stability_cap;

    const VectorField* u0 = nullptr;
    const VectorField* uT = nullptr;
    for (const auto& s : traj.snapshots) {
        if (std::abs(s.time) <= 1e-14) u0 = &s;
        if (std::abs(s.time - T) <= 1e-9 * (1.0 + T)) uT = &s;
    }
    if (!u0 || !uT)
        throw std::invalid_argument("harnackReport: trajectory must contain t=0 and t=T");
    const Grid& g = u0->grid;
    if (g.half_extent <= 0.0 || g.cells[0] < 2)
        throw std::invalid_argument("harnackReport: origin outside grid");

    const double p = params.p;
    const double n = g.dim;
    const double Tmin = std::pow(T, 1.0 / p);
    for (double R : R_values) {
        if (R <= Tmin) {
            rep.notes.push_back("R=" + fmt(R) + " <= T^(1/p); skipped");
            continue;
        }
        if (R >= g.half_extent)
            throw std::invalid_argument("harnackReport: R exceeds the domain");
        rep.R_values.push_back(R);
    }
    if (rep.R_values.empty())
        throw std::invalid_argument("harnackReport: no admissible R in sweep");

    const MassVector m0 = l1Mass(*u0);
    const double mmax =
        *std::max_element(m0.masses.begin(), m0.masses.end());
    rep.mu.resize(u0->k());
    double mu_min = 1.0;
    for (int l = 0; l < u0->k(); ++l) {
        rep.mu[l] = mmax > 0.0 ? m0.masses[l] / mmax : 0.0;
        if (rep.mu[l] > 0.0) mu_min = std::min(mu_min, rep.mu[l]);
    }
    rep.mu0 = mu_min;

    // cell containing the origin (cell-centered grid: index cells/2)
    const std::size_t origin = g.index(g.cells[0] / 2, g.cells[1] / 2);

    const double power = 1.0 + n * (p - 2.0) / p;
    const double vol = g.cell_volume();
    rep.lhs.assign(u0->k(), {});
    rep.bracket.assign(u0->k(), {});
    rep.constants.assign(u0->k(), {});
    double chat_max = 0.0;
    double stability = 1.0;  // worst per-component max/min over the R sweep
    for (int l = 0; l < u0->k(); ++l) {
        if (m0.masses[l] <= 0.0) {
            rep.notes.push_back("component " + std::to_string(l) +
                                " has zero mass; skipped");
            rep.lhs[l].assign(rep.R_values.size(), 0.0);
            rep.bracket[l].assign(rep.R_values.size(), 0.0);
            rep.constants[l].assign(rep.R_values.size(), 0.0);
            continue;
        }
        const double center_val = uT->comp[l][origin];
        double cmax_l = 0.0, cmin_l = std::numeric_limits<double>::infinity();
        for (double R : rep.R_values) {
            double acc = 0.0;
            for (int ix = 0; ix < g.cells[0]; ++ix)
                for (int iy = 0; iy < g.cells[1]; ++iy)
                    if (detail::radius(g, ix, iy) < R)
                        acc += u0->comp[l][g.index(ix, iy)];
            const double lhs = acc * vol;
            const double bracket =
                std::pow(R, n + p / (p - 2.0)) / std::pow(T, 1.0 / (p - 2.0)) +
                std::pow(T, n / p) * std::pow(center_val, power);
            const double chat = lhs * std::pow(rep.mu[l], power) / bracket;
            rep.lhs[l].push_back(lhs);
            rep.bracket[l].push_back(bracket);
            rep.constants[l].push_back(chat);
            if (chat > chat_max) chat_max = chat;
            if (chat > cmax_l) cmax_l = chat;
            if (chat > 0.0 && chat < cmin_l) cmin_l = chat;
        }
        if (cmax_l > 0.0 && std::isfinite(cmin_l))
            stability = std::max(stability, cmax_l / cmin_l);
        // sanity: bracket and lhs monotone in R
        for (std::size_t r = 1; r < rep.R_values.size(); ++r) {
            if (rep.bracket[l][r] < rep.bracket[l][r - 1])
                throw std::logic_error("harnackReport: bracket not monotone in R");
            if (rep.lhs[l][r] < rep.lhs[l][r - 1] - 1e-12)
                throw std::logic_error("harnackReport: lhs not monotone in R");
        }
    }
    rep.pass = std::isfinite(chat_max) && chat_max <= cap &&
               stability <= stability_cap;
    return rep;
}

/// Compactly supported test function for the weak-trace check.
using TestFunction = std::function<double(double, double)>;

/// Deviation of the pairing of u(.,t_j) with each test function from its
/// initial value; must decrease as t_j decreases, and the spatial averages
/// must respect the Harnack-style growth bracket.
inline DiagnosticsReport weakTraceReport(const Trajectory& traj,
                                         const std::vector<TestFunction>& phis,
                                         const SystemParams& params,
                                         double slack = 0.1, double cap = 1e3) {
    DiagnosticsReport rep;
    rep.name = "weak_trace";
    rep.tolerance = slack;
    if (traj.snapshots.size() < 2 || phis.empty())
        throw std::invalid_argument("weakTraceReport: need snapshots and test functions");
    const VectorField& u0 = traj.snapshots.front();
    const Grid& g = u0.grid;
    const double vol = g.cell_volume();
    const int k = u0.k();

    // snapshots after the initial one, examined with t decreasing
    std::vector<const VectorField*> snaps;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i)
        snaps.push_back(&traj.snapshots[i]);
    std::sort(snaps.begin(), snaps.end(),
              [](const VectorField* a, const VectorField* b) {
                  return a->time > b->time;
              });

    auto pair_with = [&](const VectorField& f, int l, const TestFunction& phi) {
        double acc = 0.0;
        for (int ix = 0; ix < g.cells[0]; ++ix)
            for (int iy = 0; iy < g.cells[1]; ++iy)
                acc += f.comp[l][g.index(ix, iy)] *
                       phi(g.center(0, ix), g.dim == 2 ? g.center(1, iy) : 0.0);
        return acc * vol;
    };

    bool pass = true;
    double worst = 0.0;
    for (std::size_t ip = 0; ip < phis.size(); ++ip) {
        for (int l = 0; l < k; ++l) {
            const double base = pair_with(u0, l, phis[ip]);
            double prev_dev = std::numeric_limits<double>::infinity();
            for (const VectorField* s : snaps) {
                const double dev = std::abs(pair_with(*s, l, phis[ip]) - base);
                rep.values.push_back({"phi" + std::to_string(ip) + "_u" +
                                          std::to_string(l) + "_t" + fmt(s->time),
                                      dev});
                const double allowance =
                    slack * (std::abs(base) > 0.0 ? std::abs(base) : 1.0);
                if (dev > prev_dev + allowance) {
                    pass = false;
                    worst = std::max(worst, dev - prev_dev);
                }
                prev_dev = dev;
            }
        }
    }

    // growth bound with the Harnack bracket at R = L/2, T = largest time
    const double T = snaps.front()->time;
    const double R = 0.5 * g.half_extent;
    const double p = params.p;
    const double n = g.dim;
    const std::size_t origin = g.index(g.cells[0] / 2, g.cells[1] / 2);
    for (const VectorField* s : snaps) {
        for (int l = 0; l < k; ++l) {
            double acc = 0.0;
            for (int ix = 0; ix < g.cells[0]; ++ix)
                for (int iy = 0; iy < g.cells[1]; ++iy)
                    if (detail::radius(g, ix, iy) < R)
                        acc += s->comp[l][g.index(ix, iy)];
            const double lhs = acc * vol;
            const double bracket =
                std::pow(R, n + p / (p - 2.0)) / std::pow(T, 1.0 / (p - 2.0)) +
                std::pow(T, n / p) *
                    std::pow(snaps.front()->comp[l][origin],
                             1.0 + n * (p - 2.0) / p);
            if (lhs > cap * bracket) {
                pass = false;
                worst = std::max(worst, lhs / bracket);
            }
        }
    }
    rep.worst = worst;
    rep.pass = pass;
    return rep;
}

}  // namespace plapsys

#pragma once

#include <sstream>
#include <string>

#include "plapsys/csv.hpp"
#include "plapsys/diagnostics.hpp"
#include "plapsys/selfsim.hpp"
#include "plapsys/solver.hpp"

namespace plapsys {

/// Run log CSV: step,t,dt,M_1..M_k,sup_grad,clipped_mass.
inline std::string runLogCsv(const Trajectory& traj) {
    std::ostringstream os;
    const int k = traj.snapshots.empty() ? 0 : traj.snapshots.front().k();
    os << "step,t,dt";
    for (int l = 1; l <= k; ++l) os << ",M_" << l;
    os << ",sup_grad,clipped_mass\n";
    for (const auto& e : traj.log) {
        os << e.step << "," << fmt(e.t) << "," << fmt(e.dt);
        for (double m : e.masses) os << "," << fmt(m);
        os << "," << fmt(e.sup_grad) << "," << fmt(e.clipped_mass) << "\n";
    }
    return os.str();
}

/// Entropy CSV: tau,t,H,Hhat,envelope,pass.
inline std::string entropyCsv(const EntropyReport& rep) {
    std::ostringstream os;
    os << "tau,t,H,Hhat,envelope,pass\n";
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const auto& r = rep.records[i];
        const double env = rep.envelope[i];
        os << fmt(r.tau) << "," << fmt(r.t) << "," << fmt(r.H) << ","
           << fmt(r.Hhat) << "," << fmt(env) << ","
           << (r.Hhat <= env * (1.0 + rep.slack) ? "1" : "0") << "\n";
    }
    return os.str();
}

/// Proportionality CSV: tau,component,deviation.
inline std::string proportionalityCsv(const std::vector<VectorField>& snapshots,
                                      const SystemParams& params,
                                      const MassVector& masses) {
    std::ostringstream os;
    os << "tau,component,deviation\n";
    for (const auto& s : snapshots) {
        if (!(s.time > 0.0)) continue;
        const RescaledState rs = toSelfSimilar(s, params);
        const auto devs = componentDeviations(rs, masses);
        for (std::size_t l = 0; l < devs.size(); ++l)
            os << fmt(rs.tau) << "," << l << "," << fmt(devs[l]) << "\n";
    }
    return os.str();
}

}  // namespace plapsys

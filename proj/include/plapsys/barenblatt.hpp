#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "plapsys/field.hpp"
#include "plapsys/grid.hpp"
#include "plapsys/operators.hpp"
#include "plapsys/quadrature.hpp"

namespace plapsys {

/// Self-similar exponents of the source solution: the amplitude decays like
/// t^(-a1) and the support spreads like t^(a2), with a1 = n * a2.
inline std::pair<double, double> similarityExponents(double p, int n) {
    if (!(p > 2.0))
        throw std::invalid_argument("similarityExponents: p must exceed 2");
    if (n < 1) throw std::invalid_argument("similarityExponents: n must be >= 1");
    const double a2 = 1.0 / ((p - 2.0) * n + p);
    return {n * a2, a2};
}

/// Closed-form source (Barenblatt) solution of the scalar equation
/// u_t = div(|grad u|^(p-2) grad u) with L1 mass M.
///
/// Two equivalent parameterizations are carried:
///  - the rescaled profile (C - (p-2)/p |eta|^(p/(p-1)))_+^((p-1)/(p-2)),
///    whose constant C is fixed by the mass integral, and
///  - the physical form in (x, t), whose constant absorbs an extra power of
///    a2; physicalConstant() converts between them.
struct BarenblattProfile {
    double M = 0.0;   // L1 mass
    double C = 0.0;   // constant of the rescaled profile
    double a1 = 0.0;
    double a2 = 0.0;
    double p = 0.0;
    int dim = 1;

    double shape_exponent() const { return (p - 1.0) / (p - 2.0); }
    double radial_exponent() const { return p / (p - 1.0); }

    /// Radius of the support ball of the rescaled profile.
    double rescaledSupportRadius() const {
        return std::pow(p * C / (p - 2.0), (p - 1.0) / p);
    }

    /// Spatial scale R(t) = (t/a2)^a2 of the self-similar variables.
    double scaleFactor(double t) const { return std::pow(t / a2, a2); }

    /// Support radius of the physical profile at time t.
    double supportRadius(double t) const {
        return scaleFactor(t) * rescaledSupportRadius();
    }

    /// Constant appearing in the physical (x, t) form of the profile.
    double physicalConstant() const {
        return std::pow(a2, a1 * (p - 2.0) / (p - 1.0)) * C;
    }
};

/// Mass of the rescaled profile with constant C: the radial integral over
/// the support ball, by adaptive quadrature.
inline double profileMass(double C, double p, int n, double tol = 1e-13) {
    if (C <= 0.0) return 0.0;
    const double q = p / (p - 1.0);
    const double r = (p - 1.0) / (p - 2.0);
    const double kappa = (p - 2.0) / p;
    const double rstar = std::pow(p * C / (p - 2.0), (p - 1.0) / p);
    const auto shape = [&](double rho) {
        const double arg = C - kappa * std::pow(rho, q);
        return arg > 0.0 ? std::pow(arg, r) : 0.0;
    };
    const double scale = std::pow(C, r) * rstar;
    if (n == 1)
        return 2.0 * adaptiveSimpson(shape, 0.0, rstar, tol * scale);
    // n == 2
    const auto f = [&](double rho) { return shape(rho) * rho; };
    return 2.0 * M_PI * adaptiveSimpson(f, 0.0, rstar, tol * scale * rstar);
}

/// Solve profileMass(C) = M for C by bisection; the mass is strictly
/// increasing in C so a geometrically grown bracket is safe.
inline double profileConstant(double M, double p, int n,
                              double rel_tol = 1e-11) {
    if (!(M > 0.0)) throw std::invalid_argument("profileConstant: M must be > 0");
    if (!(p > 2.0)) throw std::invalid_argument("profileConstant: p must exceed 2");
    double hi = 1.0;
    int grow = 0;
    while (profileMass(hi, p, n) < M) {
        hi *= 2.0;
        if (++grow > 200)
            throw std::runtime_error("profileConstant: bracket growth failed");
    }
    double lo = hi;
    while (profileMass(lo, p, n) > M) {
        lo *= 0.5;
        if (++grow > 400)
            throw std::runtime_error(
                "profileConstant: bracket failure, endpoints [" +
                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = profileMass(mid, p, n);
        if (std::abs(m / M - 1.0) <= rel_tol) return mid;
        (m < M ? lo : hi) = mid;
        if ((hi - lo) <= 1e-16 * hi) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

inline BarenblattProfile makeProfile(double M, double p, int n) {
    BarenblattProfile prof;
    prof.M = M;
    prof.p = p;
    prof.dim = n;
    auto [a1, a2] = similarityExponents(p, n);
    prof.a1 = a1;
    prof.a2 = a2;
    prof.C = profileConstant(M, p, n);
    return prof;
}

/// Rescaled profile at |eta| = eta_norm; exactly zero outside the support.
inline double rescaledProfile(double eta_norm, const BarenblattProfile& prof) {
    const double arg =
        prof.C - (prof.p - 2.0) / prof.p *
                     std::pow(std::abs(eta_norm), prof.radial_exponent());
    return arg > 0.0 ? std::pow(arg, prof.shape_exponent()) : 0.0;
}

/// Physical profile at |x| = x_norm, time t > 0.
inline double evaluate(double x_norm, double t, const BarenblattProfile& prof) {
    if (!(t > 0.0)) throw std::invalid_argument("evaluate: t must be > 0");
    const double c_phys = prof.physicalConstant();
    const double arg =
        c_phys - (prof.p - 2.0) / prof.p *
                     std::pow(prof.a2, 1.0 / (prof.p - 1.0)) *
                     std::pow(std::abs(x_norm) / std::pow(t, prof.a2),
                              prof.radial_exponent());
    return arg > 0.0 ? std::pow(t, -prof.a1) * std::pow(arg, prof.shape_exponent())
                     : 0.0;
}

/// Sample the profile at time t as a single-component field on the grid.
inline VectorField sampleProfile(const BarenblattProfile& prof, const Grid& grid,
                                 double t) {
    VectorField f(grid, 1, t);
    for (int ix = 0; ix < grid.cells[0]; ++ix) {
        const double x = grid.center(0, ix);
        for (int iy = 0; iy < grid.cells[1]; ++iy) {
            double rr = x * x;
            if (grid.dim == 2) {
                const double y = grid.center(1, iy);
                rr += y * y;
            }
            f.comp[0][grid.index(ix, iy)] = evaluate(std::sqrt(rr), t, prof);
        }
    }
    return f;
}

/// L1 mismatch between the discrete degenerate operator applied to the
/// sampled profile and a centered time derivative of the closed form,
/// measured on cells further than 5h from the free boundary.
inline double pdeResidual(const BarenblattProfile& prof, const Grid& grid,
                          double t) {
    const double rt = prof.supportRadius(t);
    const double margin = grid.half_extent - 2.0 * grid.min_spacing();
    if (rt >= margin)
        throw std::runtime_error("pdeResidual: support exceeds grid");
    const double dt = t * 1e-5;
    const VectorField f = sampleProfile(prof, grid, t);
    const FaceField theta = systemGradientNorm(f);
    const std::vector<double> div = divDegenerateFlux(f, theta, 0, prof.p, 0.0);
    const double hmax = std::max(grid.h[0], grid.dim == 2 ? grid.h[1] : 0.0);
    double res = 0.0;
    for (int ix = 0; ix < grid.cells[0]; ++ix) {
        const double x = grid.center(0, ix);
        for (int iy = 0; iy < grid.cells[1]; ++iy) {
            double rr = x * x;
            if (grid.dim == 2) {
                const double y = grid.center(1, iy);
                rr += y * y;
            }
            const double rnorm = std::sqrt(rr);
            if (std::abs(rnorm - rt) <= 5.0 * hmax) continue;
            const double dudt = (evaluate(rnorm, t + dt, prof) -
                                 evaluate(rnorm, t - dt, prof)) /
                                (2.0 * dt);
            res += std::abs(div[grid.index(ix, iy)] - dudt);
        }
    }
    return res * grid.cell_volume();
}

}  // namespace plapsys

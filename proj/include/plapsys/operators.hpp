#pragma once

#include <cmath>
#include <vector>

#include "plapsys/field.hpp"
#include "plapsys/grid.hpp"

namespace plapsys {

/// Conservative discrete operator div((Theta^(p-2) + eps) grad u^l) for one
/// component, with Theta the face-centered system gradient norm. Fluxes on
/// the outer boundary faces are zero.
inline std::vector<double> divDegenerateFlux(const VectorField& f,
                                             const FaceField& theta,
                                             int component, double p,
                                             double eps) {
    const Grid& g = f.grid;
    const auto& u = f.comp[component];
    const int nx = g.cells[0], ny = g.cells[1];
    std::vector<double> out(g.cell_count(), 0.0);

    // x-direction fluxes
    for (int iy = 0; iy < ny; ++iy) {
        double flux_left = 0.0;  // boundary face
        for (int ix = 0; ix < nx; ++ix) {
            double flux_right = 0.0;
            if (ix + 1 < nx) {
                const double th = theta.dir[0][theta.xface(ix + 1, iy)];
                const double coeff = std::pow(th, p - 2.0) + eps;
                flux_right =
                    coeff * (u[g.index(ix + 1, iy)] - u[g.index(ix, iy)]) / g.h[0];
            }
            out[g.index(ix, iy)] += (flux_right - flux_left) / g.h[0];
            flux_left = flux_right;
        }
    }
    if (g.dim == 2) {
        for (int ix = 0; ix < nx; ++ix) {
            double flux_down = 0.0;
            for (int iy = 0; iy < ny; ++iy) {
                double flux_up = 0.0;
                if (iy + 1 < ny) {
                    const double th = theta.dir[1][theta.yface(ix, iy + 1)];
                    const double coeff = std::pow(th, p - 2.0) + eps;
                    flux_up = coeff *
                              (u[g.index(ix, iy + 1)] - u[g.index(ix, iy)]) /
                              g.h[1];
                }
                out[g.index(ix, iy)] += (flux_up - flux_down) / g.h[1];
                flux_down = flux_up;
            }
        }
    }
    return out;
}

}  // namespace plapsys

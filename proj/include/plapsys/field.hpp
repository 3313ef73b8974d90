#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "plapsys/grid.hpp"

namespace plapsys {

/// Solution state: k nonnegative scalar fields on a common grid.
struct VectorField {
    Grid grid;
    std::vector<std::vector<double>> comp;  // k arrays, row-major per grid
    double time = 0.0;

    VectorField() = default;
    VectorField(const Grid& g, int k, double t = 0.0)
        : grid(g), comp(k, std::vector<double>(g.cell_count(), 0.0)), time(t) {}

    int k() const { return static_cast<int>(comp.size()); }
};

/// Component L1 masses together with their Euclidean norm |M|.
struct MassVector {
    std::vector<double> masses;
    double total_norm = 0.0;

    MassVector() = default;
    explicit MassVector(std::vector<double> m) : masses(std::move(m)) {
        double s = 0.0;
        for (double v : masses) s += v * v;
        total_norm = std::sqrt(s);
    }
};

/// Values living on cell faces: dir[d] holds the faces normal to axis d,
/// (cells[d]+1) faces along d. Outer boundary faces are kept explicitly
/// (and are zero for the compactly supported fields handled here).
struct FaceField {
    std::array<int, 2> cells{1, 1};
    int dim = 1;
    std::array<std::vector<double>, 2> dir;

    explicit FaceField(const Grid& g) : cells(g.cells), dim(g.dim) {
        dir[0].assign(static_cast<std::size_t>(cells[0] + 1) * cells[1], 0.0);
        if (dim == 2)
            dir[1].assign(static_cast<std::size_t>(cells[0]) * (cells[1] + 1), 0.0);
    }

    // face (ix, iy) normal to x: ix in [0, nx], iy in [0, ny)
    std::size_t xface(int ix, int iy) const {
        return static_cast<std::size_t>(ix) * cells[1] + iy;
    }
    // face (ix, iy) normal to y: ix in [0, nx), iy in [0, ny]
    std::size_t yface(int ix, int iy) const {
        return static_cast<std::size_t>(ix) * (cells[1] + 1) + iy;
    }
};

/// Two-point face differences of component l; zero on boundary faces.
inline FaceField gradient(const VectorField& f, int component) {
    if (component < 0 || component >= f.k())
        throw std::out_of_range("gradient: component out of range");
    const Grid& g = f.grid;
    const auto& u = f.comp[component];
    FaceField out(g);
    const int nx = g.cells[0], ny = g.cells[1];
    for (int ix = 1; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            out.dir[0][out.xface(ix, iy)] =
                (u[g.index(ix, iy)] - u[g.index(ix - 1, iy)]) / g.h[0];
    if (g.dim == 2) {
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 1; iy < ny; ++iy)
                out.dir[1][out.yface(ix, iy)] =
                    (u[g.index(ix, iy)] - u[g.index(ix, iy - 1)]) / g.h[1];
    }
    return out;
}

/// |grad u| on faces: at each face the normal derivative is the two-point
/// difference and (in 2d) the transverse derivative is the average of the
/// four neighboring transverse face differences. Squares are summed over
/// all components and directions.
inline FaceField systemGradientNorm(const VectorField& f) {
    const Grid& g = f.grid;
    const int nx = g.cells[0], ny = g.cells[1];
    FaceField out(g);

    std::vector<FaceField> grads;
    grads.reserve(f.comp.size());
    for (int l = 0; l < f.k(); ++l) grads.push_back(gradient(f, l));

    for (int ix = 1; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            double s = 0.0;
            for (const auto& gr : grads) {
                const double gx = gr.dir[0][gr.xface(ix, iy)];
                s += gx * gx;
                if (g.dim == 2) {
                    const double gy = 0.25 * (gr.dir[1][gr.yface(ix - 1, iy)] +
                                              gr.dir[1][gr.yface(ix - 1, iy + 1)] +
                                              gr.dir[1][gr.yface(ix, iy)] +
                                              gr.dir[1][gr.yface(ix, iy + 1)]);
                    s += gy * gy;
                }
            }
            out.dir[0][out.xface(ix, iy)] = std::sqrt(s);
        }
    }
    if (g.dim == 2) {
        for (int ix = 0; ix < nx; ++ix) {
            for (int iy = 1; iy < ny; ++iy) {
                double s = 0.0;
                for (const auto& gr : grads) {
                    const double gy = gr.dir[1][gr.yface(ix, iy)];
                    s += gy * gy;
                    const double gx = 0.25 * (gr.dir[0][gr.xface(ix, iy - 1)] +
                                              gr.dir[0][gr.xface(ix + 1, iy - 1)] +
                                              gr.dir[0][gr.xface(ix, iy)] +
                                              gr.dir[0][gr.xface(ix + 1, iy)]);
                    s += gx * gx;
                }
                out.dir[1][out.yface(ix, iy)] = std::sqrt(s);
            }
        }
    }
    return out;
}

inline double maxFaceValue(const FaceField& ff) {
    double m = 0.0;
    for (int d = 0; d < ff.dim; ++d)
        for (double v : ff.dir[d])
            if (v > m) m = v;
    return m;
}

inline MassVector l1Mass(const VectorField& f) {
    const double vol = f.grid.cell_volume();
    std::vector<double> m(f.comp.size(), 0.0);
    for (int l = 0; l < f.k(); ++l) {
        double s = 0.0;
        for (double v : f.comp[l]) s += v;
        m[l] = vol * s;
    }
    return MassVector(std::move(m));
}

inline double lpNorm(const VectorField& f, int component, double q) {
    if (component < 0 || component >= f.k())
        throw std::out_of_range("lpNorm: component out of range");
    if (q < 1.0) throw std::invalid_argument("lpNorm: q must be >= 1");
    const double vol = f.grid.cell_volume();
    double s = 0.0;
    for (double v : f.comp[component]) s += std::pow(std::abs(v), q);
    return std::pow(vol * s, 1.0 / q);
}

inline double linfNorm(const VectorField& f) {
    double m = 0.0;
    for (const auto& c : f.comp)
        for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace plapsys

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>

namespace plapsys {

/// Uniform cell-centered grid on the box [-L, L]^dim.
/// Cell centers along axis d sit at x_i = -L + (i + 1/2) * h[d].
struct Grid {
    int dim = 1;
    std::array<int, 2> cells{1, 1};  // cells[1] == 1 when dim == 1
    double half_extent = 1.0;        // L
    std::array<double, 2> h{1.0, 1.0};

    static Grid make1d(int nx, double L) {
        if (nx < 1 || L <= 0.0) throw std::invalid_argument("Grid: bad 1d spec");
        Grid g;
        g.dim = 1;
        g.cells = {nx, 1};
        g.half_extent = L;
        g.h = {2.0 * L / nx, 1.0};
        return g;
    }

    static Grid make2d(int nx, int ny, double L) {
        if (nx < 1 || ny < 1 || L <= 0.0)
            throw std::invalid_argument("Grid: bad 2d spec");
        Grid g;
        g.dim = 2;
        g.cells = {nx, ny};
        g.half_extent = L;
        g.h = {2.0 * L / nx, 2.0 * L / ny};
        return g;
    }

    std::size_t cell_count() const {
        return static_cast<std::size_t>(cells[0]) * cells[1];
    }

    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(ix) * cells[1] + iy;
    }

    double center(int axis, int i) const {
        return -half_extent + (i + 0.5) * h[axis];
    }

    /// Cell measure h_x (* h_y in 2d).
    double cell_volume() const { return dim == 2 ? h[0] * h[1] : h[0]; }

    double min_spacing() const { return dim == 2 ? std::min(h[0], h[1]) : h[0]; }

    bool operator==(const Grid&) const = default;
};

}  // namespace plapsys

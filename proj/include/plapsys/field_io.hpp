#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "plapsys/csv.hpp"
#include "plapsys/field.hpp"

namespace plapsys {

/// Snapshot format:
///   plapsys-field v1 n=<n> k=<k> cells=<c0>[,<c1>] L=<L> t=<t>
/// followed by one line per cell in row-major order, k values per line.
inline void writeSnapshot(std::ostream& os, const VectorField& f) {
    const Grid& g = f.grid;
    os << "plapsys-field v1 n=" << g.dim << " k=" << f.k()
       << " cells=" << g.cells[0];
    if (g.dim == 2) os << "," << g.cells[1];
    os << " L=" << fmt(g.half_extent) << " t=" << fmt(f.time) << "\n";
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        for (int l = 0; l < f.k(); ++l) {
            if (l) os << ' ';
            os << fmt(f.comp[l][i]);
        }
        os << "\n";
    }
}

inline VectorField readSnapshot(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw std::runtime_error("readSnapshot: missing header");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "plapsys-field" || version != "v1")
        throw std::runtime_error("readSnapshot: bad header: " + header);

    int n = 0, k = 0, c0 = 0, c1 = 1;
    double L = 0.0, t = 0.0;
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("readSnapshot: bad header token: " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "n") n = std::stoi(val);
        else if (key == "k") k = std::stoi(val);
        else if (key == "cells") {
            const auto comma = val.find(',');
            c0 = std::stoi(val.substr(0, comma));
            if (comma != std::string::npos) c1 = std::stoi(val.substr(comma + 1));
        } else if (key == "L") L = std::stod(val);
        else if (key == "t") t = std::stod(val);
        else throw std::runtime_error("readSnapshot: unknown header key: " + key);
    }
    if (n != 1 && n != 2)
        throw std::runtime_error("readSnapshot: bad dimension");
    const Grid g = n == 1 ? Grid::make1d(c0, L) : Grid::make2d(c0, c1, L);
    VectorField f(g, k, t);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
        for (int l = 0; l < k; ++l)
            if (!(is >> f.comp[l][i]))
                throw std::runtime_error("readSnapshot: truncated data");
    return f;
}

}  // namespace plapsys

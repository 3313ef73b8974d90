#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plapsys/csv.hpp"
#include "plapsys/grid.hpp"
#include "plapsys/params.hpp"
#include "plapsys/solver.hpp"

namespace plapsys {

/// Flat `key = value` run configuration. `#` starts a comment; unknown keys
/// are rejected with their line number. parse -> serialize -> parse is the
/// identity.
struct RunConfig {
    double p = 3.0;
    int n = 1;
    int k = 1;
    std::array<int, 2> cells{100, 1};
    double L = 10.0;
    double t_end = 1.0;
    double cfl_safety = 0.4;
    double epsilon = 0.0;
    long max_steps = 100'000'000;
    std::uint32_t seed = 0;
    std::string preset = "bump";
    std::vector<double> weights;
    std::array<double, 2> center{0.0, 0.0};
    double width = 1.0;
    std::vector<double> offsets;
    double t0 = 1.0;
    std::vector<double> snapshots;

    bool operator==(const RunConfig&) const = default;

    Grid makeGrid() const {
        return n == 1 ? Grid::make1d(cells[0], L)
                      : Grid::make2d(cells[0], cells[1], L);
    }
    SystemParams makeParams() const { return SystemParams(p, n, k, epsilon); }
    SolverConfig makeSolverConfig() const {
        SolverConfig sc;
        sc.cfl_safety = cfl_safety;
        sc.epsilon = epsilon;
        sc.t_end = t_end;
        sc.max_steps = max_steps;
        sc.snapshot_times = snapshots;
        return sc;
    }
    InitialPreset makePreset() const {
        InitialPreset pr;
        if (preset == "bump") pr.kind = InitialPreset::Kind::Bump;
        else if (preset == "barenblatt-weighted")
            pr.kind = InitialPreset::Kind::BarenblattWeighted;
        else if (preset == "random-compact")
            pr.kind = InitialPreset::Kind::RandomCompact;
        else throw std::invalid_argument("unknown preset: " + preset);
        pr.weights = weights.empty() ? std::vector<double>(k, 1.0) : weights;
        pr.center = center;
        pr.width = width;
        pr.offsets = offsets;
        pr.t0 = t0;
        pr.seed = seed;
        return pr;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parseList(const std::string& s, int line) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(trim(item)));
        } catch (...) {
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": bad number '" + item + "'");
        }
    }
    return out;
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
}

}  // namespace detail

inline RunConfig parseConfig(const std::string& text) {
    RunConfig cfg;
    bool saw_cells1 = false;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string body = detail::trim(
            hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) detail::fail(line, "expected key = value");
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string val = detail::trim(body.substr(eq + 1));
        if (val.empty()) detail::fail(line, "empty value for key '" + key + "'");

        auto as_double = [&]() {
            try { return std::stod(val); }
            catch (...) { detail::fail(line, "bad number '" + val + "'"); }
        };
        auto as_int = [&]() {
            try { return std::stol(val); }
            catch (...) { detail::fail(line, "bad integer '" + val + "'"); }
        };

        if (key == "p") cfg.p = as_double();
        else if (key == "n") cfg.n = static_cast<int>(as_int());
        else if (key == "k") cfg.k = static_cast<int>(as_int());
        else if (key == "cells") {
            const auto list = detail::parseList(val, line);
            if (list.empty() || list.size() > 2)
                detail::fail(line, "cells wants one or two values");
            cfg.cells[0] = static_cast<int>(list[0]);
            if (list.size() == 2) {
                cfg.cells[1] = static_cast<int>(list[1]);
                saw_cells1 = true;
            }
        }
        else if (key == "L") cfg.L = as_double();
        else if (key == "t_end") cfg.t_end = as_double();
        else if (key == "cfl_safety") cfg.cfl_safety = as_double();
        else if (key == "epsilon") cfg.epsilon = as_double();
        else if (key == "max_steps") cfg.max_steps = as_int();
        else if (key == "seed") cfg.seed = static_cast<std::uint32_t>(as_int());
        else if (key == "preset") cfg.preset = val;
        else if (key == "weights") cfg.weights = detail::parseList(val, line);
        else if (key == "center") {
            const auto list = detail::parseList(val, line);
            if (list.empty() || list.size() > 2)
                detail::fail(line, "center wants one or two values");
            cfg.center[0] = list[0];
            if (list.size() == 2) cfg.center[1] = list[1];
        }
        else if (key == "width") cfg.width = as_double();
        else if (key == "offsets") cfg.offsets = detail::parseList(val, line);
        else if (key == "t0") cfg.t0 = as_double();
        else if (key == "snapshots") {
            if (val.rfind("log:", 0) == 0) {
                double a = 0, b = 0;
                int count = 0;
                if (std::sscanf(val.c_str(), "log:%lf:%lf:%d", &a, &b, &count) != 3 ||
                    !(a > 0) || !(b > a) || count < 2)
                    detail::fail(line, "snapshots log spec wants log:t0:t1:count");
                cfg.snapshots.clear();
                for (int i = 0; i < count; ++i)
                    cfg.snapshots.push_back(
                        a * std::pow(b / a, static_cast<double>(i) / (count - 1)));
            } else {
                cfg.snapshots = detail::parseList(val, line);
            }
        }
        else detail::fail(line, "unknown key '" + key + "'");
    }

    if (!(cfg.p > 2.0)) throw std::invalid_argument("p must exceed 2");
    if (cfg.n != 1 && cfg.n != 2) throw std::invalid_argument("n must be 1 or 2");
    if (cfg.k < 1) throw std::invalid_argument("k must be >= 1");
    if (cfg.n == 1 && saw_cells1)
        throw std::invalid_argument("cells: second axis given for n = 1");
    if (cfg.n == 2 && !saw_cells1) cfg.cells[1] = cfg.cells[0];
    if (cfg.n == 1) {
        cfg.cells[1] = 1;
        cfg.center[1] = 0.0;
    }
    if (cfg.cells[0] < 1 || cfg.cells[1] < 1)
        throw std::invalid_argument("cells must be positive");
    if (!(cfg.L > 0.0)) throw std::invalid_argument("L must be > 0");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        throw std::invalid_argument("cfl_safety must be in (0, 1]");
    if (cfg.epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    if (!cfg.weights.empty() &&
        static_cast<int>(cfg.weights.size()) != cfg.k)
        throw std::invalid_argument("weights size must equal k");
    if (!cfg.weights.empty()) {
        double s = 0.0;
        for (double w : cfg.weights) {
            if (w < 0.0) throw std::invalid_argument("weights must be >= 0");
            s += w;
        }
        if (s == 0.0) throw std::invalid_argument("weights must not all be zero");
    }
    if (!cfg.offsets.empty() &&
        static_cast<int>(cfg.offsets.size()) != cfg.k)
        throw std::invalid_argument("offsets size must equal k");
    for (double s : cfg.snapshots)
        if (!(s > 0.0 && s <= cfg.t_end))
            throw std::invalid_argument("snapshots must lie in (0, t_end]");
    if (cfg.preset != "bump" && cfg.preset != "barenblatt-weighted" &&
        cfg.preset != "random-compact")
        throw std::invalid_argument("unknown preset: " + cfg.preset);
    return cfg;
}

inline std::string serializeConfig(const RunConfig& cfg) {
    std::ostringstream os;
    os << "p = " << fmt(cfg.p) << "\n";
    os << "n = " << cfg.n << "\n";
    os << "k = " << cfg.k << "\n";
    os << "cells = " << cfg.cells[0];
    if (cfg.n == 2) os << "," << cfg.cells[1];
    os << "\n";
    os << "L = " << fmt(cfg.L) << "\n";
    os << "t_end = " << fmt(cfg.t_end) << "\n";
    os << "cfl_safety = " << fmt(cfg.cfl_safety) << "\n";
    os << "epsilon = " << fmt(cfg.epsilon) << "\n";
    os << "max_steps = " << cfg.max_steps << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "preset = " << cfg.preset << "\n";
    if (!cfg.weights.empty()) {
        os << "weights = ";
        for (std::size_t i = 0; i < cfg.weights.size(); ++i)
            os << (i ? "," : "") << fmt(cfg.weights[i]);
        os << "\n";
    }
    os << "center = " << fmt(cfg.center[0]);
    if (cfg.n == 2) os << "," << fmt(cfg.center[1]);
    os << "\n";
    os << "width = " << fmt(cfg.width) << "\n";
    if (!cfg.offsets.empty()) {
        os << "offsets = ";
        for (std::size_t i = 0; i < cfg.offsets.size(); ++i)
            os << (i ? "," : "") << fmt(cfg.offsets[i]);
        os << "\n";
    }
    os << "t0 = " << fmt(cfg.t0) << "\n";
    if (!cfg.snapshots.empty()) {
        os << "snapshots = ";
        for (std::size_t i = 0; i < cfg.snapshots.size(); ++i)
            os << (i ? "," : "") << fmt(cfg.snapshots[i]);
        os << "\n";
    }
    return os.str();
}

}  // namespace plapsys

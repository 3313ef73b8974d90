#pragma once

#include <cstdio>
#include <string>

namespace plapsys {

/// Full round-trip formatting of a double (17 significant digits).
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt(long v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }

}  // namespace plapsys

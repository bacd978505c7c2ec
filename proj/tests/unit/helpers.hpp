#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nlds/config.hpp"
#include "nlds/grid.hpp"
#include "nlds/kernels.hpp"

namespace testing {

inline nlds::Grid line(int n, nlds::Boundary bc) { return nlds::Grid::build(nlds::BoxDomain({0.0}, {1.0}), {n}, bc); }

inline const nlds::BoxDomain& unit() {
    static const nlds::BoxDomain d({0.0}, {1.0});
    return d;
}

/// Values frozen from tests/oracles/reference_oracles.py.
inline const nlohmann::json& reference() {
    static const nlohmann::json j = [] {
        std::ifstream in(NLDS_ORACLE_JSON);
        std::stringstream ss;
        ss << in.rdbuf();
        return nlohmann::json::parse(ss.str());
    }();
    return j;
}

}  // namespace testing

#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "ising/json_io.hpp"

namespace testing {

inline const nlohmann::json& golden_file() {
    static const nlohmann::json j = ising::read_json_file(ISING_GOLDEN_FILE);
    return j;
}

inline double golden(const std::string& key) { return ising::golden_value(golden_file(), key); }

// Onsager spontaneous magnetisation, used as an oracle only.
inline double onsager_m(double beta) { return std::pow(1.0 - std::pow(std::sinh(2.0 * beta), -4.0), 0.125); }

}  // namespace testing

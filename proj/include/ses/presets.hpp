#pragma once

// Named parameter sets for the standard scenarios, in CLI config form.

#include "ses/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ses {

struct Preset {
    std::string name;
    std::string command;
    std::string description;
    Json config;
};

const std::vector<Preset>& figure_recipes();
/// Throws ConfigError for unknown names.
const Preset& find_preset(const std::string& name);

/// n agents, uniform weights 1/n off the diagonal, alpha and rho drawn from U(0,1).
/// b_i = mean(nu)/nu_i equalizes b_i nu_i, which makes the network self-directed.
ModelParams compare_instance(int n, std::uint64_t seed);

} // namespace ses

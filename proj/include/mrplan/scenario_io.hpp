#pragma once

#include <string>

#include "mrplan/core.hpp"

namespace mrplan {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the versioned scenario JSON (format: 1) and validates it.
/// Unknown keys are rejected.
Scenario load_scenario(const std::string& path);

Scenario parse_scenario(const std::string& json_text);

std::string scenario_to_json(const Scenario& s);

void save_scenario(const Scenario& s, const std::string& path);

}  // namespace mrplan

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "navform/model.hpp"

namespace navform {

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a YAML scenario document. Unknown keys at any level are errors.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Serializes a scenario back to the same YAML schema (12 significant digits).
std::string dump_scenario(const Scenario& s);

}  // namespace navform

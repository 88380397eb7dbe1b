#pragma once

#include <filesystem>
#include <string>

namespace test_support {

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(NAVFORM_SCENARIO_DIR) / name;
}

}  // namespace test_support

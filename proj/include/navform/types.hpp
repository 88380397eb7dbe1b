#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace navform {

using Vec2 = Eigen::Vector2d;

// Agents are 0-based internally; files and reports use 1-based ids.
using AgentIndex = std::size_t;

}  // namespace navform

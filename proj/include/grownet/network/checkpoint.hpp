#pragma once

#include <string>

#include "grownet/network/task_network.hpp"

namespace grownet::net {

/// Versioned binary dump of specs, parameter blocks, gates, and
/// heads; loading reconstructs bit-identical forward passes.
void save_checkpoint(const TaskNetwork& net, const std::string& path);

TaskNetwork load_checkpoint(const std::string& path);

}  // namespace grownet::net

#pragma once

#include <cstddef>
#include <vector>

namespace valid {

using AgentId = std::size_t;
using AgentSet = std::vector<AgentId>;

}  // namespace valid

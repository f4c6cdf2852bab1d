#include "netsync/errors.hpp"

#include <sstream>

namespace netsync {

std::string format_node_list(const std::vector<std::size_t>& nodes, std::size_t max_shown) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < nodes.size() && i < max_shown; ++i) {
    if (i) os << ", ";
    os << nodes[i];
  }
  if (nodes.size() > max_shown) os << ", ... (" << nodes.size() << " total)";
  os << ']';
  return os.str();
}

}  // namespace netsync

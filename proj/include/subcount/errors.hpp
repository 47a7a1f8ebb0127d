#pragma once

#include <stdexcept>
#include <string>

namespace subcount {

/// Thrown when an operation would exceed a configured cap (memory budget,
/// group-order cap, search-node budget).  Distinct from std::invalid_argument
/// so the CLI can map it to its own exit code.
class resource_error : public std::runtime_error {
  public:
    explicit resource_error(const std::string &what) : std::runtime_error(what) {}
};

} // namespace subcount

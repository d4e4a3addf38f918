#pragma once

#include <stdexcept>
#include <string>

namespace csched {

// A caller-side contract was violated: wrong slot count, angle out of the
// supported range, unknown identifier, malformed input.
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// The requested computation would exceed a configured work or memory cap.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csched

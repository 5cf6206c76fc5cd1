#pragma once

#include <stdexcept>
#include <string>

namespace hboot {

// Thrown when a requested (level, B) combination cannot be served by the
// available order statistics, or a run configuration is otherwise unusable.
// Maps to CLI exit code 3. Plain input validation uses std::invalid_argument
// (exit code 1), file problems use io_error (exit code 2).
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hboot

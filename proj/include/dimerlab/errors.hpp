#pragma once
#include <stdexcept>
#include <string>

namespace dimerlab {

// Error taxonomy mapped onto CLI exit codes:
//   config_error -> 2, numeric_error -> 3, io_error -> 4, invariant_error -> 5.

struct config_error : std::runtime_error {
  explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& m) : std::runtime_error(m) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& m) : std::runtime_error(m) {}
};

struct invariant_error : std::runtime_error {
  explicit invariant_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace dimerlab

#pragma once

#include <stdexcept>
#include <string>

namespace kamnf {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SmallDivisorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kamnf

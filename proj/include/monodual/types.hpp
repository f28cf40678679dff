#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace monodual {

using Site = std::uint32_t;
// Local state in the totally ordered space {0, ..., n}.
using Level = std::uint8_t;

// Invalid construction input: bad grid, map, parameter, or mismatched operands.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A requested computation exceeds a documented resource cap
// (event budget, enumeration size, iteration cap).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An identity that must hold exactly did not. Always a bug.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace monodual

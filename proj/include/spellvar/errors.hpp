#pragma once

#include <stdexcept>
#include <string>

namespace spellvar {

// Bad input data: malformed files, inconsistent records, failed invariants on
// loaded content. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or usage (missing paths, out-of-range options).
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spellvar

#pragma once

#include <stdexcept>
#include <string>

namespace bnls {

// Invalid experiment configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Overflow, non-convergence or divergence during a computation. Exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace bnls

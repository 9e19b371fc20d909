#pragma once

#include <stdexcept>
#include <string>

namespace eit {

/// Invalid configuration or input data; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure of a forward solve; the CLI maps this to exit code 3.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

}  // namespace eit

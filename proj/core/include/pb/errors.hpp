#pragma once

#include <stdexcept>
#include <string>

namespace pb {

/// Mismatched schemas, grids or field kinds.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input data (non-positive density, failed tensor identity, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values produced during numerics.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Time integration produced non-finite fields; carries the offending step.
struct BlowupError : std::runtime_error {
  long step;
  BlowupError(long step_, const std::string& msg)
      : std::runtime_error(msg), step(step_) {}
};

}  // namespace pb

#pragma once

#include <stdexcept>

namespace cnfgraph {

// Thrown when an operation would exceed one of the configured resource
// caps (pair tests, subset-sum table bits, quadruple enumeration).
// Callers that have a fallback path catch this; the CLI maps it to a
// dedicated exit code.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cnfgraph

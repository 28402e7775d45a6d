#pragma once

#include <stdexcept>
#include <string>

namespace aqt {

// Bloch vector outside the unit ball (beyond tolerance), or a density matrix
// that is not Hermitian / unit-trace.
class InvalidStateError : public std::runtime_error {
 public:
  explicit InvalidStateError(const std::string& what) : std::runtime_error(what) {}
};

// Replay backend ran out of stored records for an axis, or the requested
// axis does not match the next stored record.
class ReplayMissError : public std::runtime_error {
 public:
  explicit ReplayMissError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed counts / config / CSV input; message carries the line number.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Every particle got likelihood zero: the posterior has no support on the
// cloud and the update cannot be normalized.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  explicit DegeneratePosteriorError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace aqt

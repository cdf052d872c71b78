#ifndef LAMELAB_ERRORS_HPP
#define LAMELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lamelab {

// Invalid request: bad flag values, out-of-range exponent pairs, unsupported
// region/dimension combinations. Maps to CLI exit code 2.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Failure while running an otherwise valid experiment: symbol pole hit on a
// lattice point, parameter range violated mid-sweep, solver breakdown.
// Maps to CLI exit code 3.
class ComputeError : public std::runtime_error {
public:
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

class PoleError : public ComputeError {
public:
  explicit PoleError(const std::string& what) : ComputeError(what) {}
};

class UnresolvedScaleError : public ComputeError {
public:
  UnresolvedScaleError(const std::string& what, long min_points)
      : ComputeError(what), min_points_required(min_points) {}
  long min_points_required;
};

class ParameterRangeError : public ComputeError {
public:
  explicit ParameterRangeError(const std::string& what) : ComputeError(what) {}
};

}  // namespace lamelab

#endif

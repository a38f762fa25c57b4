#pragma once

#include <stdexcept>
#include <string>

namespace relustab {

// Bad arguments: dimension mismatches, invalid parameters, malformed input.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Problem size exceeds a hard enumeration cap.
class CapacityError : public UsageError {
 public:
  explicit CapacityError(const std::string& what) : UsageError(what) {}
};

// A query point sits on a separating hyperplane where the Jacobian is
// undefined. Carries the offending neuron index.
class BoundaryError : public UsageError {
 public:
  BoundaryError(const std::string& what, int neuron)
      : UsageError(what), neuron_(neuron) {}
  int neuron() const { return neuron_; }

 private:
  int neuron_;
};

// A mathematical precondition of an operation does not hold
// (theorem hypotheses, rank requirements, membership checks).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// No consistent neuron correspondence exists; the realizations differ.
class InconsistencyError : public PreconditionError {
 public:
  explicit InconsistencyError(const std::string& what) : PreconditionError(what) {}
};

// Fired when the simplex cycling guard trips; unreachable with Bland's rule.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace relustab

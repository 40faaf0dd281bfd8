#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace movosc {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside the domain of a trajectory or table.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A numerical procedure failed to reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Grid too small, enumeration too large, or similar capacity limits.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed form was evaluated at its removable singularity (exact resonance).
class SingularCaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace movosc

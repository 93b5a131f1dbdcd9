#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frechetlab {

// Malformed arguments: dimension mismatches, bad weights, unknown names.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A formula was evaluated outside the regime where it holds.
class OutOfRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An argument left the domain of a modulus / chart.
class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AntipodalPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidDensity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateRegression : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateEigengap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance exceeds the exact-solver size limits.
class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyRegion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class MaxIterations : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wraps a failure thrown by a user-supplied estimator inside the Monte Carlo
// harness; carries the replication index where it happened.
class EstimatorError : public std::runtime_error {
 public:
  EstimatorError(std::size_t replication, const std::string& what)
      : std::runtime_error("estimator failed at replication " +
                           std::to_string(replication) + ": " + what),
        replication_(replication) {}

  std::size_t replication() const noexcept { return replication_; }

 private:
  std::size_t replication_;
};

}  // namespace frechetlab

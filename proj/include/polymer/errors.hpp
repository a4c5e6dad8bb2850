#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polymer {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Lattice geometry that does not fit the request (region, path, segment).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Region larger than the configured memory cap.
class MemoryCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A computation produced NaN or an otherwise unusable floating value.
/// Distinct from an empty path set, which is reported as -inf.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver failed to bracket or converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Statistical routine given too little or degenerate data.
class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A replica task failed; carries the replica index and master seed so the
/// failure can be regenerated in isolation.
class ReplicaError : public std::runtime_error {
 public:
  ReplicaError(std::uint64_t seed, std::size_t replica, const std::string& what)
      : std::runtime_error("replica " + std::to_string(replica) + " (seed " + std::to_string(seed) +
                           ") failed: " + what),
        seed_(seed),
        replica_(replica) {}

  std::uint64_t seed() const { return seed_; }
  std::size_t replica() const { return replica_; }

 private:
  std::uint64_t seed_;
  std::size_t replica_;
};

}  // namespace polymer

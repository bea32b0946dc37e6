#pragma once

#include <stdexcept>
#include <string>

namespace lcc {

// Root of every error thrown by the library. The CLI maps each subclass to a
// distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// (variant, m, n) combination or vehicle id that does not exist.
class TopologyError : public Error {
 public:
  using Error::Error;
};

// Eigensolver failure, non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, double lambda_min)
      : NumericalError(what), lambda_min_(lambda_min) {}
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

// Frequency response requested on top of a pole.
class EvaluationError : public NumericalError {
 public:
  EvaluationError(const std::string& what, double omega)
      : NumericalError(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

class CollisionError : public Error {
 public:
  CollisionError(const std::string& what, double time, int follower, int leader)
      : Error(what), time_(time), follower_(follower), leader_(leader) {}
  double time() const noexcept { return time_; }
  int follower() const noexcept { return follower_; }
  int leader() const noexcept { return leader_; }

 private:
  double time_;
  int follower_;
  int leader_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcc

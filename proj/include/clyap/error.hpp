#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clyap {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's domain (bad shape,
// parameter out of range, unknown policy, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The Kronecker-sum (or unique-vectorized) Lyapunov operator is numerically
// singular.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NonStable : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

class NotAPolytree : public Error {
 public:
  using Error::Error;
};

class NotAcyclic : public Error {
 public:
  using Error::Error;
};

// Smallest singular value is not simple, so the least singular vector is not
// well defined.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class IllConditionedEigenvectors : public Error {
 public:
  using Error::Error;
};

// No two-point distribution reproduces the requested (c2, cr) pair.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace clyap

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsgev {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An observation falls outside the support 1 - xi (z - mu) / sigma > 0.
class SupportError : public DomainError {
 public:
  SupportError(const std::string& what, std::size_t index)
      : DomainError(what), index_(index) {}
  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Sample with zero dispersion (l2 == 0).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

class SingularDesignError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce an answer (no bracket, infeasible root, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nsgev

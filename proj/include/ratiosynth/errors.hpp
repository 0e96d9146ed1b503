#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratiosynth {

/// Malformed or inconsistent input (unknown state, letter, alphabet mismatch).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating point trouble in a solver: singular basis, iteration cap, stalls.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent computations that must agree did not.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The MDP's transition graph has several bottom components, so the
/// unichain formulation of the fractional program may not apply.
class MultichainSuspect : public std::runtime_error {
 public:
  explicit MultichainSuspect(std::string what, std::size_t bottom_components)
      : std::runtime_error(std::move(what)), bottom_components_(bottom_components) {}
  std::size_t bottom_components() const { return bottom_components_; }

 private:
  std::size_t bottom_components_;
};

/// Syntax error in a model file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ratiosynth

#pragma once

#include "ratiosynth/rational.hpp"

#include <compare>
#include <optional>
#include <string>

namespace ratiosynth {

/// A nonnegative value or Infinity. There is deliberately no arithmetic:
/// callers branch on is_infinite().
class ExtendedValue {
 public:
  static ExtendedValue infinity();
  static ExtendedValue exact(Rational value);
  static ExtendedValue approximate(double value);

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  bool has_exact() const { return exact_.has_value(); }

  /// Exact value; only valid for finite values computed in exact mode.
  const Rational& exact_value() const;
  /// Finite value as double; +inf for Infinity.
  double to_double() const;

  /// "infinity", "n/d" or a decimal rendering.
  std::string to_string() const;

  std::partial_ordering operator<=>(const ExtendedValue& other) const;
  bool operator==(const ExtendedValue& other) const;

 private:
  bool infinite_ = false;
  double approx_ = 0.0;
  std::optional<Rational> exact_;
};

}  // namespace ratiosynth

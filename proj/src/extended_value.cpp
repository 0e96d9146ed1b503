#include "ratiosynth/extended_value.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ratiosynth {

ExtendedValue ExtendedValue::infinity() {
  ExtendedValue v;
  v.infinite_ = true;
  v.approx_ = std::numeric_limits<double>::infinity();
  return v;
}

ExtendedValue ExtendedValue::exact(Rational value) {
  if (value < 0) throw std::invalid_argument("ExtendedValue must be nonnegative");
  ExtendedValue v;
  v.approx_ = value.get_d();
  v.exact_ = std::move(value);
  return v;
}

ExtendedValue ExtendedValue::approximate(double value) {
  if (!(value >= 0.0) || std::isinf(value))
    throw std::invalid_argument("ExtendedValue must be finite and nonnegative");
  ExtendedValue v;
  v.approx_ = value;
  return v;
}

const Rational& ExtendedValue::exact_value() const {
  if (!exact_) throw std::logic_error("value has no exact representation");
  return *exact_;
}

double ExtendedValue::to_double() const { return approx_; }

std::string ExtendedValue::to_string() const {
  if (infinite_) return "infinity";
  if (exact_) return ratiosynth::to_string(*exact_);
  std::ostringstream out;
  out << std::setprecision(17) << approx_;
  return out.str();
}

std::partial_ordering ExtendedValue::operator<=>(const ExtendedValue& other) const {
  if (infinite_ || other.infinite_) {
    if (infinite_ && other.infinite_) return std::partial_ordering::equivalent;
    return infinite_ ? std::partial_ordering::greater : std::partial_ordering::less;
  }
  if (exact_ && other.exact_) {
    int c = cmp(*exact_, *other.exact_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return approx_ <=> other.approx_;
}

bool ExtendedValue::operator==(const ExtendedValue& other) const {
  return (*this <=> other) == std::partial_ordering::equivalent;
}

}  // namespace ratiosynth

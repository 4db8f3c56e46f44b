#include "uirisk/extended_real.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace uirisk {

ExtendedReal::ExtendedReal(double value) {
  if (std::isnan(value)) {
    throw std::domain_error("ExtendedReal: NaN is not an extended real");
  }
  if (std::isinf(value)) {
    kind_ = value > 0 ? Kind::positive_infinity : Kind::negative_infinity;
  } else {
    value_ = value;
  }
}

double ExtendedReal::value() const {
  if (kind_ != Kind::finite) {
    throw std::logic_error("ExtendedReal: value() called on an infinite value");
  }
  return value_;
}

double ExtendedReal::to_double() const noexcept {
  switch (kind_) {
    case Kind::positive_infinity:
      return std::numeric_limits<double>::infinity();
    case Kind::negative_infinity:
      return -std::numeric_limits<double>::infinity();
    case Kind::finite:
      break;
  }
  return value_;
}

std::string ExtendedReal::to_string() const {
  if (kind_ == Kind::positive_infinity) return "inf";
  if (kind_ == Kind::negative_infinity) return "-inf";
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value_);
  (void)ec;
  return std::string(buffer, end);
}

bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
  if (a.kind_ != b.kind_) return false;
  return a.kind_ != ExtendedReal::Kind::finite || a.value_ == b.value_;
}

std::weak_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) noexcept {
  auto rank = [](const ExtendedReal& x) {
    switch (x.kind_) {
      case ExtendedReal::Kind::negative_infinity:
        return 0;
      case ExtendedReal::Kind::finite:
        return 1;
      case ExtendedReal::Kind::positive_infinity:
        return 2;
    }
    return 1;
  };
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra <=> rb;
  if (ra != 1) return std::weak_ordering::equivalent;
  if (a.value_ < b.value_) return std::weak_ordering::less;
  if (a.value_ > b.value_) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

ExtendedReal ExtendedReal::operator-() const noexcept {
  switch (kind_) {
    case Kind::positive_infinity:
      return negative_infinity();
    case Kind::negative_infinity:
      return infinity();
    case Kind::finite:
      break;
  }
  return ExtendedReal(-value_);
}

ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value() + b.value());
  if ((a.is_positive_infinity() && b.is_negative_infinity()) ||
      (a.is_negative_infinity() && b.is_positive_infinity())) {
    throw std::domain_error("ExtendedReal: inf - inf is undefined");
  }
  return a.is_finite() ? b : a;
}

ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) { return a + (-b); }

ExtendedReal operator*(double factor, const ExtendedReal& a) {
  if (std::isnan(factor) || std::isinf(factor)) {
    throw std::domain_error("ExtendedReal: scaling factor must be finite");
  }
  if (a.is_finite()) return ExtendedReal(factor * a.value());
  if (factor == 0.0) return ExtendedReal(0.0);
  return factor > 0 ? a : -a;
}

ExtendedReal max(const ExtendedReal& a, const ExtendedReal& b) noexcept { return a < b ? b : a; }

ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) noexcept { return b < a ? b : a; }

}  // namespace uirisk

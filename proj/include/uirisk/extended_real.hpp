#pragma once

#include <compare>
#include <limits>
#include <string>

namespace uirisk {

/// A real number or one of the two infinities.
///
/// Infinite values are a separate state rather than IEEE infinities, so code
/// that branches on "is this infinite" never depends on floating-point
/// overflow. Constructing from a non-finite double maps +inf/-inf onto the
/// corresponding state and rejects NaN.
class ExtendedReal {
 public:
  enum class Kind { finite, positive_infinity, negative_infinity };

  ExtendedReal() = default;
  ExtendedReal(double value);  // NOLINT(google-explicit-constructor)

  static ExtendedReal infinity() { return ExtendedReal(Kind::positive_infinity); }
  static ExtendedReal negative_infinity() { return ExtendedReal(Kind::negative_infinity); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  bool is_positive_infinity() const noexcept { return kind_ == Kind::positive_infinity; }
  bool is_negative_infinity() const noexcept { return kind_ == Kind::negative_infinity; }

  /// The finite value; throws std::logic_error for an infinity.
  double value() const;

  /// IEEE view (±inf for the infinite states), for reporting only.
  double to_double() const noexcept;

  /// "inf", "-inf", or the shortest round-trip decimal of the value.
  std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept;
  friend std::weak_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) noexcept;

  ExtendedReal operator-() const noexcept;

 private:
  explicit ExtendedReal(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::finite;
  double value_ = 0.0;
};

/// Sum with the usual conventions; throws std::domain_error for ∞ + (−∞).
ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b);
ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b);

/// Scaling by a finite factor; 0 · (±∞) is 0.
ExtendedReal operator*(double factor, const ExtendedReal& a);

ExtendedReal max(const ExtendedReal& a, const ExtendedReal& b) noexcept;
ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) noexcept;

}  // namespace uirisk

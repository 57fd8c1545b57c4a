#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace proppwalk {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Exact rational with a power-of-two denominator: mantissa / 2^exponent.
///
/// Values are kept canonical after every operation: either the exponent is
/// zero or the mantissa is odd. Zero is stored as 0 / 2^0. Canonical form
/// makes structural equality coincide with value equality.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value) : mantissa_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Dyadic(BigInt mantissa, std::uint64_t exponent = 0);

  /// m / 2^e built from an unreduced pair.
  static Dyadic from_parts(BigInt mantissa, std::uint64_t exponent) {
    return Dyadic(std::move(mantissa), exponent);
  }

  const BigInt& mantissa() const { return mantissa_; }
  std::uint64_t exponent() const { return exponent_; }

  bool is_zero() const { return sgn(mantissa_) == 0; }
  int sign() const { return sgn(mantissa_); }

  Dyadic abs() const;
  /// value / 2.
  Dyadic halved() const;
  /// value * 2^k (k may be negative).
  Dyadic scaled_pow2(std::int64_t k) const;

  /// The numerator of this value over the denominator 2^e. Requires
  /// e >= exponent().
  BigInt numerator_at(std::uint64_t e) const;

  Rational to_rational() const;
  double to_double() const;

  /// Decimal rendering rounded half away from zero to `digits` places.
  std::string to_decimal(unsigned digits = 12) const;
  /// "m/2^e", or just "m" for integers.
  std::string to_string() const;

  Dyadic& operator+=(const Dyadic& other);
  Dyadic& operator-=(const Dyadic& other);
  Dyadic& operator*=(const Dyadic& other);

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }
  friend Dyadic operator-(const Dyadic& a);

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  friend std::ostream& operator<<(std::ostream& os, const Dyadic& d);

 private:
  void normalize();

  BigInt mantissa_{0};
  std::uint64_t exponent_{0};
};

/// Exact comparison of a dyadic against a rational: sign of (d - q).
int compare(const Dyadic& d, const Rational& q);

/// Decimal rendering of an arbitrary rational, rounded half away from zero.
std::string to_decimal(const Rational& q, unsigned digits = 12);

/// Decimal rendering rounded toward -infinity (down) or +infinity (up).
std::string to_decimal_directed(const Rational& q, unsigned digits, bool up);

/// q as a dyadic when its reduced denominator is a power of two.
std::optional<Dyadic> to_dyadic(const Rational& q);

}  // namespace proppwalk

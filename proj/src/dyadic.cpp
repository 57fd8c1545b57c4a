#include "proppwalk/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace proppwalk {

namespace {

BigInt shifted_left(const BigInt& v, std::uint64_t bits) {
  BigInt out;
  mpz_mul_2exp(out.get_mpz_t(), v.get_mpz_t(), bits);
  return out;
}

// Rounds |num| * 10^digits / den half away from zero, with the sign of num.
std::string render_decimal(const BigInt& num, const BigInt& den, unsigned digits) {
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  BigInt mag = abs(num) * scale;
  BigInt q;
  BigInt r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), mag.get_mpz_t(), den.get_mpz_t());
  if (2 * r >= den) {
    ++q;
  }
  std::string body = q.get_str();
  if (body.size() <= digits) {
    body.insert(0, digits + 1 - body.size(), '0');
  }
  std::string out;
  if (sgn(num) < 0 && sgn(q) != 0) {
    out.push_back('-');
  }
  out += body.substr(0, body.size() - digits);
  if (digits > 0) {
    out.push_back('.');
    out += body.substr(body.size() - digits);
  }
  return out;
}

}  // namespace

Dyadic::Dyadic(BigInt mantissa, std::uint64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (sgn(mantissa_) == 0) {
    exponent_ = 0;
    return;
  }
  if (exponent_ == 0) {
    return;
  }
  const std::uint64_t tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
  const std::uint64_t strip = std::min(tz, exponent_);
  if (strip > 0) {
    mpz_tdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), strip);
    exponent_ -= strip;
  }
}

Dyadic Dyadic::abs() const {
  Dyadic out = *this;
  mpz_abs(out.mantissa_.get_mpz_t(), out.mantissa_.get_mpz_t());
  return out;
}

Dyadic Dyadic::halved() const {
  if (is_zero()) {
    return {};
  }
  Dyadic out = *this;
  ++out.exponent_;
  out.normalize();
  return out;
}

Dyadic Dyadic::scaled_pow2(std::int64_t k) const {
  if (is_zero()) {
    return {};
  }
  if (k >= 0) {
    const auto up = static_cast<std::uint64_t>(k);
    if (up <= exponent_) {
      return Dyadic(mantissa_, exponent_ - up);
    }
    return Dyadic(shifted_left(mantissa_, up - exponent_), 0);
  }
  return Dyadic(mantissa_, exponent_ + static_cast<std::uint64_t>(-k));
}

BigInt Dyadic::numerator_at(std::uint64_t e) const {
  if (e < exponent_) {
    throw std::invalid_argument("Dyadic::numerator_at: exponent below canonical exponent");
  }
  return shifted_left(mantissa_, e - exponent_);
}

Rational Dyadic::to_rational() const {
  BigInt den;
  mpz_setbit(den.get_mpz_t(), exponent_);
  Rational q(mantissa_, den);
  q.canonicalize();
  return q;
}

double Dyadic::to_double() const {
  long exp = 0;
  const double m = mpz_get_d_2exp(&exp, mantissa_.get_mpz_t());
  return std::ldexp(m, static_cast<int>(exp - static_cast<long>(exponent_)));
}

std::string Dyadic::to_decimal(unsigned digits) const {
  BigInt den;
  mpz_setbit(den.get_mpz_t(), exponent_);
  return render_decimal(mantissa_, den, digits);
}

std::string Dyadic::to_string() const {
  if (exponent_ == 0) {
    return mantissa_.get_str();
  }
  return mantissa_.get_str() + "/2^" + std::to_string(exponent_);
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
  if (other.is_zero()) {
    return *this;
  }
  if (exponent_ >= other.exponent_) {
    if (exponent_ == other.exponent_) {
      mantissa_ += other.mantissa_;
    } else {
      mantissa_ += shifted_left(other.mantissa_, exponent_ - other.exponent_);
    }
  } else {
    mpz_mul_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), other.exponent_ - exponent_);
    mantissa_ += other.mantissa_;
    exponent_ = other.exponent_;
  }
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) {
  return *this += -other;
}

Dyadic& Dyadic::operator*=(const Dyadic& other) {
  mantissa_ *= other.mantissa_;
  exponent_ += other.exponent_;
  normalize();
  return *this;
}

Dyadic operator-(const Dyadic& a) {
  Dyadic out = a;
  mpz_neg(out.mantissa_.get_mpz_t(), out.mantissa_.get_mpz_t());
  return out;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exponent_, b.exponent_);
  const int c = cmp(a.numerator_at(e), b.numerator_at(e));
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) {
  return os << d.to_string();
}

int compare(const Dyadic& d, const Rational& q) {
  // d - q = (m * den - num * 2^e) / (2^e * den)
  BigInt lhs = d.mantissa() * q.get_den();
  BigInt rhs;
  mpz_mul_2exp(rhs.get_mpz_t(), q.get_num_mpz_t(), d.exponent());
  const int c = cmp(lhs, rhs);
  return (c > 0) - (c < 0);
}

std::string to_decimal(const Rational& q, unsigned digits) {
  return render_decimal(q.get_num(), q.get_den(), digits);
}

std::string to_decimal_directed(const Rational& q, unsigned digits, bool up) {
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  BigInt n = q.get_num() * scale;
  BigInt m;
  if (up) {
    mpz_cdiv_q(m.get_mpz_t(), n.get_mpz_t(), q.get_den().get_mpz_t());
  } else {
    mpz_fdiv_q(m.get_mpz_t(), n.get_mpz_t(), q.get_den().get_mpz_t());
  }
  // m / 10^digits is exact, so the nearest rendering is the value itself.
  return render_decimal(m, scale, digits);
}

std::optional<Dyadic> to_dyadic(const Rational& q) {
  Rational r = q;
  r.canonicalize();
  const BigInt& den = r.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  return Dyadic(r.get_num(), mpz_sizeinbase(den.get_mpz_t(), 2) - 1);
}

}  // namespace proppwalk

#include <doctest.h>

#include <sstream>

#include "proppwalk/dyadic.hpp"

using proppwalk::BigInt;
using proppwalk::Dyadic;
using proppwalk::Rational;

TEST_CASE("dyadic values stay canonical") {
  Dyadic a(BigInt(12), 4);  // 12/16 = 3/4
  CHECK(a.mantissa() == 3);
  CHECK(a.exponent() == 2);
  CHECK(Dyadic(BigInt(0), 9).exponent() == 0);
  CHECK(Dyadic(BigInt(8), 2) == Dyadic(2));
}

TEST_CASE("dyadic arithmetic is exact") {
  Dyadic half = Dyadic(1).halved();
  Dyadic quarter = half.halved();
  CHECK(half + quarter == Dyadic(BigInt(3), 2));
  CHECK(half - half == Dyadic());
  CHECK((half - Dyadic(1)).sign() == -1);
  CHECK(half * half == quarter);
  CHECK(quarter.scaled_pow2(2) == Dyadic(1));
  CHECK(Dyadic(3).scaled_pow2(-1) == Dyadic(BigInt(3), 1));
  CHECK((-half).abs() == half);
  CHECK(quarter.numerator_at(5) == 8);
  CHECK_THROWS(quarter.numerator_at(1));
}

TEST_CASE("dyadic ordering and rational comparison") {
  Dyadic a(BigInt(5), 3);
  Dyadic b(BigInt(3), 2);
  CHECK(a < b);
  CHECK(b > a);
  CHECK(proppwalk::compare(a, Rational(5, 8)) == 0);
  CHECK(proppwalk::compare(a, Rational(2, 3)) < 0);
  CHECK(proppwalk::compare(-a, Rational(-2, 3)) > 0);
  CHECK(a.to_rational() == Rational(5, 8));
  CHECK(a.to_double() == doctest::Approx(0.625));
}

TEST_CASE("decimal rendering rounds half away from zero") {
  CHECK(Dyadic(BigInt(1), 1).to_decimal(0) == "1");
  CHECK(Dyadic(BigInt(-1), 1).to_decimal(0) == "-1");
  CHECK(Dyadic(BigInt(1), 3).to_decimal(2) == "0.13");
  CHECK(Dyadic(BigInt(-1), 3).to_decimal(2) == "-0.13");
  CHECK(Dyadic(BigInt(1), 10).to_decimal(2) == "0.00");
  CHECK(Dyadic(BigInt(-1), 10).to_decimal(2) == "0.00");
  CHECK(Dyadic(7).to_decimal(3) == "7.000");
  CHECK(proppwalk::to_decimal(Rational(2, 3), 4) == "0.6667");
  std::ostringstream os;
  os << Dyadic(BigInt(3), 2);
  CHECK(os.str() == "3/2^2");
}

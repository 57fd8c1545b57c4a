#include "proppwalk/numerics.hpp"

#include <cstdlib>

namespace proppwalk {

BigInt binom(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) {
    return 0;
  }
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, static_cast<unsigned long>(k));
  return out;
}

Dyadic H(std::int64_t x, std::int64_t t) {
  if (t < 0 || std::llabs(x) > t || !same_parity(x, t)) {
    return {};
  }
  return Dyadic(binom(static_cast<std::uint64_t>(t), (t + x) / 2),
                static_cast<std::uint64_t>(t));
}

BigInt inf_numerator(std::int64_t z, std::int64_t u) {
  if (u <= 0 || !same_parity(z, u) || std::llabs(z) > u) {
    return 0;
  }
  const auto n = static_cast<std::uint64_t>(u - 1);
  const std::int64_t k = (u + z) / 2;
  return binom(n, k) - binom(n, k - 1);
}

Dyadic inf(std::int64_t y, std::int64_t t) {
  if (t <= 0) {
    return {};
  }
  return Dyadic(inf_numerator(y, t), static_cast<std::uint64_t>(t));
}

std::int64_t t_max(std::int64_t y) {
  if (y == 0) {
    throw std::invalid_argument("t_max: y must be nonzero");
  }
  // y^2 - 4 >= -3, so the floor only needs care at y = +-1.
  const std::int64_t a = y * y - 4;
  const std::int64_t q = a >= 0 ? a / 3 : -((-a + 2) / 3);
  return q + 2;
}

Dyadic inf_time_partial_sum(std::int64_t x, std::int64_t t_cut) {
  if (x == 0) {
    throw std::invalid_argument("inf_time_partial_sum: x must be nonzero");
  }
  const std::int64_t ax = std::llabs(x);
  if (t_cut < ax) {
    return {};
  }
  // |inf(x, t)| * 2^t = x * C(t, m) / t with m = (t + x) / 2. Walk t in steps
  // of two, updating C(t, m) by its ratio and accumulating at denominator 2^t.
  std::int64_t t = ax;
  std::int64_t m = ax;
  BigInt c = 1;  // C(x, x)
  BigInt acc = 0;
  BigInt term;
  std::int64_t last = t;
  while (t <= t_cut) {
    term = c * ax;
    mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(t));
    if (t != ax) {
      acc <<= 2;
    }
    acc += term;
    last = t;
    // C(t+2, m+1) = C(t, m) (t+1)(t+2) / ((m+1)(t-m+1))
    c *= static_cast<unsigned long>(t + 1);
    c *= static_cast<unsigned long>(t + 2);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(m + 1));
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(t - m + 1));
    t += 2;
    m += 1;
  }
  return Dyadic(acc, static_cast<std::uint64_t>(last));
}

InfluenceTable::InfluenceTable(std::int64_t z_max, std::int64_t u_max)
    : z_max_(z_max), u_max_(u_max) {
  if (z_max < 0 || u_max < 0) {
    throw std::invalid_argument("InfluenceTable: negative bounds");
  }
  cells_.resize(static_cast<std::size_t>((2 * z_max + 1) * (u_max + 1)));
}

const BigInt& InfluenceTable::numerator(std::int64_t z, std::int64_t u) {
  if (u <= 0 || std::llabs(z) > u || !same_parity(z, u)) {
    return zero_;
  }
  if (std::llabs(z) > z_max_ || u > u_max_) {
    throw std::out_of_range("InfluenceTable: query outside the table");
  }
  auto& cell = cells_[static_cast<std::size_t>((z + z_max_) * (u_max_ + 1) + u)];
  if (!cell) {
    cell = inf_numerator(z, u);
  }
  return *cell;
}

}  // namespace proppwalk

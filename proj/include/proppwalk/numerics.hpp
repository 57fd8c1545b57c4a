#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "proppwalk/dyadic.hpp"

namespace proppwalk {

/// Binomial coefficient C(n, k); zero when k < 0 or k > n.
BigInt binom(std::uint64_t n, std::int64_t k);

/// C(n, k) mod 2. By Lucas' theorem the coefficient is odd exactly when the
/// bits of k are a submask of the bits of n.
inline int binom_parity(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) {
    return 0;
  }
  return (static_cast<std::uint64_t>(k) & ~n) == 0 ? 1 : 0;
}

inline bool same_parity(std::int64_t a, std::int64_t b) { return ((a - b) & 1) == 0; }

/// Probability that a simple random walk from the origin sits at x after t
/// steps: 2^-t * C(t, (t+x)/2) when t ~ x, zero otherwise (and for t < 0).
Dyadic H(std::int64_t x, std::int64_t t);

/// 2^u * inf(z, u) as an integer:
///   C(u-1, (u+z)/2) - C(u-1, (u+z)/2 - 1)     when z ~ u and u >= 1,
/// zero otherwise.
BigInt inf_numerator(std::int64_t z, std::int64_t u);

/// Influence of a Propp step: H(y+1, t-1) - H(y, t). This is how much the
/// chance of a chip at y reaching the origin changes when it is sent right
/// instead of being split evenly, with t steps remaining. Zero for t <= 0.
Dyadic inf(std::int64_t y, std::int64_t t);

/// The time at which |inf(y, .)| peaks: floor((y^2 - 4) / 3) + 2.
/// Throws std::invalid_argument for y = 0.
std::int64_t t_max(std::int64_t y);

/// sum_{t=1}^{t_cut} |inf(x, t)|, exact. Throws std::invalid_argument for x = 0.
Dyadic inf_time_partial_sum(std::int64_t x, std::int64_t t_cut);

/// Memoised influence numerators over a bounded (|z| <= z_max, u <= u_max)
/// box. Entries are filled lazily; not thread safe.
class InfluenceTable {
 public:
  InfluenceTable(std::int64_t z_max, std::int64_t u_max);

  std::int64_t z_max() const { return z_max_; }
  std::int64_t u_max() const { return u_max_; }

  /// 2^u * inf(z, u); zero outside |z| <= u.
  const BigInt& numerator(std::int64_t z, std::int64_t u);

 private:
  std::int64_t z_max_;
  std::int64_t u_max_;
  std::vector<std::optional<BigInt>> cells_;
  BigInt zero_{0};
};

/// Certified enclosure of the single-vertex discrepancy constant
///   c1 = 2 * sum_{y >= 1} |inf(y, t_max(y))|.
struct C1Bracket {
  Rational lower;
  Rational upper;
  std::int64_t terms_used = 0;
  /// Terms y <= exact_terms were summed exactly; the remaining terms up to
  /// terms_used were enclosed by directed-rounding interval arithmetic.
  std::int64_t exact_terms = 0;

  Rational width() const { return upper - lower; }
};

/// Largest y whose peak term c1_bracket sums with exact binomials.
inline constexpr std::int64_t kC1ExactTerms = 400;

/// Rational upper bound on 6 * sqrt(6 / pi). The bound
///   2 |inf(y, t_max(y))| <= 6 sqrt(6/pi) / y^2
/// follows from C(2m, m) <= 4^m / sqrt(pi m) and t_max(y) >= y^2 / 3.
Rational c1_tail_constant();

/// Upper bound on 2 * sum_{y > y_cut} |inf(y, t_max(y))|, namely
/// c1_tail_constant() / y_cut (integral test on the y^-2 envelope).
Rational c1_tail_bound(std::int64_t y_cut);

/// Certified bracket for c1 using y = 1..y_cut explicitly and the closed-form
/// tail bound beyond. Requires y_cut >= 1.
C1Bracket c1_bracket(std::int64_t y_cut);

/// True when values rise (weakly) to a peak and then fall (weakly).
template <class T>
bool is_unimodal(std::span<const T> values) {
  std::size_t i = 1;
  while (i < values.size() && !(values[i] < values[i - 1])) {
    ++i;
  }
  for (; i < values.size(); ++i) {
    if (values[i - 1] < values[i]) {
      return false;
    }
  }
  return true;
}

/// Indices attaining the maximum value.
template <class T>
std::vector<std::size_t> argmax_all(std::span<const T> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (out.empty() || values[out.front()] < values[i]) {
      out.assign(1, i);
    } else if (values[i] == values[out.front()]) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace proppwalk

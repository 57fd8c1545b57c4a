#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "proppwalk/dyadic.hpp"
#include "proppwalk/machine.hpp"
#include "proppwalk/numerics.hpp"

namespace proppwalk {

struct SpaceInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  SpaceInterval() = default;
  SpaceInterval(std::int64_t lo_, std::int64_t hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw std::invalid_argument("SpaceInterval: lo > hi");
  }
  std::int64_t length() const { return hi - lo + 1; }
  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
};

/// Times t0, t0 + 1, ..., t0 + length - 1.
struct TimeInterval {
  std::int64_t t0 = 0;
  std::int64_t length = 1;

  TimeInterval() = default;
  TimeInterval(std::int64_t t0_, std::int64_t length_) : t0(t0_), length(length_) {
    if (t0 < 0) throw std::invalid_argument("TimeInterval: negative start");
    if (length < 1) throw std::invalid_argument("TimeInterval: length must be >= 1");
  }
  std::int64_t last() const { return t0 + length - 1; }
  bool contains(std::int64_t t) const { return t0 <= t && t <= last(); }
};

/// E(x, t) = sum_z f(z, 0) H(x - z, t) for the configuration's chips.
/// Times are absolute: the configuration sits at c.time() and t >= c.time().
Dyadic expected(const Configuration& c, std::int64_t x, std::int64_t t);

/// Expected chips at x at time t2 when the game runs t1 Propp steps and then
/// t2 - t1 linear steps.
Dyadic mixed_expected(const Configuration& c, std::int64_t x, std::int64_t t1, std::int64_t t2);

/// f(x, t) - E(x, t).
Dyadic disc_vertex(const Configuration& c, std::int64_t x, std::int64_t t);

/// Evaluates the split expansion
///   f(x, t) - E(x, t) = sum_y arr(y, 0) sum_i (-1)^i inf(y - x, t - s_i(y))
/// where s_0(y) < s_1(y) < ... are the times y held an odd pile.
class SplitExpansion {
 public:
  /// Validates that the log's rotors alternate starting from the initial
  /// rotors; throws ConfigError otherwise.
  SplitExpansion(const Configuration& initial, OddSplitLog log);

  Dyadic at(std::int64_t x, std::int64_t t);

 private:
  Configuration initial_;
  OddSplitLog log_;
  std::optional<InfluenceTable> table_;
  std::int64_t span_lo_ = 0;
  std::int64_t span_hi_ = -1;
};

Dyadic disc_via_splits(const Configuration& initial, const OddSplitLog& log, std::int64_t x,
                       std::int64_t t);

/// Runs the Propp and linear machines in lockstep. With a focus region only
/// the backward light cone of [x_lo, x_hi] x {t_end} is simulated, which is
/// all that discrepancies inside the region depend on.
class CoupledRun {
 public:
  struct Focus {
    std::int64_t x_lo;
    std::int64_t x_hi;
    std::int64_t t_end;
  };

  CoupledRun(const Configuration& c, std::int64_t horizon, std::optional<Focus> focus = {});

  std::int64_t time() const { return propp_.time(); }
  void step();
  void run_to(std::int64_t t);

  /// (f - E)(x) * 2^steps, exact integer.
  BigInt disc_scaled(std::int64_t x) const;
  Dyadic disc(std::int64_t x) const;
  /// Sum over [lo, hi] of (f - E), exact.
  Dyadic disc_sum(std::int64_t lo, std::int64_t hi) const;
  std::int64_t steps() const { return linear_.steps(); }

  const ProppMachine& propp() const { return propp_; }
  const LinearMachine& linear() const { return linear_; }

 private:
  ProppMachine propp_;
  LinearMachine linear_;
  std::optional<Focus> focus_;
};

/// f(X, t) - E(X, t).
Dyadic disc_space(const Configuration& c, const SpaceInterval& X, std::int64_t t);

/// sum_{t in S} (f(x, t) - E(x, t)), from a single run.
Dyadic disc_time(const Configuration& c, std::int64_t x, const TimeInterval& S);

/// sum_{x in X} sum_{t in S} (f - E), from a single run.
Dyadic disc_spacetime(const Configuration& c, const SpaceInterval& X, const TimeInterval& S);

/// (1/M) sum_{k=1}^{M} disc(X + k, t)^2 with X = [base, base + L - 1].
Rational l2_average(const Configuration& c, std::int64_t L, std::int64_t M, std::int64_t t,
                    std::int64_t base);

// Reports.

enum class QueryKind { Vertex, Space, Time, SpaceTime, L2 };
const char* kind_name(QueryKind k);

struct DiscrepancyReport {
  QueryKind kind = QueryKind::Vertex;
  std::int64_t x_lo = 0;
  std::int64_t x_hi = 0;
  std::int64_t t0 = 0;
  std::int64_t t_len = 1;
  Dyadic value;
  std::int64_t horizon = 0;

  /// Signed decimal rendering of `value`, rounded half away from zero.
  std::string decimal(unsigned digits = 12) const { return value.to_decimal(digits); }
};

DiscrepancyReport report_vertex(const Configuration& c, std::int64_t x, std::int64_t t);
DiscrepancyReport report_space(const Configuration& c, const SpaceInterval& X, std::int64_t t);
DiscrepancyReport report_time(const Configuration& c, std::int64_t x, const TimeInterval& S);
DiscrepancyReport report_box(const Configuration& c, const SpaceInterval& X,
                             const TimeInterval& S);
/// l2_average as a report: [x_lo, x_hi] is the unshifted window X, t0 = t and
/// t_len carries M. M must be a power of two so the average stays dyadic.
DiscrepancyReport report_l2(const Configuration& c, std::int64_t L, std::int64_t M, std::int64_t t,
                            std::int64_t base);

/// `kind,x_lo,x_hi,t0,t_len,exact_num,exact_den_pow2,decimal`
std::string csv_header();
std::string csv_row(const DiscrepancyReport& r, unsigned digits = 12);

}  // namespace proppwalk

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "proppwalk/discrepancy.hpp"
#include "proppwalk/machine.hpp"

namespace proppwalk {

/// One time row of a space-time table: values for x in [lo, hi]. Only cells
/// on the occupied class at that time carry meaning; others are ignored.
struct TableRow {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::vector<std::int8_t> cells;

  bool empty() const { return lo > hi; }
  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
  std::int8_t at(std::int64_t x) const { return cells[static_cast<std::size_t>(x - lo)]; }
  std::int8_t& at(std::int64_t x) { return cells[static_cast<std::size_t>(x - lo)]; }
};

/// Ragged table over times 0..t_hi for a game of class `variant`.
struct SpaceTimeTable {
  Parity variant = Parity::Even;
  std::vector<TableRow> rows;

  std::int64_t t_hi() const { return static_cast<std::int64_t>(rows.size()) - 1; }
  bool active(std::int64_t x, std::int64_t t) const { return occupied_class(variant, x, t); }
  bool defined(std::int64_t x, std::int64_t t) const {
    return t >= 0 && t <= t_hi() && rows[static_cast<std::size_t>(t)].contains(x) && active(x, t);
  }
  /// Appends (or resets) row t with range [lo, hi] filled with `fill`.
  void set_row(std::int64_t t, std::int64_t lo, std::int64_t hi, std::int8_t fill);
};

/// Required rotor directions rho(x, t) in {+1, -1}. Rows must be nested:
/// row t+1 lies inside row t.
struct RotorPrescription : SpaceTimeTable {
  Rotor get(std::int64_t x, std::int64_t t) const {
    return rotor_from_sign(rows[static_cast<std::size_t>(t)].at(x));
  }
  void set(std::int64_t x, std::int64_t t, Rotor r) {
    rows[static_cast<std::size_t>(t)].at(x) = static_cast<std::int8_t>(sign(r));
  }
  /// Throws std::invalid_argument on unset cells or non-nested rows.
  void validate() const;
};

/// Required pile parities pi(x, t) in {0, 1}, together with the initial
/// rotors to use (unlisted sites point right).
struct ParityPrescription : SpaceTimeTable {
  std::map<std::int64_t, Rotor> initial_rotors;

  int get(std::int64_t x, std::int64_t t) const { return rows[static_cast<std::size_t>(t)].at(x); }
  void set(std::int64_t x, std::int64_t t, int bit) {
    rows[static_cast<std::size_t>(t)].at(x) = static_cast<std::int8_t>(bit);
  }
  Rotor initial_rotor(std::int64_t x) const {
    auto it = initial_rotors.find(x);
    return it == initial_rotors.end() ? Rotor::Right : it->second;
  }
  void validate() const;
};

/// The parity table and initial rotors that a rotor table forces: a site
/// flips between t and t+2 exactly when its pile at t is odd.
ParityPrescription induced_parities(const RotorPrescription& p);

/// The rotor table produced by a parity prescription (rows must be nested).
RotorPrescription induced_rotors(const ParityPrescription& p);

enum class ForcingMethod {
  Auto,
  /// Stage T adds piles of 2^T chips chosen one site at a time so that the
  /// parities at time T come out right. Cost grows like t_hi^4.
  Stagewise,
  /// Plays the game forward injecting single chips wherever a parity is
  /// wrong, then folds the injections back to time 0 modulo 2^(t_hi + 1).
  BackPropagation,
};

/// Auto picks the stagewise construction up to this many rows.
inline constexpr std::int64_t kStagewiseMaxRows = 64;

struct ForcingOptions {
  ForcingMethod method = ForcingMethod::Auto;
  /// Called after every stage of the stagewise construction with the
  /// configuration built so far.
  std::function<void(std::int64_t stage, const Configuration& partial)> observer;
  /// Overrides the memory budget from the environment.
  std::optional<std::uint64_t> memory_budget;
};

/// Bytes needed to force a table with the given extent.
std::uint64_t forcing_memory_estimate(std::int64_t width, std::int64_t rows);

/// A configuration whose game has the prescribed parities everywhere in the
/// table. Verified by simulation; throws ForcingError if that fails and
/// ResourceLimitError when the estimate exceeds the budget.
Configuration parity_force(const ParityPrescription& p, const ForcingOptions& opts = {});

/// A configuration whose game has arr(x, t) = rho(x, t) on the table.
Configuration arrow_force(const RotorPrescription& p, const ForcingOptions& opts = {});

/// Simulation checks used after construction; return the first mismatch as a
/// message, or nullopt when every cell matches.
std::optional<std::string> check_parities(const Configuration& c, const ParityPrescription& p);
std::optional<std::string> check_rotors(const Configuration& c, const RotorPrescription& p);

// Text format:
//   propp-prescription v1 kind=<rotor|parity> parity=<even|odd> t_hi=<n>
//   <t> <x_lo> <x_hi> <cells>      cells: R/L or 0/1, '.' off the occupied class
//   rotor <x> <R|L>                parity prescriptions only
void write_prescription(std::ostream& os, const RotorPrescription& p);
void write_prescription(std::ostream& os, const ParityPrescription& p);
/// Reads either kind.
std::variant<RotorPrescription, ParityPrescription> read_prescription(std::istream& is);

// ---------------------------------------------------------------------------
// Lower-bound constructions.

struct PlannedSplit {
  std::int64_t x;
  std::int64_t t;
  Rotor rotor;
};

/// sum over splits, x in X, t in S of sign(rotor) inf(y - x, t - s): the
/// discrepancy a game with exactly these odd splits shows on X x S.
Dyadic split_sum(const std::vector<PlannedSplit>& splits, const SpaceInterval& X,
                 const TimeInterval& S);

struct VertexLowerBound {
  Configuration config;
  std::int64_t t0 = 0;
  std::vector<PlannedSplit> splits;
  Dyadic predicted;  // 2 sum_{x=1}^{y} |inf(x, t_max(x))|
  std::string provenance;
};

struct SpaceLowerBound {
  Configuration config;
  SpaceInterval X;
  std::int64_t t = 0;
  std::vector<PlannedSplit> splits;
  Dyadic predicted;
  std::string provenance;
};

struct TimeLowerBound {
  Configuration config;
  std::int64_t x = 0;
  TimeInterval S;
  std::int64_t T = 0;  // after rounding down to a square
  bool rounded = false;
  std::vector<PlannedSplit> splits;
  Dyadic predicted;
  std::string provenance;
};

struct SpaceTimeLowerBound {
  Configuration config;
  SpaceInterval X;
  TimeInterval S;
  std::int64_t T = 0;
  bool wide = false;  // L >= 2 sqrt(T)
  std::vector<PlannedSplit> splits;
  Dyadic predicted;
  std::string provenance;
};

/// One odd split at every 0 < |x| <= y, at time t_max(y) - t_max(x), each
/// rotor pointing toward the origin so every term adds |inf|. Requires y even.
VertexLowerBound gen_vertex_lb(std::int64_t y, const ForcingOptions& opts = {});

/// Interval X = [-L, -1] at time L^2 with splits at even y in [1, L] and
/// time L^2 - y^2 - 1, rotors pointing at X.
SpaceLowerBound gen_space_lb(std::int64_t L, const ForcingOptions& opts = {});

/// Vertex 0 over S = [4T + 1, 5T], splits at x in [r, 2r] (r^2 = T) and time
/// 4T - x^2, rotors pointing at 0. Non-square T is rounded down.
TimeLowerBound gen_time_lb(std::int64_t T, const ForcingOptions& opts = {});

/// X = [-L + 1, 0]. For L >= 2 sqrt(T): splits at x in [ceil(sqrt T), L],
/// time L^2 - x^2, S = [L^2, L^2 + T - 1]. Otherwise the time construction
/// with S = [4T + 1, 5T].
SpaceTimeLowerBound gen_spacetime_lb(std::int64_t L, std::int64_t T,
                                     const ForcingOptions& opts = {});

/// Block-random rotor plan: r(a, b) = +-1 from a SplitMix64 hash of
/// (seed, a, b). With tau = t - u the time left until t,
///   arr(x, u) = r(a, b) for even x, 4^b < tau <= 4^(b+1), a 2^b < x <= (a+1) 2^b,
/// and +1 for odd x and for tau <= 4.
class RandomRotorPlan {
 public:
  RandomRotorPlan(std::uint64_t seed, std::int64_t t);

  std::uint64_t seed() const { return seed_; }
  std::int64_t horizon() const { return t_; }
  int r(std::int64_t a, std::int64_t b) const;
  Rotor arrow(std::int64_t x, std::int64_t u) const;
  /// Block (a, b) of an even site, or nullopt for tau <= 4.
  std::optional<std::pair<std::int64_t, std::int64_t>> block(std::int64_t x, std::int64_t u) const;

  /// Rows u = 0..t+1 with |x| <= 2t + 1 - u.
  RotorPrescription prescription() const;

 private:
  std::uint64_t seed_;
  std::int64_t t_;
};

struct L2RandomConstruction {
  Configuration config;
  RandomRotorPlan plan;
  std::string provenance;
};

L2RandomConstruction gen_l2_random(std::int64_t t, std::uint64_t seed,
                                   const ForcingOptions& opts = {});

}  // namespace proppwalk

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "proppwalk/dyadic.hpp"
#include "proppwalk/errors.hpp"

namespace proppwalk {

/// Rotor direction; Right (+1) points toward +infinity.
enum class Rotor : std::int8_t { Left = -1, Right = 1 };

inline int sign(Rotor r) { return static_cast<int>(r); }
inline Rotor flipped(Rotor r) { return r == Rotor::Right ? Rotor::Left : Rotor::Right; }
inline Rotor rotor_from_sign(int s) { return s >= 0 ? Rotor::Right : Rotor::Left; }
inline char rotor_char(Rotor r) { return r == Rotor::Right ? 'R' : 'L'; }

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

inline int as_int(Parity p) { return static_cast<int>(p); }
inline const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

/// Whether position x holds chips at time t in a game of the given class.
inline bool occupied_class(Parity p, std::int64_t x, std::int64_t t) {
  return ((x - t - as_int(p)) & 1) == 0;
}

/// Snapshot of a game on a finite window [offset, offset + size). Sites
/// outside the window hold no chips and point right.
class Configuration {
 public:
  Configuration() = default;

  /// Validates non-negativity and single-class support; throws ConfigError
  /// naming the offending positions.
  Configuration(std::int64_t offset, std::vector<BigInt> chips, std::vector<Rotor> rotors,
                Parity parity, std::int64_t time = 0);

  std::int64_t offset() const { return offset_; }
  std::int64_t lo() const { return offset_; }
  std::int64_t hi() const { return offset_ + static_cast<std::int64_t>(chips_.size()) - 1; }
  std::size_t size() const { return chips_.size(); }
  Parity parity() const { return parity_; }
  std::int64_t time() const { return time_; }

  const BigInt& chips(std::int64_t x) const;
  Rotor rotor(std::int64_t x) const;
  const std::vector<BigInt>& chip_cells() const { return chips_; }
  const std::vector<Rotor>& rotor_cells() const { return rotors_; }

  BigInt total_chips() const;
  /// Smallest and largest positions holding chips; nullopt-like (1, 0) when empty.
  std::pair<std::int64_t, std::int64_t> support() const;

  /// The class of positions occupied right now, i.e. the parity tag under
  /// which this snapshot reads back as a time-0 configuration.
  Parity occupied_parity() const {
    return ((as_int(parity_) + time_) & 1) ? Parity::Odd : Parity::Even;
  }

  /// Value equality: same time, class, chips and rotors at every site
  /// (sites outside either window count as 0 chips, rotor right).
  friend bool operator==(const Configuration& a, const Configuration& b);

 private:
  std::int64_t offset_ = 0;
  std::vector<BigInt> chips_;
  std::vector<Rotor> rotors_;
  Parity parity_ = Parity::Even;
  std::int64_t time_ = 0;
};

/// Builds a time-0 configuration from sparse entries. Unlisted rotors point
/// right. Throws ConfigError on negative chips or mixed-parity support.
Configuration make_config(const std::vector<std::pair<std::int64_t, BigInt>>& entries,
                          const std::vector<std::pair<std::int64_t, Rotor>>& rotor_entries,
                          Parity parity);

struct OddSplitEvent {
  std::int64_t position = 0;
  std::int64_t time = 0;
  Rotor rotor_at_split = Rotor::Right;

  friend bool operator==(const OddSplitEvent&, const OddSplitEvent&) = default;
};

/// Odd splits grouped by position, times increasing within each position.
class OddSplitLog {
 public:
  struct Entry {
    std::int64_t time;
    Rotor rotor;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  void append(const OddSplitEvent& e);
  void append(std::int64_t position, std::int64_t time, Rotor rotor) {
    append({position, time, rotor});
  }

  const std::map<std::int64_t, std::vector<Entry>>& by_position() const { return events_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  /// All events ordered by (time, position).
  std::vector<OddSplitEvent> chronological() const;

  /// Throws ConfigError unless rotors alternate along each position and the
  /// first recorded rotor matches initial_rotor(position).
  void validate(const std::function<Rotor(std::int64_t)>& initial_rotor) const;

  friend bool operator==(const OddSplitLog&, const OddSplitLog&) = default;

 private:
  std::map<std::int64_t, std::vector<Entry>> events_;
  std::size_t count_ = 0;
};

/// In-place stepping engine. The window is fixed at construction, wide
/// enough that chips cannot reach its edge within `horizon` steps.
///
/// Chips at time t live on one parity class only, so a step can scatter each
/// occupied cell into its (empty) neighbours within a single array.
class ProppMachine {
 public:
  ProppMachine(const Configuration& c, std::int64_t horizon);

  std::int64_t time() const { return time_; }
  std::int64_t lo() const { return offset_; }
  std::int64_t hi() const { return offset_ + static_cast<std::int64_t>(chips_.size()) - 1; }
  Parity parity() const { return parity_; }

  const BigInt& chips(std::int64_t x) const;
  Rotor rotor(std::int64_t x) const;
  bool occupied(std::int64_t x) const { return occupied_class(parity_, x, time_); }

  /// Range of positions that may hold chips right now.
  std::pair<std::int64_t, std::int64_t> reach() const { return {reach_lo_, reach_hi_}; }

  /// Advance one step; odd splits are appended to `log` when given.
  void step(OddSplitLog* log = nullptr);

  /// Advance one step processing only sources in [src_lo, src_hi]. Chips
  /// outside that range are discarded. Used when only a shrinking light cone
  /// matters.
  void step_within(std::int64_t src_lo, std::int64_t src_hi, OddSplitLog* log = nullptr);

  /// Add chips at x (must be on the occupied class; count may be negative as
  /// long as the pile stays non-negative).
  void add_chips(std::int64_t x, const BigInt& count);
  void set_rotor(std::int64_t x, Rotor r);

  Configuration snapshot() const;

 private:
  std::size_t index(std::int64_t x) const;

  std::int64_t offset_ = 0;
  std::vector<BigInt> chips_;
  std::vector<Rotor> rotors_;
  Parity parity_ = Parity::Even;
  std::int64_t time_ = 0;
  std::int64_t reach_lo_ = 0;
  std::int64_t reach_hi_ = -1;
  BigInt zero_{0};
};

struct GameTrace {
  Configuration initial;
  Configuration final;
  OddSplitLog log;
  std::int64_t horizon = 0;
};

/// One Propp step: odd piles send the extra chip along the rotor, which then
/// flips. The returned configuration's window is one cell wider per side.
std::pair<Configuration, std::vector<OddSplitEvent>> propp_step(const Configuration& c);

GameTrace propp_run(const Configuration& c, std::int64_t t);

/// The linear machine: every pile sends exactly half to each neighbour.
/// Returns the nonzero entries of E(., t).
std::map<std::int64_t, Dyadic> linear_run(const Configuration& c, std::int64_t t);

/// Streaming linear machine on scaled integers S_t = 2^t E(., t), which obey
/// S_{t+1}(x) = S_t(x-1) + S_t(x+1).
class LinearMachine {
 public:
  LinearMachine(const Configuration& c, std::int64_t horizon);

  std::int64_t time() const { return time_; }
  /// Steps taken so far; scaled values carry denominator 2^steps().
  std::int64_t steps() const { return time_ - start_; }
  const BigInt& scaled(std::int64_t x) const;
  Dyadic expected(std::int64_t x) const;
  void step();
  void step_within(std::int64_t src_lo, std::int64_t src_hi);

 private:
  std::int64_t offset_ = 0;
  std::vector<BigInt> cells_;
  Parity parity_ = Parity::Even;
  std::int64_t time_ = 0;
  std::int64_t start_ = 0;
  std::int64_t reach_lo_ = 0;
  std::int64_t reach_hi_ = -1;
  BigInt zero_{0};
};

// Text formats.

/// `propp-config v1 parity=<even|odd>` then `x <chips> <R|L>` lines for every
/// site that is not (0 chips, rotor R). The parity tag is the occupied class
/// at the snapshot's time, so any snapshot reads back as a time-0 start.
/// `comments` are written as `# ...` lines after the header.
void write_config(std::ostream& os, const Configuration& c,
                  const std::vector<std::string>& comments = {});
Configuration read_config(std::istream& is);

/// `propp-splits v1` then `x t <R|L>` lines in chronological order.
void write_split_log(std::ostream& os, const OddSplitLog& log);
OddSplitLog read_split_log(std::istream& is);

}  // namespace proppwalk

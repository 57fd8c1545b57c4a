#include "proppwalk/machine.hpp"

#include <algorithm>
#include <sstream>

namespace proppwalk {

namespace {

std::string join_positions(const std::vector<std::int64_t>& xs) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(xs.size(), 12);
  for (std::size_t i = 0; i < shown; ++i) {
    os << (i ? ", " : "") << xs[i];
  }
  if (shown < xs.size()) {
    os << ", ... (" << xs.size() << " total)";
  }
  return os.str();
}

// Widens [lo, lo + cells.size()) so that [need_lo, need_hi] fits.
template <class T>
void grow_to(std::vector<T>& cells, std::int64_t& lo, std::int64_t need_lo, std::int64_t need_hi,
             const T& fill) {
  const std::int64_t hi = lo + static_cast<std::int64_t>(cells.size()) - 1;
  if (need_lo >= lo && need_hi <= hi) {
    return;
  }
  const std::int64_t pad = std::max<std::int64_t>(16, static_cast<std::int64_t>(cells.size()) / 2);
  const std::int64_t new_lo = need_lo < lo ? need_lo - pad : lo;
  const std::int64_t new_hi = need_hi > hi ? need_hi + pad : hi;
  std::vector<T> out(static_cast<std::size_t>(new_hi - new_lo + 1), fill);
  std::move(cells.begin(), cells.end(), out.begin() + (lo - new_lo));
  cells = std::move(out);
  lo = new_lo;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::int64_t offset, std::vector<BigInt> chips,
                             std::vector<Rotor> rotors, Parity parity, std::int64_t time)
    : offset_(offset),
      chips_(std::move(chips)),
      rotors_(std::move(rotors)),
      parity_(parity),
      time_(time) {
  if (time_ < 0) {
    throw ConfigError("configuration time must be non-negative");
  }
  if (rotors_.size() < chips_.size()) {
    rotors_.resize(chips_.size(), Rotor::Right);
  } else if (rotors_.size() > chips_.size()) {
    chips_.resize(rotors_.size(), BigInt(0));
  }
  std::vector<std::int64_t> negative;
  std::vector<std::int64_t> wrong_class;
  for (std::size_t i = 0; i < chips_.size(); ++i) {
    const std::int64_t x = offset_ + static_cast<std::int64_t>(i);
    const int s = sgn(chips_[i]);
    if (s < 0) {
      negative.push_back(x);
    } else if (s > 0 && !occupied_class(parity_, x, time_)) {
      wrong_class.push_back(x);
    }
  }
  if (!negative.empty()) {
    throw ConfigError("negative chip count at position(s) " + join_positions(negative), negative);
  }
  if (!wrong_class.empty()) {
    throw ConfigError(std::string("mixed parity: chips off the ") + parity_name(occupied_parity()) +
                          " class at position(s) " + join_positions(wrong_class),
                      wrong_class);
  }
}

const BigInt& Configuration::chips(std::int64_t x) const {
  static const BigInt zero(0);
  if (x < lo() || x > hi()) {
    return zero;
  }
  return chips_[static_cast<std::size_t>(x - offset_)];
}

Rotor Configuration::rotor(std::int64_t x) const {
  if (x < lo() || x > hi()) {
    return Rotor::Right;
  }
  return rotors_[static_cast<std::size_t>(x - offset_)];
}

BigInt Configuration::total_chips() const {
  BigInt total = 0;
  for (const auto& c : chips_) {
    total += c;
  }
  return total;
}

std::pair<std::int64_t, std::int64_t> Configuration::support() const {
  std::int64_t first = 1;
  std::int64_t last = 0;
  for (std::size_t i = 0; i < chips_.size(); ++i) {
    if (sgn(chips_[i]) != 0) {
      const std::int64_t x = offset_ + static_cast<std::int64_t>(i);
      if (first > last) {
        first = x;
      }
      last = x;
    }
  }
  return {first, last};
}

bool operator==(const Configuration& a, const Configuration& b) {
  if (a.time_ != b.time_ || a.parity_ != b.parity_) {
    return false;
  }
  const std::int64_t lo = std::min(a.lo(), b.lo());
  const std::int64_t hi = std::max(a.hi(), b.hi());
  for (std::int64_t x = lo; x <= hi; ++x) {
    if (a.chips(x) != b.chips(x) || a.rotor(x) != b.rotor(x)) {
      return false;
    }
  }
  return true;
}

Configuration make_config(const std::vector<std::pair<std::int64_t, BigInt>>& entries,
                          const std::vector<std::pair<std::int64_t, Rotor>>& rotor_entries,
                          Parity parity) {
  if (entries.empty() && rotor_entries.empty()) {
    return Configuration(0, {}, {}, parity, 0);
  }
  std::int64_t lo = INT64_MAX;
  std::int64_t hi = INT64_MIN;
  for (const auto& [x, n] : entries) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  for (const auto& [x, r] : rotor_entries) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  std::vector<BigInt> chips(n, BigInt(0));
  std::vector<Rotor> rotors(n, Rotor::Right);
  for (const auto& [x, c] : entries) {
    chips[static_cast<std::size_t>(x - lo)] += c;
  }
  for (const auto& [x, r] : rotor_entries) {
    rotors[static_cast<std::size_t>(x - lo)] = r;
  }
  return Configuration(lo, std::move(chips), std::move(rotors), parity, 0);
}

// ---------------------------------------------------------------------------
// OddSplitLog

void OddSplitLog::append(const OddSplitEvent& e) {
  auto& seq = events_[e.position];
  if (!seq.empty() && seq.back().time >= e.time) {
    throw std::invalid_argument("OddSplitLog: times must increase per position");
  }
  seq.push_back({e.time, e.rotor_at_split});
  ++count_;
}

std::vector<OddSplitEvent> OddSplitLog::chronological() const {
  std::vector<OddSplitEvent> out;
  out.reserve(count_);
  for (const auto& [x, seq] : events_) {
    for (const auto& e : seq) {
      out.push_back({x, e.time, e.rotor});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const OddSplitEvent& a, const OddSplitEvent& b) {
    return a.time < b.time;
  });
  return out;
}

void OddSplitLog::validate(const std::function<Rotor(std::int64_t)>& initial_rotor) const {
  std::vector<std::int64_t> bad;
  for (const auto& [x, seq] : events_) {
    Rotor expect = initial_rotor(x);
    for (const auto& e : seq) {
      if (e.rotor != expect) {
        bad.push_back(x);
        break;
      }
      expect = flipped(expect);
    }
  }
  if (!bad.empty()) {
    throw ConfigError("split log rotors do not alternate from the initial rotor at position(s) " +
                          join_positions(bad),
                      bad);
  }
}

// ---------------------------------------------------------------------------
// ProppMachine

ProppMachine::ProppMachine(const Configuration& c, std::int64_t horizon)
    : parity_(c.parity()), time_(c.time()) {
  const std::int64_t pad = std::max<std::int64_t>(horizon, 0) + 1;
  offset_ = c.lo() - pad;
  const auto n = static_cast<std::size_t>(c.size() + 2 * pad);
  chips_.assign(n, BigInt(0));
  rotors_.assign(n, Rotor::Right);
  for (std::size_t i = 0; i < c.size(); ++i) {
    chips_[i + static_cast<std::size_t>(pad)] = c.chip_cells()[i];
    rotors_[i + static_cast<std::size_t>(pad)] = c.rotor_cells()[i];
  }
  const auto [s_lo, s_hi] = c.support();
  reach_lo_ = s_lo;
  reach_hi_ = s_hi;
}

std::size_t ProppMachine::index(std::int64_t x) const {
  return static_cast<std::size_t>(x - offset_);
}

const BigInt& ProppMachine::chips(std::int64_t x) const {
  if (x < lo() || x > hi()) {
    return zero_;
  }
  return chips_[index(x)];
}

Rotor ProppMachine::rotor(std::int64_t x) const {
  if (x < lo() || x > hi()) {
    return Rotor::Right;
  }
  return rotors_[index(x)];
}

void ProppMachine::step(OddSplitLog* log) { step_within(reach_lo_, reach_hi_, log); }

void ProppMachine::step_within(std::int64_t src_lo, std::int64_t src_hi, OddSplitLog* log) {
  // Chips outside the source range are dropped.
  for (std::int64_t x = reach_lo_; x <= reach_hi_; ++x) {
    if (x < src_lo || x > src_hi) {
      if (x >= lo() && x <= hi()) {
        chips_[index(x)] = 0;
      }
    }
  }
  std::int64_t a = std::max(src_lo, reach_lo_);
  std::int64_t b = std::min(src_hi, reach_hi_);
  if (a > b) {
    reach_lo_ = 1;
    reach_hi_ = 0;
    ++time_;
    return;
  }
  if (a - 1 < lo() || b + 1 > hi()) {
    std::int64_t off = offset_;
    grow_to(chips_, off, a - 1, b + 1, BigInt(0));
    std::int64_t off2 = offset_;
    grow_to(rotors_, off2, a - 1, b + 1, Rotor::Right);
    offset_ = off;
  }
  // Start on the occupied class.
  if (!occupied(a)) {
    ++a;
  }
  BigInt half;
  for (std::int64_t x = a; x <= b; x += 2) {
    BigInt& pile = chips_[index(x)];
    if (sgn(pile) == 0) {
      continue;
    }
    const bool odd = mpz_odd_p(pile.get_mpz_t()) != 0;
    mpz_fdiv_q_2exp(half.get_mpz_t(), pile.get_mpz_t(), 1);
    BigInt& left = chips_[index(x - 1)];
    BigInt& right = chips_[index(x + 1)];
    left += half;
    right += half;
    if (odd) {
      Rotor& r = rotors_[index(x)];
      if (log) {
        log->append(x, time_, r);
      }
      if (r == Rotor::Right) {
        right += 1;
      } else {
        left += 1;
      }
      r = flipped(r);
    }
    pile = 0;
  }
  reach_lo_ = a - 1;
  reach_hi_ = b + 1;
  ++time_;
}

void ProppMachine::add_chips(std::int64_t x, const BigInt& count) {
  if (sgn(count) == 0) {
    return;
  }
  if (!occupied(x)) {
    throw ConfigError("add_chips: position " + std::to_string(x) + " is not on the occupied class",
                      {x});
  }
  if (x < lo() || x > hi()) {
    std::int64_t off = offset_;
    grow_to(chips_, off, x, x, BigInt(0));
    std::int64_t off2 = offset_;
    grow_to(rotors_, off2, x, x, Rotor::Right);
    offset_ = off;
  }
  BigInt& pile = chips_[index(x)];
  pile += count;
  if (sgn(pile) < 0) {
    throw ConfigError("add_chips: pile at " + std::to_string(x) + " became negative", {x});
  }
  if (reach_lo_ > reach_hi_) {
    reach_lo_ = reach_hi_ = x;
  } else {
    reach_lo_ = std::min(reach_lo_, x);
    reach_hi_ = std::max(reach_hi_, x);
  }
}

void ProppMachine::set_rotor(std::int64_t x, Rotor r) {
  if (x < lo() || x > hi()) {
    std::int64_t off = offset_;
    grow_to(chips_, off, x, x, BigInt(0));
    std::int64_t off2 = offset_;
    grow_to(rotors_, off2, x, x, Rotor::Right);
    offset_ = off;
  }
  rotors_[index(x)] = r;
}

Configuration ProppMachine::snapshot() const {
  return Configuration(offset_, chips_, rotors_, parity_, time_);
}

// ---------------------------------------------------------------------------
// Free functions

std::pair<Configuration, std::vector<OddSplitEvent>> propp_step(const Configuration& c) {
  ProppMachine m(c, 1);
  OddSplitLog log;
  m.step(&log);
  const Configuration full = m.snapshot();
  // Trim back to the input window grown by one cell per side.
  const std::int64_t lo = c.lo() - 1;
  const auto n = c.size() + 2;
  std::vector<BigInt> chips(n, BigInt(0));
  std::vector<Rotor> rotors(n, Rotor::Right);
  for (std::size_t i = 0; i < n; ++i) {
    chips[i] = full.chips(lo + static_cast<std::int64_t>(i));
    rotors[i] = full.rotor(lo + static_cast<std::int64_t>(i));
  }
  return {Configuration(lo, std::move(chips), std::move(rotors), c.parity(), c.time() + 1),
          log.chronological()};
}

GameTrace propp_run(const Configuration& c, std::int64_t t) {
  if (t < 0) {
    throw std::invalid_argument("propp_run: negative horizon");
  }
  GameTrace trace;
  trace.initial = c;
  trace.horizon = t;
  if (t == 0) {
    trace.final = c;
    return trace;
  }
  ProppMachine m(c, t);
  for (std::int64_t s = 0; s < t; ++s) {
    m.step(&trace.log);
  }
  trace.final = m.snapshot();
  return trace;
}

LinearMachine::LinearMachine(const Configuration& c, std::int64_t horizon)
    : parity_(c.parity()), time_(c.time()), start_(c.time()) {
  const std::int64_t pad = std::max<std::int64_t>(horizon, 0) + 1;
  offset_ = c.lo() - pad;
  cells_.assign(c.size() + static_cast<std::size_t>(2 * pad), BigInt(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    cells_[i + static_cast<std::size_t>(pad)] = c.chip_cells()[i];
  }
  const auto [s_lo, s_hi] = c.support();
  reach_lo_ = s_lo;
  reach_hi_ = s_hi;
}

const BigInt& LinearMachine::scaled(std::int64_t x) const {
  const std::int64_t hi = offset_ + static_cast<std::int64_t>(cells_.size()) - 1;
  if (x < offset_ || x > hi) {
    return zero_;
  }
  return cells_[static_cast<std::size_t>(x - offset_)];
}

Dyadic LinearMachine::expected(std::int64_t x) const {
  return Dyadic(scaled(x), static_cast<std::uint64_t>(time_ - start_));
}

void LinearMachine::step() { step_within(reach_lo_, reach_hi_); }

void LinearMachine::step_within(std::int64_t src_lo, std::int64_t src_hi) {
  const std::int64_t hi = offset_ + static_cast<std::int64_t>(cells_.size()) - 1;
  for (std::int64_t x = reach_lo_; x <= reach_hi_; ++x) {
    if ((x < src_lo || x > src_hi) && x >= offset_ && x <= hi) {
      cells_[static_cast<std::size_t>(x - offset_)] = 0;
    }
  }
  std::int64_t a = std::max(src_lo, reach_lo_);
  const std::int64_t b = std::min(src_hi, reach_hi_);
  ++time_;
  if (a > b) {
    reach_lo_ = 1;
    reach_hi_ = 0;
    return;
  }
  grow_to(cells_, offset_, a - 1, b + 1, BigInt(0));
  if (!occupied_class(parity_, a, time_ - 1)) {
    ++a;
  }
  for (std::int64_t x = a; x <= b; x += 2) {
    BigInt& v = cells_[static_cast<std::size_t>(x - offset_)];
    if (sgn(v) == 0) {
      continue;
    }
    cells_[static_cast<std::size_t>(x - 1 - offset_)] += v;
    cells_[static_cast<std::size_t>(x + 1 - offset_)] += v;
    v = 0;
  }
  reach_lo_ = a - 1;
  reach_hi_ = b + 1;
}

std::map<std::int64_t, Dyadic> linear_run(const Configuration& c, std::int64_t t) {
  if (t < 0) {
    throw std::invalid_argument("linear_run: negative horizon");
  }
  LinearMachine m(c, t);
  for (std::int64_t s = 0; s < t; ++s) {
    m.step();
  }
  std::map<std::int64_t, Dyadic> out;
  const auto [s_lo, s_hi] = c.support();
  for (std::int64_t x = s_lo - t; x <= s_hi + t; ++x) {
    if (sgn(m.scaled(x)) != 0) {
      out.emplace(x, Dyadic(m.scaled(x), static_cast<std::uint64_t>(t)));
    }
  }
  return out;
}

}  // namespace proppwalk

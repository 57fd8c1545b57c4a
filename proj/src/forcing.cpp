#include "proppwalk/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "proppwalk/limits.hpp"
#include "proppwalk/numerics.hpp"

namespace proppwalk {

namespace {

struct Span {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool empty() const { return lo > hi; }
};

// First position >= x on the class occupied at time t.
std::int64_t first_active(Parity p, std::int64_t x, std::int64_t t) {
  return occupied_class(p, x, t) ? x : x + 1;
}

// Last row holding at least one cell on the occupied class, or -1.
std::int64_t last_active_row(const SpaceTimeTable& p) {
  for (std::int64_t t = p.t_hi(); t >= 0; --t) {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    if (!row.empty() && first_active(p.variant, row.lo, t) <= row.hi) {
      return t;
    }
  }
  return -1;
}

// R_t: the cells whose state at time t matters for some table cell at a
// time >= t. R_t covers row t and [lo_{t+1} - 1, hi_{t+1} + 1].
std::vector<Span> domains(const SpaceTimeTable& p, std::int64_t t_top) {
  std::vector<Span> out(static_cast<std::size_t>(t_top + 1));
  for (std::int64_t t = t_top; t >= 0; --t) {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    Span s;
    if (!row.empty()) {
      s = {row.lo, row.hi};
    }
    if (t < t_top) {
      const Span& next = out[static_cast<std::size_t>(t + 1)];
      if (!next.empty()) {
        s = s.empty() ? Span{next.lo - 1, next.hi + 1}
                      : Span{std::min(s.lo, next.lo - 1), std::max(s.hi, next.hi + 1)};
      }
    }
    out[static_cast<std::size_t>(t)] = s;
  }
  return out;
}

ParityPrescription shifted(const ParityPrescription& p, std::int64_t dx, Parity variant) {
  ParityPrescription out;
  out.variant = variant;
  out.rows = p.rows;
  for (auto& row : out.rows) {
    if (!row.empty()) {
      row.lo += dx;
      row.hi += dx;
    }
  }
  for (const auto& [x, r] : p.initial_rotors) {
    out.initial_rotors.emplace(x + dx, r);
  }
  return out;
}

Configuration build_config(std::int64_t lo, std::vector<BigInt> chips,
                           const std::map<std::int64_t, Rotor>& rotors, Parity parity) {
  std::int64_t hi = lo + static_cast<std::int64_t>(chips.size()) - 1;
  std::int64_t new_lo = lo;
  if (!rotors.empty()) {
    new_lo = std::min(lo, rotors.begin()->first);
    hi = std::max(hi, rotors.rbegin()->first);
  }
  const auto n = static_cast<std::size_t>(hi - new_lo + 1);
  std::vector<BigInt> cells(n, BigInt(0));
  std::vector<Rotor> rot(n, Rotor::Right);
  for (std::size_t i = 0; i < chips.size(); ++i) {
    cells[static_cast<std::size_t>(lo - new_lo) + i] = std::move(chips[i]);
  }
  for (const auto& [x, r] : rotors) {
    rot[static_cast<std::size_t>(x - new_lo)] = r;
  }
  return Configuration(new_lo, std::move(cells), std::move(rot), parity, 0);
}

// Both solvers work on even-class tables; odd tables are shifted by one.
class Solver {
 public:
  Solver(const ParityPrescription& p, std::int64_t t_top)
      : p_(p), t_top_(t_top), dom_(domains(p, t_top)) {}

  Configuration stagewise(const std::function<void(std::int64_t, const Configuration&)>& observer,
                          std::int64_t shift_back, Parity out_parity) {
    const Span r0 = dom_[0];
    const auto width = static_cast<std::size_t>(r0.hi - r0.lo + 1);
    std::vector<BigInt> g(width, BigInt(0));

    std::vector<Rotor> rotors(width, Rotor::Right);
    for (std::int64_t x = r0.lo; x <= r0.hi; ++x) {
      rotors[static_cast<std::size_t>(x - r0.lo)] = p_.initial_rotor(x);
    }
    ProppMachine m(Configuration(r0.lo, std::vector<BigInt>(width, BigInt(0)), rotors,
                                 Parity::Even, 0),
                   0);

    std::vector<BigInt> pascal{BigInt(1)};  // C(T, k), k = 0..T
    for (std::int64_t T = 0; T <= t_top_; ++T) {
      if (T > 0) {
        std::vector<BigInt> next(pascal.size() + 1, BigInt(0));
        next.front() = 1;
        next.back() = 1;
        for (std::size_t k = 1; k < pascal.size(); ++k) next[k] = pascal[k - 1] + pascal[k];
        pascal = std::move(next);
      }
      const TableRow& row = p_.rows[static_cast<std::size_t>(T)];
      std::vector<std::int64_t> chosen;
      if (!row.empty()) {
        // The pile at y = x + T reaches x with weight C(T, 0) = 1 and only
        // touches sites to the right of x; symmetrically on the left.
        auto parity_now = [&](std::int64_t x) {
          int par = mpz_odd_p(m.chips(x).get_mpz_t()) ? 1 : 0;
          for (std::int64_t y : chosen) {
            par ^= binom_parity(static_cast<std::uint64_t>(T), (T + x - y) / 2);
          }
          return par;
        };
        const std::int64_t start = std::max<std::int64_t>(row.lo, 1);
        for (std::int64_t x = first_active(Parity::Even, start, T); x <= row.hi; x += 2) {
          if (parity_now(x) != row.at(x)) chosen.push_back(x + T);
        }
        std::int64_t x = std::min<std::int64_t>(row.hi, 0);
        if (!occupied_class(Parity::Even, x, T)) --x;
        for (; x >= row.lo; x -= 2) {
          if (parity_now(x) != row.at(x)) chosen.push_back(x - T);
        }
      }
      const Span rt = dom_[static_cast<std::size_t>(T)];
      BigInt pile;
      mpz_setbit(pile.get_mpz_t(), static_cast<mp_bitcnt_t>(T));
      for (std::int64_t y : chosen) {
        g[static_cast<std::size_t>(y - r0.lo)] += pile;
        const std::int64_t lo = std::max(rt.lo, y - T);
        const std::int64_t hi = std::min(rt.hi, y + T);
        for (std::int64_t x = first_active(Parity::Even, lo, T); x <= hi; x += 2) {
          m.add_chips(x, pascal[static_cast<std::size_t>((T + x - y) / 2)]);
        }
      }
      if (observer) {
        observer(T, shift(build_config(r0.lo, g, p_.initial_rotors, Parity::Even), shift_back,
                          out_parity));
      }
      if (T < t_top_) {
        m.step_within(rt.lo, rt.hi);
      }
    }
    return build_config(r0.lo, std::move(g), p_.initial_rotors, Parity::Even);
  }

  Configuration back_propagation() {
    const Span r0 = dom_[0];
    // One spare cell per side so scatters from the domain edge stay in range.
    const std::int64_t base = r0.lo - 1;
    const auto width = static_cast<std::size_t>(r0.hi - r0.lo + 3);
    auto idx = [base](std::int64_t x) { return static_cast<std::size_t>(x - base); };

    // Forward: the game from zero chips, injecting one chip wherever a
    // prescribed parity would otherwise come out wrong.
    std::vector<std::int64_t> J(width, 0);
    std::vector<std::int8_t> rot(width, 1);
    for (std::int64_t x = r0.lo; x <= r0.hi; ++x) rot[idx(x)] = static_cast<std::int8_t>(sign(p_.initial_rotor(x)));
    std::vector<std::vector<std::uint8_t>> inject(static_cast<std::size_t>(t_top_ + 1));
    for (std::int64_t t = 0; t <= t_top_; ++t) {
      const Span rt = dom_[static_cast<std::size_t>(t)];
      auto& a = inject[static_cast<std::size_t>(t)];
      a.assign(static_cast<std::size_t>(rt.hi - rt.lo + 1), 0);
      const TableRow& row = p_.rows[static_cast<std::size_t>(t)];
      if (!row.empty()) {
        for (std::int64_t x = first_active(Parity::Even, row.lo, t); x <= row.hi; x += 2) {
          if ((J[idx(x)] & 1) != row.at(x)) {
            J[idx(x)] += 1;
            a[static_cast<std::size_t>(x - rt.lo)] = 1;
          }
        }
      }
      if (t == t_top_) break;
      for (std::int64_t x = first_active(Parity::Even, rt.lo, t); x <= rt.hi; x += 2) {
        const std::int64_t n = J[idx(x)];
        if (n == 0) continue;
        const std::int64_t half = n >> 1;
        J[idx(x - 1)] += half;
        J[idx(x + 1)] += half;
        if (n & 1) {
          J[idx(x + rot[idx(x)])] += 1;
          rot[idx(x)] = static_cast<std::int8_t>(-rot[idx(x)]);
        }
        J[idx(x)] = 0;
      }
    }
    J.clear();
    J.shrink_to_fit();

    // Backward: G_t holds the extra chips needed at time t to reproduce every
    // injection from t on, modulo 2^(N - t). Chips 2v at time t arrive as
    // q(v)(x) = v(x - 1) + v(x + 1) at time t + 1, so
    //   G_t = a_t + 2 q^{-1} G_{t+1},
    // with q^{-1} solved left to right along the chain.
    const std::int64_t N = t_top_ + 1;
    std::vector<BigInt> G(width, BigInt(0));
    {
      const Span rt = dom_[static_cast<std::size_t>(t_top_)];
      const auto& a = inject[static_cast<std::size_t>(t_top_)];
      for (std::int64_t x = rt.lo; x <= rt.hi; ++x) {
        G[idx(x)] = a[static_cast<std::size_t>(x - rt.lo)];
      }
    }
    for (std::int64_t t = t_top_ - 1; t >= 0; --t) {
      const Span rt = dom_[static_cast<std::size_t>(t)];
      const Span rn = dom_[static_cast<std::size_t>(t + 1)];
      const auto bits_next = static_cast<mp_bitcnt_t>(N - t - 1);
      const auto bits_cur = static_cast<mp_bitcnt_t>(N - t);
      for (std::int64_t x = first_active(Parity::Even, rt.lo, t); x <= rt.hi; x += 2) {
        G[idx(x)] = 0;
      }
      if (!rn.empty()) {
        for (std::int64_t x = first_active(Parity::Even, rn.lo, t + 1); x <= rn.hi; x += 2) {
          BigInt& v = G[idx(x + 1)];
          mpz_sub(v.get_mpz_t(), G[idx(x)].get_mpz_t(), G[idx(x - 1)].get_mpz_t());
          mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits_next);
          G[idx(x)] = 0;
        }
      }
      inject[static_cast<std::size_t>(t + 1)].clear();
      inject[static_cast<std::size_t>(t + 1)].shrink_to_fit();
      const auto& a = inject[static_cast<std::size_t>(t)];
      for (std::int64_t x = first_active(Parity::Even, rt.lo, t); x <= rt.hi; x += 2) {
        BigInt& v = G[idx(x)];
        mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), 1);
        if (a[static_cast<std::size_t>(x - rt.lo)]) v += 1;
        mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits_cur);
      }
    }
    std::vector<BigInt> g(static_cast<std::size_t>(r0.hi - r0.lo + 1), BigInt(0));
    for (std::int64_t x = first_active(Parity::Even, r0.lo, 0); x <= r0.hi; x += 2) {
      g[static_cast<std::size_t>(x - r0.lo)] = std::move(G[idx(x)]);
    }
    return build_config(r0.lo, std::move(g), p_.initial_rotors, Parity::Even);
  }

  static Configuration shift(const Configuration& c, std::int64_t dx, Parity parity) {
    if (dx == 0 && parity == c.parity()) return c;
    return Configuration(c.offset() + dx, c.chip_cells(), c.rotor_cells(), parity, c.time());
  }

 private:
  const ParityPrescription& p_;
  std::int64_t t_top_;
  std::vector<Span> dom_;
};

Configuration empty_solution(const ParityPrescription& p) {
  std::vector<std::pair<std::int64_t, Rotor>> rotors(p.initial_rotors.begin(),
                                                     p.initial_rotors.end());
  return make_config({}, rotors, p.variant);
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables

void SpaceTimeTable::set_row(std::int64_t t, std::int64_t lo, std::int64_t hi, std::int8_t fill) {
  if (t < 0) throw std::invalid_argument("set_row: negative time");
  if (static_cast<std::int64_t>(rows.size()) <= t) rows.resize(static_cast<std::size_t>(t + 1));
  TableRow& row = rows[static_cast<std::size_t>(t)];
  row.lo = lo;
  row.hi = hi;
  row.cells.assign(lo > hi ? 0 : static_cast<std::size_t>(hi - lo + 1), fill);
}

void RotorPrescription::validate() const {
  for (std::int64_t t = 0; t <= t_hi(); ++t) {
    const TableRow& row = rows[static_cast<std::size_t>(t)];
    if (row.empty()) continue;
    if (row.cells.size() != static_cast<std::size_t>(row.hi - row.lo + 1)) {
      throw std::invalid_argument("rotor prescription row " + std::to_string(t) + " has the wrong size");
    }
    for (std::int64_t x = first_active(variant, row.lo, t); x <= row.hi; x += 2) {
      if (row.at(x) != 1 && row.at(x) != -1) {
        throw std::invalid_argument("rotor prescription leaves (" + std::to_string(x) + ", " +
                                    std::to_string(t) + ") unset");
      }
    }
    if (t > 0) {
      const TableRow& prev = rows[static_cast<std::size_t>(t - 1)];
      if (prev.empty() || row.lo < prev.lo || row.hi > prev.hi) {
        throw std::invalid_argument("rotor prescription rows must be nested; row " +
                                    std::to_string(t) + " leaves row " + std::to_string(t - 1));
      }
    }
  }
}

void ParityPrescription::validate() const {
  for (std::int64_t t = 0; t <= t_hi(); ++t) {
    const TableRow& row = rows[static_cast<std::size_t>(t)];
    if (row.empty()) continue;
    if (row.cells.size() != static_cast<std::size_t>(row.hi - row.lo + 1)) {
      throw std::invalid_argument("parity prescription row " + std::to_string(t) + " has the wrong size");
    }
    for (std::int64_t x = first_active(variant, row.lo, t); x <= row.hi; x += 2) {
      if (row.at(x) != 0 && row.at(x) != 1) {
        throw std::invalid_argument("parity prescription value at (" + std::to_string(x) + ", " +
                                    std::to_string(t) + ") is not 0 or 1");
      }
    }
  }
}

ParityPrescription induced_parities(const RotorPrescription& p) {
  p.validate();
  ParityPrescription out;
  out.variant = p.variant;
  for (std::int64_t t = 0; t + 2 <= p.t_hi(); ++t) {
    const TableRow& later = p.rows[static_cast<std::size_t>(t + 2)];
    out.set_row(t, later.lo, later.hi, 0);
    for (std::int64_t x = first_active(p.variant, later.lo, t); x <= later.hi; x += 2) {
      out.set(x, t, p.get(x, t) != p.get(x, t + 2) ? 1 : 0);
    }
  }
  for (std::int64_t t = 0; t <= std::min<std::int64_t>(1, p.t_hi()); ++t) {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    if (row.empty()) continue;
    for (std::int64_t x = first_active(p.variant, row.lo, t); x <= row.hi; x += 2) {
      out.initial_rotors[x] = p.get(x, t);
    }
  }
  return out;
}

RotorPrescription induced_rotors(const ParityPrescription& p) {
  p.validate();
  RotorPrescription out;
  out.variant = p.variant;
  for (std::int64_t t = 0; t <= p.t_hi(); ++t) {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    out.set_row(t, row.lo, row.hi, 0);
    if (row.empty()) continue;
    for (std::int64_t x = first_active(p.variant, row.lo, t); x <= row.hi; x += 2) {
      if (t <= 1) {
        out.set(x, t, p.initial_rotor(x));
        continue;
      }
      if (!p.defined(x, t - 2)) {
        throw std::invalid_argument("induced_rotors: parity rows must be nested");
      }
      const Rotor before = out.get(x, t - 2);
      out.set(x, t, p.get(x, t - 2) ? flipped(before) : before);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forcing

std::uint64_t forcing_memory_estimate(std::int64_t width, std::int64_t rows) {
  const auto w = static_cast<std::uint64_t>(std::max<std::int64_t>(width, 1));
  const auto n = static_cast<std::uint64_t>(std::max<std::int64_t>(rows, 1));
  // Four arrays of w numbers of up to n + 1 bits (chips, G, and the
  // verification machine), per-number overhead, and the injection table.
  return 4 * w * ((n + 64) / 8 + 32) + w * n;
}

Configuration parity_force(const ParityPrescription& p, const ForcingOptions& opts) {
  p.validate();
  const std::int64_t t_top = last_active_row(p);
  if (t_top < 0) {
    return empty_solution(p);
  }
  // Work on the even class; odd tables move one step left.
  const std::int64_t dx = p.variant == Parity::Odd ? -1 : 0;
  const ParityPrescription even = shifted(p, dx, Parity::Even);
  Solver solver(even, t_top);
  const std::vector<Span> dom = domains(even, t_top);
  const std::int64_t width = dom[0].hi - dom[0].lo + 1;
  require_budget(forcing_memory_estimate(width, t_top + 1),
                 "forcing " + std::to_string(t_top + 1) + " rows over " + std::to_string(width) +
                     " sites",
                 opts.memory_budget);

  ForcingMethod method = opts.method;
  if (method == ForcingMethod::Auto) {
    method = t_top + 1 <= kStagewiseMaxRows ? ForcingMethod::Stagewise
                                            : ForcingMethod::BackPropagation;
  }
  Configuration solved = method == ForcingMethod::Stagewise
                             ? solver.stagewise(opts.observer, -dx, p.variant)
                             : solver.back_propagation();
  Configuration out = Solver::shift(solved, -dx, p.variant);
  if (auto bad = check_parities(out, p)) {
    throw ForcingError("forced configuration failed verification: " + *bad);
  }
  return out;
}

Configuration arrow_force(const RotorPrescription& p, const ForcingOptions& opts) {
  const ParityPrescription induced = induced_parities(p);
  Configuration out = induced.rows.empty() ? empty_solution(induced) : parity_force(induced, opts);
  if (auto bad = check_rotors(out, p)) {
    throw ForcingError("forced configuration failed rotor verification: " + *bad);
  }
  return out;
}

namespace {

// Steps the game over the light-cone domains of `table`, calling visit(m, t)
// at every t = 0..t_top.
template <class Visit>
std::optional<std::string> simulate_over(const Configuration& c, const SpaceTimeTable& table,
                                         Visit visit) {
  const std::int64_t t_top = last_active_row(table);
  if (t_top < 0) return std::nullopt;
  const std::vector<Span> dom = domains(table, t_top);
  ProppMachine m(c, 0);
  for (std::int64_t t = 0; t <= t_top; ++t) {
    if (auto bad = visit(m, t)) return bad;
    if (t < t_top) {
      const Span& d = dom[static_cast<std::size_t>(t)];
      m.step_within(d.lo, d.hi);
    }
  }
  return std::nullopt;
}

std::string cell(std::int64_t x, std::int64_t t) {
  return "(" + std::to_string(x) + ", " + std::to_string(t) + ")";
}

}  // namespace

std::optional<std::string> check_parities(const Configuration& c, const ParityPrescription& p) {
  if (c.parity() != p.variant) return std::string("configuration class differs from the table");
  return simulate_over(c, p, [&](const ProppMachine& m, std::int64_t t) -> std::optional<std::string> {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    if (row.empty()) return std::nullopt;
    for (std::int64_t x = first_active(p.variant, row.lo, t); x <= row.hi; x += 2) {
      const int par = mpz_odd_p(m.chips(x).get_mpz_t()) ? 1 : 0;
      if (par != row.at(x)) return "parity mismatch at " + cell(x, t);
    }
    return std::nullopt;
  });
}

std::optional<std::string> check_rotors(const Configuration& c, const RotorPrescription& p) {
  if (c.parity() != p.variant) return std::string("configuration class differs from the table");
  return simulate_over(c, p, [&](const ProppMachine& m, std::int64_t t) -> std::optional<std::string> {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    if (row.empty()) return std::nullopt;
    for (std::int64_t x = first_active(p.variant, row.lo, t); x <= row.hi; x += 2) {
      if (m.rotor(x) != p.get(x, t)) return "rotor mismatch at " + cell(x, t);
    }
    return std::nullopt;
  });
}

}  // namespace proppwalk

#include <cmath>
#include <sstream>

#include "proppwalk/forcing.hpp"

namespace proppwalk {

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t ceil_sqrt(std::int64_t n) {
  const std::int64_t r = isqrt(n);
  return r * r == n ? r : r + 1;
}

// Parities over the backward light cone of [x_lo, x_hi] x {t_end}, all even.
ParityPrescription cone_table(Parity variant, std::int64_t x_lo, std::int64_t x_hi,
                              std::int64_t t_end) {
  ParityPrescription p;
  p.variant = variant;
  for (std::int64_t t = 0; t < t_end; ++t) {
    p.set_row(t, x_lo - (t_end - t), x_hi + (t_end - t), 0);
  }
  return p;
}

void mark_splits(ParityPrescription& p, const std::vector<PlannedSplit>& splits) {
  for (const auto& s : splits) {
    if (!p.defined(s.x, s.t)) {
      throw std::logic_error("planned split outside the cone table");
    }
    p.set(s.x, s.t, 1);
    p.initial_rotors[s.x] = s.rotor;
  }
}

// Rotors on row 0 of the table: `right_of` and beyond point left, `left_of`
// and below point right; sites in between keep the default.
void point_inward(ParityPrescription& p, std::int64_t left_of, std::int64_t right_of) {
  const TableRow& row = p.rows.front();
  for (std::int64_t x = row.lo; x <= row.hi; ++x) {
    if (x >= right_of) {
      p.initial_rotors[x] = Rotor::Left;
    } else if (x <= left_of) {
      p.initial_rotors[x] = Rotor::Right;
    }
  }
}

std::string provenance(const std::string& name, const std::string& params,
                       const std::string& seed = "none") {
  return "generator: " + name + " params=" + params + " seed=" + seed;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Dyadic split_sum(const std::vector<PlannedSplit>& splits, const SpaceInterval& X,
                 const TimeInterval& S) {
  // sum_{x in X} inf(y - x, u) telescopes, since
  // inf(z, u) = (H(z + 1, u - 1) - H(z - 1, u - 1)) / 2.
  Dyadic total;
  for (const auto& s : splits) {
    const std::int64_t zl = s.x - X.hi;
    const std::int64_t zh = s.x - X.lo;
    Dyadic acc;
    for (std::int64_t t = S.t0; t <= S.last(); ++t) {
      const std::int64_t u = t - s.t;
      if (u <= 0) continue;
      acc += H(zh + 1, u - 1) + H(zh, u - 1) - H(zl, u - 1) - H(zl - 1, u - 1);
    }
    acc = acc.halved();
    total += s.rotor == Rotor::Right ? acc : -acc;
  }
  return total;
}

VertexLowerBound gen_vertex_lb(std::int64_t y, const ForcingOptions& opts) {
  if (y < 2 || y % 2 != 0) {
    throw std::invalid_argument("gen_vertex_lb: y must be even and >= 2");
  }
  VertexLowerBound out;
  out.t0 = t_max(y);
  for (std::int64_t x = 1; x <= y; ++x) {
    const std::int64_t s = out.t0 - t_max(x);
    out.splits.push_back({x, s, Rotor::Left});
    out.splits.push_back({-x, s, Rotor::Right});
  }
  ParityPrescription p = cone_table(Parity::Even, 0, 0, out.t0);
  point_inward(p, 0, 1);
  mark_splits(p, out.splits);
  out.config = parity_force(p, opts);
  out.predicted = split_sum(out.splits, SpaceInterval(0, 0), TimeInterval(out.t0, 1));
  out.provenance = provenance("vertex_lb", "y=" + std::to_string(y));
  return out;
}

SpaceLowerBound gen_space_lb(std::int64_t L, const ForcingOptions& opts) {
  if (L < 1 || L % 2 == 0) {
    throw std::invalid_argument("gen_space_lb: L must be odd and positive");
  }
  SpaceLowerBound out;
  out.X = SpaceInterval(-L, -1);
  out.t = L * L;
  for (std::int64_t y = 2; y <= L; y += 2) {
    out.splits.push_back({y, out.t - y * y - 1, Rotor::Left});
  }
  ParityPrescription p = cone_table(Parity::Even, out.X.lo, out.X.hi, out.t);
  point_inward(p, -L - 1, 0);
  mark_splits(p, out.splits);
  out.config = parity_force(p, opts);
  out.predicted = split_sum(out.splits, out.X, TimeInterval(out.t, 1));
  out.provenance = provenance("space_lb", "L=" + std::to_string(L));
  return out;
}

namespace {

// Splits at x in [r, 2r] and time 4T - x^2 with T = r^2.
std::vector<PlannedSplit> time_splits(std::int64_t r) {
  std::vector<PlannedSplit> splits;
  for (std::int64_t x = r; x <= 2 * r; ++x) {
    splits.push_back({x, 4 * r * r - x * x, Rotor::Left});
  }
  return splits;
}

}  // namespace

TimeLowerBound gen_time_lb(std::int64_t T, const ForcingOptions& opts) {
  if (T < 1) {
    throw std::invalid_argument("gen_time_lb: T must be positive");
  }
  TimeLowerBound out;
  const std::int64_t r = isqrt(T);
  out.T = r * r;
  out.rounded = out.T != T;
  out.x = 0;
  out.S = TimeInterval(4 * out.T + 1, out.T);
  out.splits = time_splits(r);
  ParityPrescription p = cone_table(Parity::Even, 0, 0, out.S.last());
  point_inward(p, 0, 1);
  mark_splits(p, out.splits);
  out.config = parity_force(p, opts);
  out.predicted = split_sum(out.splits, SpaceInterval(0, 0), out.S);
  out.provenance = provenance("time_lb", "T=" + std::to_string(out.T));
  return out;
}

SpaceTimeLowerBound gen_spacetime_lb(std::int64_t L, std::int64_t T, const ForcingOptions& opts) {
  if (L < 1 || T < 1) {
    throw std::invalid_argument("gen_spacetime_lb: L and T must be positive");
  }
  SpaceTimeLowerBound out;
  out.X = SpaceInterval(-L + 1, 0);
  out.wide = L * L >= 4 * T;
  Parity variant = Parity::Even;
  if (out.wide) {
    out.T = T;
    out.S = TimeInterval(L * L, T);
    for (std::int64_t x = ceil_sqrt(T); x <= L; ++x) {
      out.splits.push_back({x, L * L - x * x, Rotor::Left});
    }
    variant = L % 2 ? Parity::Odd : Parity::Even;
  } else {
    const std::int64_t r = isqrt(T);
    out.T = r * r;
    out.S = TimeInterval(4 * out.T + 1, out.T);
    out.splits = time_splits(r);
  }
  ParityPrescription p = cone_table(variant, out.X.lo, out.X.hi, out.S.last());
  point_inward(p, -L, 1);
  mark_splits(p, out.splits);
  out.config = parity_force(p, opts);
  out.predicted = split_sum(out.splits, out.X, out.S);
  out.provenance =
      provenance("spacetime_lb", "L=" + std::to_string(L) + ",T=" + std::to_string(out.T));
  return out;
}

// ---------------------------------------------------------------------------

RandomRotorPlan::RandomRotorPlan(std::uint64_t seed, std::int64_t t) : seed_(seed), t_(t) {
  if (t < 1) throw std::invalid_argument("RandomRotorPlan: t must be positive");
}

int RandomRotorPlan::r(std::int64_t a, std::int64_t b) const {
  const std::uint64_t z = splitmix64(splitmix64(splitmix64(seed_) ^ static_cast<std::uint64_t>(a)) ^
                                     static_cast<std::uint64_t>(b));
  return (z >> 63) ? 1 : -1;
}

std::optional<std::pair<std::int64_t, std::int64_t>> RandomRotorPlan::block(std::int64_t x,
                                                                            std::int64_t u) const {
  const std::int64_t tau = t_ - u;
  if ((x & 1) || tau <= 4) return std::nullopt;
  std::int64_t b = 1;
  while (tau > (std::int64_t{1} << (2 * (b + 1)))) ++b;
  return std::make_pair((x - 1) >> b, b);
}

Rotor RandomRotorPlan::arrow(std::int64_t x, std::int64_t u) const {
  const auto ab = block(x, u);
  return ab ? rotor_from_sign(r(ab->first, ab->second)) : Rotor::Right;
}

RotorPrescription RandomRotorPlan::prescription() const {
  RotorPrescription p;
  p.variant = Parity::Even;
  for (std::int64_t u = 0; u <= t_ + 1; ++u) {
    const std::int64_t w = 2 * t_ + 1 - u;
    p.set_row(u, -w, w, 0);
    for (std::int64_t x = p.active(-w, u) ? -w : -w + 1; x <= w; x += 2) {
      p.set(x, u, arrow(x, u));
    }
  }
  return p;
}

L2RandomConstruction gen_l2_random(std::int64_t t, std::uint64_t seed, const ForcingOptions& opts) {
  RandomRotorPlan plan(seed, t);
  Configuration c = arrow_force(plan.prescription(), opts);
  return {std::move(c), plan,
          provenance("l2_random", "t=" + std::to_string(t), std::to_string(seed))};
}

}  // namespace proppwalk

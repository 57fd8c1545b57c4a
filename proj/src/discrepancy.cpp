#include "proppwalk/discrepancy.hpp"

#include <algorithm>
#include <sstream>

namespace proppwalk {

namespace {

std::int64_t steps_to(const Configuration& c, std::int64_t t, const char* who) {
  if (t < c.time()) {
    throw std::invalid_argument(std::string(who) + ": time precedes the configuration");
  }
  return t - c.time();
}

}  // namespace

Dyadic expected(const Configuration& c, std::int64_t x, std::int64_t t) {
  const std::int64_t n = steps_to(c, t, "expected");
  BigInt acc = 0;
  for (std::int64_t z = std::max(c.lo(), x - n); z <= std::min(c.hi(), x + n); ++z) {
    const BigInt& f = c.chips(z);
    if (sgn(f) == 0 || !same_parity(x - z, n)) continue;
    acc += f * binom(static_cast<std::uint64_t>(n), (n + x - z) / 2);
  }
  return Dyadic(acc, static_cast<std::uint64_t>(n));
}

Dyadic mixed_expected(const Configuration& c, std::int64_t x, std::int64_t t1, std::int64_t t2) {
  if (t1 > t2) {
    throw std::invalid_argument("mixed_expected: t1 > t2");
  }
  steps_to(c, t1, "mixed_expected");
  const GameTrace tr = propp_run(c, t1 - c.time());
  return expected(tr.final, x, t2);
}

Dyadic disc_vertex(const Configuration& c, std::int64_t x, std::int64_t t) {
  const std::int64_t n = steps_to(c, t, "disc_vertex");
  const GameTrace tr = propp_run(c, n);
  return Dyadic(tr.final.chips(x)) - expected(c, x, t);
}

// ---------------------------------------------------------------------------

SplitExpansion::SplitExpansion(const Configuration& initial, OddSplitLog log)
    : initial_(initial), log_(std::move(log)) {
  log_.validate([this](std::int64_t y) { return initial_.rotor(y); });
  if (!log_.empty()) {
    span_lo_ = log_.by_position().begin()->first;
    span_hi_ = log_.by_position().rbegin()->first;
  }
}

Dyadic SplitExpansion::at(std::int64_t x, std::int64_t t) {
  if (log_.empty()) {
    return {};
  }
  const std::int64_t z_need = std::max(std::llabs(span_lo_ - x), std::llabs(span_hi_ - x));
  const std::int64_t u_need = t - initial_.time();
  if (!table_ || table_->z_max() < z_need || table_->u_max() < u_need) {
    const std::int64_t z_max = table_ ? std::max(z_need, table_->z_max()) : z_need;
    const std::int64_t u_max = table_ ? std::max(u_need, table_->u_max()) : u_need;
    table_.emplace(z_max, std::max<std::int64_t>(u_max, 0));
  }
  // inf(z, u) = N(z, u) / 2^u; bring every term to denominator 2^t.
  BigInt acc = 0;
  BigInt term;
  for (const auto& [y, seq] : log_.by_position()) {
    int s = sign(initial_.rotor(y));
    for (const auto& e : seq) {
      if (e.time >= t) break;
      const std::int64_t u = t - e.time;
      const BigInt& num = table_->numerator(y - x, u);
      if (sgn(num) != 0) {
        mpz_mul_2exp(term.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(t - u));
        if (s > 0) {
          acc += term;
        } else {
          acc -= term;
        }
      }
      s = -s;
    }
  }
  return Dyadic(acc, static_cast<std::uint64_t>(t));
}

Dyadic disc_via_splits(const Configuration& initial, const OddSplitLog& log, std::int64_t x,
                       std::int64_t t) {
  SplitExpansion ex(initial, log);
  return ex.at(x, t);
}

// ---------------------------------------------------------------------------

CoupledRun::CoupledRun(const Configuration& c, std::int64_t horizon, std::optional<Focus> focus)
    : propp_(c, horizon), linear_(c, horizon), focus_(focus) {}

void CoupledRun::step() {
  if (focus_) {
    const std::int64_t slack = focus_->t_end - propp_.time();
    if (slack <= 0) {
      throw std::logic_error("CoupledRun: stepping past the focus time");
    }
    // Sources at time s influence [x_lo, x_hi] at t_end only within distance
    // t_end - s.
    const std::int64_t lo = focus_->x_lo - slack;
    const std::int64_t hi = focus_->x_hi + slack;
    propp_.step_within(lo, hi);
    linear_.step_within(lo, hi);
  } else {
    propp_.step();
    linear_.step();
  }
}

void CoupledRun::run_to(std::int64_t t) {
  while (propp_.time() < t) {
    step();
  }
}

BigInt CoupledRun::disc_scaled(std::int64_t x) const {
  BigInt out;
  mpz_mul_2exp(out.get_mpz_t(), propp_.chips(x).get_mpz_t(),
               static_cast<mp_bitcnt_t>(linear_.steps()));
  out -= linear_.scaled(x);
  return out;
}

Dyadic CoupledRun::disc(std::int64_t x) const {
  return Dyadic(disc_scaled(x), static_cast<std::uint64_t>(linear_.steps()));
}

Dyadic CoupledRun::disc_sum(std::int64_t lo, std::int64_t hi) const {
  BigInt acc = 0;
  BigInt f = 0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    f += propp_.chips(x);
    acc -= linear_.scaled(x);
  }
  mpz_mul_2exp(f.get_mpz_t(), f.get_mpz_t(), static_cast<mp_bitcnt_t>(linear_.steps()));
  acc += f;
  return Dyadic(acc, static_cast<std::uint64_t>(linear_.steps()));
}

Dyadic disc_space(const Configuration& c, const SpaceInterval& X, std::int64_t t) {
  steps_to(c, t, "disc_space");
  CoupledRun run(c, t - c.time(), CoupledRun::Focus{X.lo, X.hi, t});
  run.run_to(t);
  return run.disc_sum(X.lo, X.hi);
}

Dyadic disc_spacetime(const Configuration& c, const SpaceInterval& X, const TimeInterval& S) {
  steps_to(c, S.t0, "disc_spacetime");
  const std::int64_t t_end = S.last();
  CoupledRun run(c, t_end - c.time(), CoupledRun::Focus{X.lo, X.hi, t_end});
  Dyadic total;
  while (true) {
    if (S.contains(run.time())) {
      total += run.disc_sum(X.lo, X.hi);
    }
    if (run.time() >= t_end) break;
    run.step();
  }
  return total;
}

Dyadic disc_time(const Configuration& c, std::int64_t x, const TimeInterval& S) {
  return disc_spacetime(c, SpaceInterval(x, x), S);
}

Rational l2_average(const Configuration& c, std::int64_t L, std::int64_t M, std::int64_t t,
                    std::int64_t base) {
  if (L < 1 || M < 1) {
    throw std::invalid_argument("l2_average: L and M must be positive");
  }
  steps_to(c, t, "l2_average");
  // Shifted intervals X + k cover [base + 1, base + L + M - 1].
  const std::int64_t lo = base + 1;
  const std::int64_t hi = base + L + M - 1;
  CoupledRun run(c, t - c.time(), CoupledRun::Focus{lo, hi, t});
  run.run_to(t);
  std::vector<BigInt> d(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t x = lo; x <= hi; ++x) {
    d[static_cast<std::size_t>(x - lo)] = run.disc_scaled(x);
  }
  BigInt window = 0;
  for (std::int64_t i = 0; i < L; ++i) {
    window += d[static_cast<std::size_t>(i)];
  }
  BigInt squares = window * window;
  for (std::int64_t k = 2; k <= M; ++k) {
    window += d[static_cast<std::size_t>(k + L - 2)];
    window -= d[static_cast<std::size_t>(k - 2)];
    squares += window * window;
  }
  BigInt den = M;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * run.steps()));
  Rational out(squares, den);
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------

const char* kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Vertex: return "vertex";
    case QueryKind::Space: return "space";
    case QueryKind::Time: return "time";
    case QueryKind::SpaceTime: return "box";
    case QueryKind::L2: return "l2";
  }
  return "?";
}

DiscrepancyReport report_vertex(const Configuration& c, std::int64_t x, std::int64_t t) {
  DiscrepancyReport r;
  r.kind = QueryKind::Vertex;
  r.x_lo = r.x_hi = x;
  r.t0 = t;
  r.t_len = 1;
  r.value = disc_space(c, SpaceInterval(x, x), t);
  r.horizon = t;
  return r;
}

DiscrepancyReport report_space(const Configuration& c, const SpaceInterval& X, std::int64_t t) {
  DiscrepancyReport r;
  r.kind = QueryKind::Space;
  r.x_lo = X.lo;
  r.x_hi = X.hi;
  r.t0 = t;
  r.t_len = 1;
  r.value = disc_space(c, X, t);
  r.horizon = t;
  return r;
}

DiscrepancyReport report_time(const Configuration& c, std::int64_t x, const TimeInterval& S) {
  DiscrepancyReport r;
  r.kind = QueryKind::Time;
  r.x_lo = r.x_hi = x;
  r.t0 = S.t0;
  r.t_len = S.length;
  r.value = disc_time(c, x, S);
  r.horizon = S.last();
  return r;
}

DiscrepancyReport report_box(const Configuration& c, const SpaceInterval& X,
                             const TimeInterval& S) {
  DiscrepancyReport r;
  r.kind = QueryKind::SpaceTime;
  r.x_lo = X.lo;
  r.x_hi = X.hi;
  r.t0 = S.t0;
  r.t_len = S.length;
  r.value = disc_spacetime(c, X, S);
  r.horizon = S.last();
  return r;
}

DiscrepancyReport report_l2(const Configuration& c, std::int64_t L, std::int64_t M, std::int64_t t,
                            std::int64_t base) {
  if (M < 1 || (M & (M - 1)) != 0) {
    throw std::invalid_argument("report_l2: M must be a power of two");
  }
  DiscrepancyReport r;
  r.kind = QueryKind::L2;
  r.x_lo = base;
  r.x_hi = base + L - 1;
  r.t0 = t;
  r.t_len = M;
  r.value = *to_dyadic(l2_average(c, L, M, t, base));
  r.horizon = t;
  return r;
}

std::string csv_header() { return "kind,x_lo,x_hi,t0,t_len,exact_num,exact_den_pow2,decimal"; }

std::string csv_row(const DiscrepancyReport& r, unsigned digits) {
  std::ostringstream os;
  os << kind_name(r.kind) << ',' << r.x_lo << ',' << r.x_hi << ',' << r.t0 << ',' << r.t_len << ','
     << r.value.mantissa().get_str() << ',' << r.value.exponent() << ',' << r.decimal(digits);
  return os.str();
}

}  // namespace proppwalk

// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of
// failures.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "proppwalk/cli.hpp"
#include "proppwalk/discrepancy.hpp"
#include "proppwalk/forcing.hpp"
#include "proppwalk/numerics.hpp"

using namespace proppwalk;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int n, const char* what, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs > limit_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s limit";
  }
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(1);
  line << "criterion " << n << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << what << " | "
       << o.detail << " | " << secs << " s";
  std::cout << line.str() << std::endl;
}

std::string num(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Computed once and shared by criteria 1 and 2.
std::optional<C1Bracket> c1_full;

}  // namespace

int main() {
  criterion(1, "c1 bracket at ycut 1e5 has width < 1e-3 and rounds to 2.29", 120, [] {
    c1_full = c1_bracket(100000);
    const double width = c1_full->width().get_d();
    std::ostringstream out, err;
    const int code = run_cli({"c1", "--ycut", "100000"}, out, err);
    const bool cli_ok = code == 0 && out.str().find("\nc1 2.29\n") != std::string::npos;
    const bool ok = width < 1e-3 && to_decimal(c1_full->lower, 2) == "2.29" &&
                    to_decimal(c1_full->upper, 2) == "2.29" && cli_ok;
    return Outcome{ok, "[" + to_decimal_directed(c1_full->lower, 8, false) + ", " +
                           to_decimal_directed(c1_full->upper, 8, true) + "] width " +
                           num(width, 3) + (cli_ok ? ", cli prints c1 2.29" : ", cli output wrong")};
  });

  criterion(2, "|disc| <= c1 upper on 1000 random games, horizons <= 100", 120, [] {
    if (!c1_full) return Outcome{false, "no c1 bracket"};
    const Rational upper = c1_full->upper;
    std::mt19937_64 rng(1001);
    long checked = 0, violations = 0;
    Dyadic worst;
    for (int game = 0; game < 1000; ++game) {
      const Configuration c = oracle::random_config(rng, 30, 15);
      const std::int64_t horizon = 1 + static_cast<std::int64_t>(rng() % 100);
      CoupledRun run(c, horizon);
      while (true) {
        // |d| <= upper * 2^s  <=>  |d| <= floor(upper * 2^s) for integer d.
        Rational scaled = upper;
        mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), static_cast<mp_bitcnt_t>(run.steps()));
        BigInt cap;
        mpz_fdiv_q(cap.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        for (std::int64_t x = c.lo() - run.steps(); x <= c.hi() + run.steps(); ++x) {
          BigInt d = abs(run.disc_scaled(x));
          ++checked;
          if (d > cap) ++violations;
          const Dyadic dv(d, static_cast<std::uint64_t>(run.steps()));
          if (dv > worst) worst = dv;
        }
        if (run.time() >= horizon) break;
        run.step();
      }
    }
    return Outcome{violations == 0, std::to_string(checked) + " (x,t) checked, " +
                                        std::to_string(violations) + " violations, max |disc| " +
                                        worst.to_decimal(6)};
  });

  criterion(3, "split expansion equals disc_vertex exactly on 100 games", 60, [] {
    std::mt19937_64 rng(1003);
    long checked = 0, mismatches = 0;
    for (int game = 0; game < 100; ++game) {
      const Configuration c = oracle::random_config(rng, 30, 15);
      const std::int64_t horizon = 1 + static_cast<std::int64_t>(rng() % 40);
      const GameTrace tr = propp_run(c, horizon);
      SplitExpansion ex(c, tr.log);
      for (std::int64_t t = 0; t <= horizon; ++t) {
        for (std::int64_t x = c.lo() - t; x <= c.hi() + t; ++x) {
          ++checked;
          if (ex.at(x, t) != disc_vertex(c, x, t)) ++mismatches;
        }
      }
    }
    return Outcome{mismatches == 0, std::to_string(checked) + " (x,t) compared, " +
                                        std::to_string(mismatches) + " mismatches"};
  });

  criterion(4, "telescoping sum of mixed expectations equals disc_vertex on 20 games", 60, [] {
    std::mt19937_64 rng(1004);
    long checked = 0, mismatches = 0;
    for (int game = 0; game < 20; ++game) {
      const Configuration c = oracle::random_config(rng, 30, 15);
      const std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 40);
      for (std::int64_t x = c.lo() - t; x <= c.hi() + t; ++x) {
        Dyadic sum;
        for (std::int64_t s = 0; s < t; ++s) {
          sum += mixed_expected(c, x, s + 1, t) - mixed_expected(c, x, s, t);
        }
        ++checked;
        if (sum != disc_vertex(c, x, t)) ++mismatches;
      }
    }
    return Outcome{mismatches == 0, std::to_string(checked) + " sites compared, " +
                                        std::to_string(mismatches) + " mismatches"};
  });

  criterion(5, "arrow forcing realizes 20 random rotor tables on |x| <= 20, t <= 20", 120, [] {
    std::mt19937_64 rng(1005);
    long cells = 0, wrong = 0;
    for (int trial = 0; trial < 20; ++trial) {
      RotorPrescription p;
      p.variant = trial % 2 ? Parity::Odd : Parity::Even;
      for (std::int64_t t = 0; t <= 20; ++t) {
        p.set_row(t, -20, 20, 0);
        for (std::int64_t x = -20; x <= 20; ++x)
          if (p.active(x, t)) p.set(x, t, rng() % 2 ? Rotor::Right : Rotor::Left);
      }
      const Configuration c = arrow_force(p);
      const oracle::PileRun run(c, 20);
      for (std::int64_t t = 0; t <= 20; ++t)
        for (std::int64_t x = -20; x <= 20; ++x)
          if (p.active(x, t)) {
            ++cells;
            if (run.rotor(x, t) != sign(p.get(x, t))) ++wrong;
          }
    }
    return Outcome{wrong == 0, std::to_string(cells) + " prescribed cells, " +
                                   std::to_string(wrong) + " wrong (independent simulation)"};
  });

  criterion(6, "vertex construction gives 2 sum |inf(x, t_max(x))| exactly, 3/2 at y = 2", 60, [] {
    bool ok = true;
    std::string detail;
    for (std::int64_t y : {2, 4, 6, 8, 10}) {
      const VertexLowerBound lb = gen_vertex_lb(y);
      Dyadic target;
      for (std::int64_t x = 1; x <= y; ++x) target += inf(x, t_max(x)).abs() * Dyadic(2);
      const Dyadic got = disc_vertex(lb.config, 0, t_max(y));
      ok = ok && got == target;
      if (y == 2) ok = ok && got == Dyadic::from_parts(3, 1);
      detail += (detail.empty() ? "" : ", ") + std::string("y=") + std::to_string(y) + ": " +
                got.to_string() + (got == target ? "" : " != " + target.to_string());
    }
    return Outcome{ok, detail};
  });

  criterion(7, "influence partial sums at 400 x^2 lie in (0.95, 1], monotone, never above 1", 60, [] {
    bool ok = true;
    Dyadic smallest(1);
    for (std::int64_t x = 1; x <= 10; ++x) {
      Dyadic prev;
      for (std::int64_t k : {1, 4, 16, 64, 100, 200, 400}) {
        const Dyadic s = inf_time_partial_sum(x, k * x * x);
        ok = ok && prev <= s && s <= Dyadic(1);
        prev = s;
      }
      ok = ok && compare(prev, Rational(95, 100)) > 0;
      if (prev < smallest) smallest = prev;
    }
    return Outcome{ok, "smallest value at 400 x^2: " + smallest.to_decimal(6)};
  });

  criterion(8, "scaling trends for the time, space and l2 constructions", 300, [] {
    bool ok = true;
    std::string detail;
    auto band = [](const std::vector<double>& v) {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return *hi <= 2 * *lo && *lo > 0;
    };
    std::vector<double> a;
    for (std::int64_t T : {64, 256, 1024}) {
      const TimeLowerBound lb = gen_time_lb(T);
      const Dyadic d = disc_time(lb.config, 0, lb.S);
      ok = ok && d == lb.predicted;
      a.push_back(std::fabs(d.to_double()) / std::sqrt(static_cast<double>(T)));
    }
    const bool a_ok = band(a);
    detail += "(a) |disc|/sqrt T = " + num(a[0], 4) + ", " + num(a[1], 4) + ", " + num(a[2], 4);
    std::vector<double> b;
    for (std::int64_t L : {7, 15, 31}) {
      const SpaceLowerBound lb = gen_space_lb(L);
      const Dyadic d = disc_space(lb.config, lb.X, lb.t);
      ok = ok && d == lb.predicted;
      b.push_back(std::fabs(d.to_double()) / std::log(static_cast<double>(L)));
    }
    const bool b_ok = band(b);
    detail += "; (b) |disc|/ln L = " + num(b[0], 4) + ", " + num(b[1], 4) + ", " + num(b[2], 4);
    const L2RandomConstruction g = gen_l2_random(256, 1);
    std::vector<Rational> c;
    for (std::int64_t L : {8, 16, 32}) c.push_back(l2_average(g.config, L, 128, 256, -(L + 128) / 2));
    const bool c_ok = c[0] < c[1] && c[1] < c[2];
    detail += "; (c) l2 (seed 1, t 256, M 128) = " + num(c[0].get_d(), 4) + ", " +
              num(c[1].get_d(), 4) + ", " + num(c[2].get_d(), 4);
    if (!ok) detail += "; simulated value differs from the split sum";
    return Outcome{ok && a_ok && b_ok && c_ok, detail};
  });

  criterion(9, "unimodality and argmax of H and |inf| for 1..40, sum of H is 1 for t <= 200", 60, [] {
    bool ok = true;
    std::string bad;
    for (std::int64_t x = 1; x <= 40; ++x) {
      std::vector<Dyadic> h, f;
      std::vector<std::int64_t> ts;
      for (std::int64_t t = x; t <= 3 * x * x + 20; t += 2) {
        ts.push_back(t);
        h.push_back(H(x, t));
        f.push_back(inf(x, t).abs());
      }
      if (!is_unimodal<Dyadic>(h) || !is_unimodal<Dyadic>(f)) {
        ok = false;
        bad += " unimodal@" + std::to_string(x);
      }
      for (std::size_t i : argmax_all<Dyadic>(h)) {
        if (ts[i] != x * x && ts[i] != x * x - 2) {
          ok = false;
          bad += " H-argmax@" + std::to_string(x);
        }
      }
      const auto am = argmax_all<Dyadic>(f);
      if (am.empty() || ts[am.back()] != t_max(x)) {
        ok = false;
        bad += " inf-argmax@" + std::to_string(x);
      }
    }
    for (std::int64_t t = 0; t <= 200; ++t) {
      Dyadic sum;
      for (std::int64_t x = -t; x <= t; ++x) sum += H(x, t);
      if (sum != Dyadic(1)) {
        ok = false;
        bad += " mass@" + std::to_string(t);
      }
    }
    return Outcome{ok, ok ? "x, y in 1..40 and t in 0..200 all hold" : "failed:" + bad};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures;
}

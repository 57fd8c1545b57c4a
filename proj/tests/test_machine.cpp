#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "proppwalk/machine.hpp"

using namespace proppwalk;

namespace {

Configuration single(std::int64_t x, long n, Rotor r = Rotor::Right) {
  return make_config({{x, BigInt(n)}}, {{x, r}}, (x & 1) ? Parity::Odd : Parity::Even);
}

}  // namespace

TEST_CASE("make_config") {
  const Configuration c = make_config({{0, BigInt(2)}}, {}, Parity::Even);
  CHECK(c.chips(0) == 2);
  CHECK(c.lo() <= 0);
  CHECK(c.hi() >= 0);
  CHECK(c.rotor(5) == Rotor::Right);

  BigInt huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 2, 60);
  const Configuration big = make_config({{-4, huge}}, {{-4, Rotor::Left}}, Parity::Even);
  CHECK(big.chips(-4) == huge);
  CHECK(big.rotor(-4) == Rotor::Left);

  try {
    make_config({{0, BigInt(1)}, {1, BigInt(1)}}, {}, Parity::Even);
    FAIL("mixed parity accepted");
  } catch (const ConfigError& e) {
    CHECK(e.positions() == std::vector<std::int64_t>{1});
  }
  CHECK_THROWS_AS(make_config({{2, BigInt(-1)}}, {}, Parity::Even), ConfigError);
  CHECK_THROWS_AS(make_config({{2, BigInt(1)}}, {}, Parity::Odd), ConfigError);
  CHECK_NOTHROW(make_config({{3, BigInt(1)}}, {{2, Rotor::Left}}, Parity::Odd));
}

TEST_CASE("propp_step examples") {
  {
    auto [next, events] = propp_step(single(0, 2));
    CHECK(next.chips(1) == 1);
    CHECK(next.chips(-1) == 1);
    CHECK(next.rotor(0) == Rotor::Right);
    CHECK(events.empty());
    CHECK(next.time() == 1);
  }
  {
    auto [next, events] = propp_step(single(0, 1));
    CHECK(next.chips(1) == 1);
    CHECK(next.chips(-1) == 0);
    CHECK(next.rotor(0) == Rotor::Left);
    REQUIRE(events.size() == 1);
    CHECK(events[0] == OddSplitEvent{0, 0, Rotor::Right});
  }
  {
    auto [next, events] = propp_step(single(0, 3));
    CHECK(next.chips(1) == 2);
    CHECK(next.chips(-1) == 1);
    CHECK(next.rotor(0) == Rotor::Left);
    CHECK(events.size() == 1);
  }
  {
    const Configuration c = single(4, 5);
    auto [next, events] = propp_step(c);
    CHECK(next.lo() == c.lo() - 1);
    CHECK(next.hi() == c.hi() + 1);
  }
}

TEST_CASE("propp_run small traces") {
  const Configuration c = single(0, 1);
  const GameTrace t0 = propp_run(c, 0);
  CHECK(t0.final == c);
  CHECK(t0.log.empty());

  // One chip, rotor right: goes to 1 (rotor at 0 flips), then from 1 goes
  // right again to 2 since rotor(1) is right.
  const GameTrace t2 = propp_run(c, 2);
  CHECK(t2.final.chips(2) == 1);
  CHECK(t2.final.total_chips() == 1);
  CHECK(t2.final.rotor(0) == Rotor::Left);
  CHECK(t2.final.rotor(1) == Rotor::Left);
  CHECK(t2.log.size() == 2);

  const Configuration c2 = make_config({{0, BigInt(1)}}, {{0, Rotor::Right}, {1, Rotor::Left}},
                                       Parity::Even);
  CHECK(propp_run(c2, 2).final.chips(0) == 1);
}

TEST_CASE("propp_run agrees with the chip-by-chip oracle") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 150; ++trial) {
    const Configuration c = oracle::random_config(rng, 30, 15);
    const int horizon = 1 + static_cast<int>(rng() % 40);
    oracle::State s = oracle::from_config(c);
    ProppMachine m(c, horizon);
    OddSplitLog log;
    for (int t = 0; t < horizon; ++t) {
      m.step(&log);
      oracle::chipwise_step(s);
      for (std::int64_t x = -60; x <= 60; ++x) {
        const long want = s.chips.count(x) ? s.chips.at(x) : 0;
        REQUIRE(m.chips(x) == want);
        const int r = s.rotor.count(x) ? s.rotor.at(x) : 1;
        REQUIRE(sign(m.rotor(x)) == r);
      }
    }
    const auto events = log.chronological();
    REQUIRE(events.size() == s.splits.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
      auto [x, t, r] = s.splits[i];
      CHECK(events[i] == OddSplitEvent{x, t, rotor_from_sign(r)});
    }
  }
}

TEST_CASE("machine invariants on random games") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Configuration c = oracle::random_config(rng, 30, 15);
    ProppMachine m(c, 50);
    Configuration prev = c;
    for (int t = 0; t < 50; ++t) {
      m.step();
      const Configuration cur = m.snapshot();
      CHECK(cur.total_chips() == c.total_chips());
      // Rotors flip exactly where the pile was odd.
      for (std::int64_t x = prev.lo(); x <= prev.hi(); ++x) {
        const bool odd = mpz_odd_p(prev.chips(x).get_mpz_t()) != 0;
        CHECK((cur.rotor(x) != prev.rotor(x)) == odd);
      }
      CHECK(cur.occupied_parity() != prev.occupied_parity());
      // Chips never touch the pre-expanded window edge.
      CHECK(sgn(cur.chips(m.lo())) == 0);
      CHECK(sgn(cur.chips(m.hi())) == 0);
      prev = cur;
    }
    // Determinism.
    const GameTrace a = propp_run(c, 50);
    const GameTrace b = propp_run(c, 50);
    CHECK(a.final == b.final);
    CHECK(a.log == b.log);
    CHECK(a.final == prev);
    a.log.validate([&](std::int64_t x) { return c.rotor(x); });
  }
}

TEST_CASE("piles of 2^T split evenly for T steps") {
  const int T = 12;
  BigInt pile;
  mpz_ui_pow_ui(pile.get_mpz_t(), 2, T);
  const Configuration c = make_config({{0, pile}}, {{0, Rotor::Left}}, Parity::Even);
  const GameTrace tr = propp_run(c, T);
  CHECK(tr.log.empty());
  const auto lin = linear_run(c, T);
  for (auto& [x, e] : lin) CHECK(Dyadic(tr.final.chips(x)) == e);
  // Doubling every pile doubles every count while rotors stay put.
  BigInt pile2 = 2 * pile;
  const GameTrace tr2 = propp_run(make_config({{0, pile2}}, {{0, Rotor::Left}}, Parity::Even), T);
  for (std::int64_t x = -T; x <= T; ++x) CHECK(tr2.final.chips(x) == 2 * tr.final.chips(x));
  CHECK(propp_run(c, T + 1).log.size() > 0);
}

TEST_CASE("linear_run") {
  const auto e = linear_run(single(0, 1), 2);
  REQUIRE(e.size() == 3);
  CHECK(e.at(-2).to_rational() == Rational(1, 4));
  CHECK(e.at(0).to_rational() == Rational(1, 2));
  CHECK(e.at(2).to_rational() == Rational(1, 4));
  const Configuration four = single(0, 4);
  const auto e1 = linear_run(four, 1);
  CHECK(e1.size() == 2);
  CHECK(e1.at(-1) == Dyadic(2));
  CHECK(e1.at(1) == Dyadic(2));
  const auto e0 = linear_run(four, 0);
  CHECK(e0.size() == 1);
  CHECK(e0.at(0) == Dyadic(4));

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const Configuration c = oracle::random_config(rng, 30, 15);
    const int t = static_cast<int>(rng() % 30);
    const auto got = linear_run(c, t);
    const auto want = oracle::halving_run(c, t);
    Dyadic total;
    for (auto& [x, v] : want) {
      if (v == 0) continue;
      REQUIRE(got.count(x));
      CHECK(got.at(x).to_rational() == v);
    }
    for (auto& [x, v] : got) total += v;
    CHECK(total == Dyadic(c.total_chips()));
  }
}

TEST_CASE("step_within keeps only the requested sources") {
  const Configuration c = make_config({{-4, BigInt(3)}, {0, BigInt(5)}, {4, BigInt(7)}}, {},
                                      Parity::Even);
  ProppMachine m(c, 4);
  m.step_within(-1, 1);
  CHECK(m.chips(-5) + m.chips(-3) == 0);
  CHECK(m.chips(-1) + m.chips(1) == 5);
  CHECK(m.chips(3) + m.chips(5) == 0);
}

TEST_CASE("machine grows its window past the horizon") {
  ProppMachine m(single(0, 1), 0);
  for (int t = 0; t < 100; ++t) m.step();
  CHECK(m.snapshot().total_chips() == 1);
  LinearMachine lm(single(0, 1), 0);
  for (int t = 0; t < 100; ++t) lm.step();
  Dyadic total;
  for (std::int64_t x = -100; x <= 100; ++x) total += lm.expected(x);
  CHECK(total == Dyadic(1));
}

TEST_CASE("configuration text format round-trips") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration c = oracle::random_config(rng, 30, 15);
    std::stringstream ss;
    write_config(ss, c, {"generator: test params=none seed=3"});
    const Configuration back = read_config(ss);
    CHECK(back == c);
    std::stringstream again;
    write_config(again, back, {"generator: test params=none seed=3"});
    std::stringstream first;
    write_config(first, c, {"generator: test params=none seed=3"});
    CHECK(again.str() == first.str());
  }
  BigInt huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 2, 200);
  const Configuration big = make_config({{-4, huge}}, {{-4, Rotor::Left}}, Parity::Even);
  std::stringstream ss;
  write_config(ss, big);
  CHECK(read_config(ss) == big);

  // A snapshot at odd time reads back tagged with its occupied class.
  const GameTrace tr = propp_run(single(0, 3), 3);
  std::stringstream snap;
  write_config(snap, tr.final);
  const Configuration restart = read_config(snap);
  CHECK(restart.parity() == Parity::Odd);
  CHECK(restart.total_chips() == 3);
  CHECK(propp_run(restart, 5).final.chip_cells().size() > 0);
}

TEST_CASE("configuration parse errors") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_config(is);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("propp-config v2 parity=even\n"), ParseError);
  CHECK_THROWS_AS(parse("propp-config v1\n"), ParseError);
  CHECK_THROWS_AS(parse("propp-config v1 parity=even\n0 x R\n"), ParseError);
  CHECK_THROWS_AS(parse("propp-config v1 parity=even\n0 1 U\n"), ParseError);
  CHECK_THROWS_AS(parse("propp-config v1 parity=even\n0 1 R\n0 1 R\n"), ParseError);
  CHECK_THROWS_AS(parse("propp-config v1 parity=even\n0 1 R\n1 1 R\n"), ConfigError);
  const Configuration ok = parse("# leading comment\npropp-config v1 parity=odd\n# c\n\n-3 4 L\n");
  CHECK(ok.chips(-3) == 4);
  CHECK(ok.rotor(-3) == Rotor::Left);
}

TEST_CASE("split log text format round-trips") {
  const GameTrace tr = propp_run(single(0, 7), 12);
  std::stringstream ss;
  write_split_log(ss, tr.log);
  CHECK(read_split_log(ss) == tr.log);
  std::istringstream bad("propp-splits v1\n0 3 R\n0 2 L\n");
  CHECK_THROWS_AS(read_split_log(bad), ParseError);
}

TEST_CASE("split log validation") {
  OddSplitLog log;
  log.append(0, 0, Rotor::Right);
  log.append(0, 2, Rotor::Left);
  CHECK_NOTHROW(log.validate([](std::int64_t) { return Rotor::Right; }));
  CHECK_THROWS_AS(log.validate([](std::int64_t) { return Rotor::Left; }), ConfigError);
  log.append(0, 4, Rotor::Left);
  CHECK_THROWS_AS(log.validate([](std::int64_t) { return Rotor::Right; }), ConfigError);
}

#pragma once
// Brute-force reference models shared by the test suites.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "proppwalk/machine.hpp"

namespace oracle {

using proppwalk::BigInt;
using proppwalk::Rational;

struct State {
  std::map<std::int64_t, long> chips;
  std::map<std::int64_t, int> rotor;  // missing = +1
  std::vector<std::tuple<std::int64_t, std::int64_t, int>> splits;
  std::int64_t time = 0;
};

// Each chip in turn leaves along the rotor, which flips after every chip.
inline void chipwise_step(State& s) {
  std::map<std::int64_t, long> next;
  for (auto& [x, n] : s.chips) {
    if (n == 0) continue;
    int& r = s.rotor.try_emplace(x, 1).first->second;
    if (n % 2) s.splits.emplace_back(x, s.time, r);
    for (long i = 0; i < n; ++i) {
      next[x + r] += 1;
      r = -r;
    }
  }
  s.chips = std::move(next);
  ++s.time;
}

inline State from_config(const proppwalk::Configuration& c) {
  State s;
  for (std::int64_t x = c.lo(); x <= c.hi(); ++x) {
    if (sgn(c.chips(x)) != 0) s.chips[x] = c.chips(x).get_si();
    s.rotor[x] = proppwalk::sign(c.rotor(x));
  }
  return s;
}

// Linear machine by repeated exact halving.
inline std::map<std::int64_t, Rational> halving_run(const proppwalk::Configuration& c, int t) {
  std::map<std::int64_t, Rational> cur;
  for (std::int64_t x = c.lo(); x <= c.hi(); ++x)
    if (sgn(c.chips(x)) != 0) cur[x] = Rational(c.chips(x));
  for (int s = 0; s < t; ++s) {
    std::map<std::int64_t, Rational> next;
    for (auto& [x, v] : cur) {
      next[x - 1] += v / 2;
      next[x + 1] += v / 2;
    }
    cur = std::move(next);
  }
  return cur;
}

// Random single-class configuration: up to max_chips chips on |x| <= radius,
// random rotors on the whole window.
inline proppwalk::Configuration random_config(std::mt19937_64& rng, int max_chips, int radius) {
  const auto parity = rng() % 2 ? proppwalk::Parity::Odd : proppwalk::Parity::Even;
  const int p = parity == proppwalk::Parity::Odd ? 1 : 0;
  std::vector<std::int64_t> sites;
  for (int x = -radius; x <= radius; ++x)
    if (((x - p) & 1) == 0) sites.push_back(x);
  std::vector<std::pair<std::int64_t, BigInt>> chips;
  const int total = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_chips));
  std::map<std::int64_t, long> counts;
  for (int i = 0; i < total; ++i) counts[sites[rng() % sites.size()]] += 1;
  for (auto& [x, n] : counts) chips.emplace_back(x, BigInt(n));
  std::vector<std::pair<std::int64_t, proppwalk::Rotor>> rotors;
  for (int x = -radius; x <= radius; ++x)
    rotors.emplace_back(x, rng() % 2 ? proppwalk::Rotor::Right : proppwalk::Rotor::Left);
  return proppwalk::make_config(chips, rotors, parity);
}

// Whole-pile stepping over every site, recording rotors and parities at
// every time up to t_end.
struct PileRun {
  std::vector<std::map<std::int64_t, BigInt>> chips;
  std::vector<std::map<std::int64_t, int>> rotors;

  PileRun(const proppwalk::Configuration& c, std::int64_t t_end) {
    std::map<std::int64_t, BigInt> f;
    std::map<std::int64_t, int> r;
    for (std::int64_t x = c.lo(); x <= c.hi(); ++x) {
      if (sgn(c.chips(x)) != 0) f[x] = c.chips(x);
      r[x] = proppwalk::sign(c.rotor(x));
    }
    for (std::int64_t t = 0; t <= t_end; ++t) {
      chips.push_back(f);
      rotors.push_back(r);
      std::map<std::int64_t, BigInt> next;
      for (auto& [x, n] : f) {
        BigInt half = n / 2;
        next[x - 1] += half;
        next[x + 1] += half;
        if (mpz_odd_p(n.get_mpz_t())) {
          int& rr = r.try_emplace(x, 1).first->second;
          next[x + rr] += 1;
          rr = -rr;
        }
      }
      f = std::move(next);
    }
  }

  int parity(std::int64_t x, std::int64_t t) const {
    auto it = chips[t].find(x);
    return it == chips[t].end() ? 0 : (mpz_odd_p(it->second.get_mpz_t()) ? 1 : 0);
  }
  int rotor(std::int64_t x, std::int64_t t) const {
    auto it = rotors[t].find(x);
    return it == rotors[t].end() ? 1 : it->second;
  }
};

}  // namespace oracle

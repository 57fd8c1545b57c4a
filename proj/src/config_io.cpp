#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "proppwalk/machine.hpp"
#include "text_io.hpp"

namespace proppwalk {

using namespace textio;

void write_config(std::ostream& os, const Configuration& c,
                  const std::vector<std::string>& comments) {
  os << "propp-config v1 parity=" << parity_name(c.occupied_parity()) << "\n";
  for (const auto& line : comments) {
    os << "# " << line << "\n";
  }
  for (std::int64_t x = c.lo(); x <= c.hi(); ++x) {
    const BigInt& n = c.chips(x);
    const Rotor r = c.rotor(x);
    if (sgn(n) == 0 && r == Rotor::Right) continue;
    os << x << ' ' << n.get_str() << ' ' << rotor_char(r) << "\n";
  }
}

Configuration read_config(std::istream& is) {
  std::size_t lineno = 0;
  const auto rest = read_header(is, "propp-config v1", lineno);
  Parity parity = Parity::Even;
  bool have_parity = false;
  for (const auto& tok : rest) {
    if (tok == "parity=even") {
      parity = Parity::Even;
      have_parity = true;
    } else if (tok == "parity=odd") {
      parity = Parity::Odd;
      have_parity = true;
    } else {
      throw ParseError("unknown header field '" + tok + "'", lineno);
    }
  }
  if (!have_parity) {
    throw ParseError("header lacks parity=<even|odd>", lineno);
  }

  std::map<std::int64_t, std::pair<BigInt, Rotor>> sites;
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string xs, ns, rs, extra;
    if (!(ss >> xs >> ns >> rs) || (ss >> extra)) {
      throw ParseError("expected '<x> <chips> <R|L>'", lineno);
    }
    const std::int64_t x = parse_int(xs, lineno, "position");
    BigInt n;
    if (ns.empty() || n.set_str(ns, 10) != 0) {
      throw ParseError("bad chip count '" + ns + "'", lineno);
    }
    if (sites.count(x)) {
      throw ParseError("duplicate position " + xs, lineno);
    }
    sites.emplace(x, std::make_pair(n, parse_rotor(rs, lineno)));
  }

  std::vector<std::pair<std::int64_t, BigInt>> chips;
  std::vector<std::pair<std::int64_t, Rotor>> rotors;
  for (const auto& [x, v] : sites) {
    chips.emplace_back(x, v.first);
    rotors.emplace_back(x, v.second);
  }
  return make_config(chips, rotors, parity);
}

void write_split_log(std::ostream& os, const OddSplitLog& log) {
  os << "propp-splits v1\n";
  for (const auto& e : log.chronological()) {
    os << e.position << ' ' << e.time << ' ' << rotor_char(e.rotor_at_split) << "\n";
  }
}

OddSplitLog read_split_log(std::istream& is) {
  std::size_t lineno = 0;
  const auto rest = read_header(is, "propp-splits v1", lineno);
  if (!rest.empty()) {
    throw ParseError("unexpected header field '" + rest.front() + "'", lineno);
  }
  OddSplitLog log;
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string xs, ts, rs, extra;
    if (!(ss >> xs >> ts >> rs) || (ss >> extra)) {
      throw ParseError("expected '<x> <t> <R|L>'", lineno);
    }
    try {
      log.append(parse_int(xs, lineno, "position"), parse_int(ts, lineno, "time"),
                 parse_rotor(rs, lineno));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return log;
}

}  // namespace proppwalk

#include <istream>
#include <ostream>
#include <set>

#include "proppwalk/forcing.hpp"
#include "text_io.hpp"

namespace proppwalk {

using namespace textio;

namespace {

template <class CellChar>
void write_rows(std::ostream& os, const SpaceTimeTable& p, const char* kind, CellChar cell_char) {
  os << "propp-prescription v1 kind=" << kind << " parity=" << parity_name(p.variant)
     << " t_hi=" << p.t_hi() << "\n";
  for (std::int64_t t = 0; t <= p.t_hi(); ++t) {
    const TableRow& row = p.rows[static_cast<std::size_t>(t)];
    if (row.empty()) continue;
    os << t << ' ' << row.lo << ' ' << row.hi << ' ';
    for (std::int64_t x = row.lo; x <= row.hi; ++x) {
      os << (p.active(x, t) ? cell_char(row.at(x)) : '.');
    }
    os << "\n";
  }
}

}  // namespace

void write_prescription(std::ostream& os, const RotorPrescription& p) {
  write_rows(os, p, "rotor", [](std::int8_t v) { return v < 0 ? 'L' : 'R'; });
}

void write_prescription(std::ostream& os, const ParityPrescription& p) {
  write_rows(os, p, "parity", [](std::int8_t v) { return v ? '1' : '0'; });
  for (const auto& [x, r] : p.initial_rotors) {
    os << "rotor " << x << ' ' << rotor_char(r) << "\n";
  }
}

std::variant<RotorPrescription, ParityPrescription> read_prescription(std::istream& is) {
  std::size_t lineno = 0;
  const auto fields = read_header(is, "propp-prescription v1", lineno);
  std::string kind;
  std::optional<Parity> parity;
  std::optional<std::int64_t> t_hi;
  for (const auto& tok : fields) {
    if (tok.rfind("kind=", 0) == 0) {
      kind = tok.substr(5);
    } else if (tok == "parity=even") {
      parity = Parity::Even;
    } else if (tok == "parity=odd") {
      parity = Parity::Odd;
    } else if (tok.rfind("t_hi=", 0) == 0) {
      t_hi = parse_int(tok.substr(5), lineno, "t_hi");
    } else {
      throw ParseError("unknown header field '" + tok + "'", lineno);
    }
  }
  if (kind != "rotor" && kind != "parity") {
    throw ParseError("header needs kind=rotor or kind=parity", lineno);
  }
  if (!parity) throw ParseError("header lacks parity=<even|odd>", lineno);
  if (!t_hi || *t_hi < -1) throw ParseError("header lacks a valid t_hi=<n>", lineno);
  const bool rotor_kind = kind == "rotor";

  SpaceTimeTable table;
  table.variant = *parity;
  table.rows.resize(static_cast<std::size_t>(*t_hi + 1));
  std::set<std::int64_t> seen;
  std::map<std::int64_t, Rotor> rotors;
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string a, b, c, d, extra;
    ss >> a >> b >> c;
    if (a == "rotor") {
      if (rotor_kind) throw ParseError("rotor lines belong to parity prescriptions", lineno);
      if (c.empty() || (ss >> extra)) throw ParseError("expected 'rotor <x> <R|L>'", lineno);
      const std::int64_t x = parse_int(b, lineno, "position");
      if (!rotors.emplace(x, parse_rotor(c, lineno)).second) {
        throw ParseError("duplicate rotor for position " + b, lineno);
      }
      continue;
    }
    if (!(ss >> d) || (ss >> extra)) {
      throw ParseError("expected '<t> <x_lo> <x_hi> <cells>'", lineno);
    }
    const std::int64_t t = parse_int(a, lineno, "time");
    const std::int64_t lo = parse_int(b, lineno, "x_lo");
    const std::int64_t hi = parse_int(c, lineno, "x_hi");
    if (t < 0 || t > *t_hi) throw ParseError("time " + a + " outside 0..t_hi", lineno);
    if (lo > hi) throw ParseError("x_lo > x_hi", lineno);
    if (!seen.insert(t).second) throw ParseError("duplicate row " + a, lineno);
    if (static_cast<std::int64_t>(d.size()) != hi - lo + 1) {
      throw ParseError("row has " + std::to_string(d.size()) + " cells, expected " +
                           std::to_string(hi - lo + 1),
                       lineno);
    }
    table.set_row(t, lo, hi, 0);
    for (std::int64_t x = lo; x <= hi; ++x) {
      const char ch = d[static_cast<std::size_t>(x - lo)];
      std::int8_t v = 0;
      if (!table.active(x, t)) {
        if (ch != '.') {
          throw ParseError("cell at x=" + std::to_string(x) + " is off the occupied class; use '.'",
                           lineno);
        }
        continue;
      }
      if (rotor_kind && (ch == 'R' || ch == 'L')) {
        v = ch == 'R' ? 1 : -1;
      } else if (!rotor_kind && (ch == '0' || ch == '1')) {
        v = static_cast<std::int8_t>(ch - '0');
      } else {
        throw ParseError(std::string("bad cell '") + ch + "' at x=" + std::to_string(x), lineno);
      }
      table.rows[static_cast<std::size_t>(t)].at(x) = v;
    }
  }

  try {
    if (rotor_kind) {
      RotorPrescription p;
      static_cast<SpaceTimeTable&>(p) = std::move(table);
      p.validate();
      return p;
    }
    ParityPrescription p;
    static_cast<SpaceTimeTable&>(p) = std::move(table);
    p.initial_rotors = std::move(rotors);
    p.validate();
    return p;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace proppwalk

#pragma once
// Line-oriented helpers shared by the text readers.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "proppwalk/errors.hpp"
#include "proppwalk/machine.hpp"

namespace proppwalk::textio {

inline bool skippable(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

inline Rotor parse_rotor(const std::string& tok, std::size_t lineno) {
  if (tok == "R") return Rotor::Right;
  if (tok == "L") return Rotor::Left;
  throw ParseError("rotor must be R or L, got '" + tok + "'", lineno);
}

inline std::int64_t parse_int(const std::string& tok, std::size_t lineno, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + tok + "'", lineno);
  }
}

// Reads the first non-comment line and checks it against `magic`; returns the
// remaining tokens of that line.
inline std::vector<std::string> read_header(std::istream& is, const std::string& magic,
                                     std::size_t& lineno) {
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string a, b;
    ss >> a >> b;
    if (a + " " + b != magic) {
      throw ParseError("expected header '" + magic + "'", lineno);
    }
    std::vector<std::string> rest;
    for (std::string tok; ss >> tok;) rest.push_back(tok);
    return rest;
  }
  throw ParseError("empty input; expected header '" + magic + "'");
}

}  // namespace proppwalk::textio

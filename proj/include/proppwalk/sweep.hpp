#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proppwalk/discrepancy.hpp"

namespace proppwalk {

// A sweep spec is a JSON object:
//   {"experiment": "time_lb", "grid": {"T": [64, 256, 1024]},
//    "output": "time.csv", "digits": 12, "workers": 2}
// Experiments and their grid keys:
//   vertex_lb     y              (even, 2..40)
//   space_lb      L              (odd, 1..255)
//   time_lb       T              (1..4096)
//   spacetime_lb  L, T           (1..1024, 1..4096)
//   l2_random     t, seeds, L, M (t 1..4096, L 1..4096, M a power of two up to 65536)
struct SweepSpec {
  std::string experiment;
  std::map<std::string, std::vector<std::int64_t>> grid;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> output;
  unsigned digits = 12;
  unsigned workers = 0;  // 0: one per hardware thread, at most 8
};

/// Throws ParseError on malformed JSON, unknown experiments or keys, empty
/// lists and out-of-range values.
SweepSpec parse_sweep_spec(const std::string& json_text);

struct SweepPoint {
  std::map<std::string, std::int64_t> params;
  std::optional<std::uint64_t> seed;
  std::string label;  // "L=7" or "t=256;seed=1;L=8;M=128"
};

/// Cartesian product in key order, first key outermost.
std::vector<SweepPoint> expand_grid(const SweepSpec& spec);

struct SweepRow {
  std::string experiment;
  std::string params;
  std::string status;  // "ok", "mismatch", "refused: ...", "error: ..."
  std::optional<DiscrepancyReport> report;
};

SweepRow run_point(const std::string& experiment, const SweepPoint& point);

/// Runs every grid point on a bounded pool; rows come back in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row, unsigned digits);

}  // namespace proppwalk

#include "proppwalk/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "proppwalk/errors.hpp"
#include "proppwalk/forcing.hpp"

namespace proppwalk {

namespace {

using json = nlohmann::json;

struct KeyRule {
  std::string key;
  std::int64_t lo;
  std::int64_t hi;
  int parity = -1;        // required value mod 2, or -1
  bool pow2 = false;
};

const std::map<std::string, std::vector<KeyRule>>& experiments() {
  static const std::map<std::string, std::vector<KeyRule>> table = {
      {"vertex_lb", {{"y", 2, 40, 0}}},
      {"space_lb", {{"L", 1, 255, 1}}},
      {"time_lb", {{"T", 1, 4096}}},
      {"spacetime_lb", {{"L", 1, 1024}, {"T", 1, 4096}}},
      {"l2_random", {{"t", 1, 4096}, {"seeds", 0, 0}, {"L", 1, 4096}, {"M", 1, 65536, -1, true}}},
  };
  return table;
}

std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("sweep spec must be a JSON object");
  SweepSpec spec;
  for (const auto& [k, v] : doc.items()) {
    if (k != "experiment" && k != "grid" && k != "output" && k != "digits" && k != "workers") {
      throw ParseError("unknown sweep field '" + k + "'");
    }
  }
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
    throw ParseError("sweep spec needs an \"experiment\" string");
  }
  spec.experiment = doc["experiment"].get<std::string>();
  const auto it = experiments().find(spec.experiment);
  if (it == experiments().end()) {
    throw ParseError("unknown experiment '" + spec.experiment + "'");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ParseError("\"output\" must be a string");
    spec.output = doc["output"].get<std::string>();
  }
  if (doc.contains("digits")) {
    if (!doc["digits"].is_number_unsigned() || doc["digits"].get<unsigned>() > 100) {
      throw ParseError("\"digits\" must be an integer in 0..100");
    }
    spec.digits = doc["digits"].get<unsigned>();
  }
  if (doc.contains("workers")) {
    if (!doc["workers"].is_number_unsigned() || doc["workers"].get<unsigned>() > 256) {
      throw ParseError("\"workers\" must be an integer in 0..256");
    }
    spec.workers = doc["workers"].get<unsigned>();
  }
  if (!doc.contains("grid") || !doc["grid"].is_object()) {
    throw ParseError("sweep spec needs a \"grid\" object");
  }
  const json& grid = doc["grid"];
  for (const auto& [k, v] : grid.items()) {
    const auto& rules = it->second;
    if (std::none_of(rules.begin(), rules.end(), [&](const KeyRule& r) { return r.key == k; })) {
      throw ParseError("grid key '" + k + "' does not apply to " + spec.experiment);
    }
  }
  for (const KeyRule& rule : it->second) {
    if (!grid.contains(rule.key)) {
      throw ParseError(spec.experiment + " grid needs \"" + rule.key + "\"");
    }
    const json& list = grid[rule.key];
    if (!list.is_array() || list.empty()) {
      throw ParseError("grid \"" + rule.key + "\" must be a non-empty list");
    }
    for (const json& v : list) {
      if (rule.key == "seeds") {
        if (!v.is_number_unsigned()) throw ParseError("seeds must be non-negative integers");
        spec.seeds.push_back(v.get<std::uint64_t>());
        continue;
      }
      if (!v.is_number_integer()) throw ParseError("grid \"" + rule.key + "\" holds a non-integer");
      const auto x = v.get<std::int64_t>();
      if (x < rule.lo || x > rule.hi) {
        throw ParseError("grid value " + rule.key + "=" + std::to_string(x) + " outside " +
                         std::to_string(rule.lo) + ".." + std::to_string(rule.hi));
      }
      if (rule.parity >= 0 && (x & 1) != rule.parity) {
        throw ParseError("grid value " + rule.key + "=" + std::to_string(x) + " must be " +
                         (rule.parity ? "odd" : "even"));
      }
      if (rule.pow2 && (x & (x - 1)) != 0) {
        throw ParseError("grid value " + rule.key + "=" + std::to_string(x) +
                         " must be a power of two");
      }
      spec.grid[rule.key].push_back(x);
    }
  }
  return spec;
}

std::vector<SweepPoint> expand_grid(const SweepSpec& spec) {
  const auto it = experiments().find(spec.experiment);
  if (it == experiments().end()) throw ParseError("unknown experiment '" + spec.experiment + "'");
  std::vector<SweepPoint> points{SweepPoint{}};
  for (const KeyRule& rule : it->second) {
    std::vector<SweepPoint> next;
    for (const SweepPoint& p : points) {
      if (rule.key == "seeds") {
        for (std::uint64_t s : spec.seeds) {
          SweepPoint q = p;
          q.seed = s;
          q.label += (q.label.empty() ? "" : ";") + std::string("seed=") + std::to_string(s);
          next.push_back(std::move(q));
        }
        continue;
      }
      const auto g = spec.grid.find(rule.key);
      if (g == spec.grid.end()) continue;
      for (std::int64_t v : g->second) {
        SweepPoint q = p;
        q.params[rule.key] = v;
        q.label += (q.label.empty() ? "" : ";") + rule.key + "=" + std::to_string(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

SweepRow run_point(const std::string& experiment, const SweepPoint& point) {
  SweepRow row;
  row.experiment = experiment;
  row.params = point.label;
  auto param = [&](const char* k) { return point.params.at(k); };
  try {
    DiscrepancyReport r;
    std::optional<Dyadic> predicted;
    if (experiment == "vertex_lb") {
      const VertexLowerBound lb = gen_vertex_lb(param("y"));
      r = report_vertex(lb.config, 0, lb.t0);
      predicted = lb.predicted;
    } else if (experiment == "space_lb") {
      const SpaceLowerBound lb = gen_space_lb(param("L"));
      r = report_space(lb.config, lb.X, lb.t);
      predicted = lb.predicted;
    } else if (experiment == "time_lb") {
      const TimeLowerBound lb = gen_time_lb(param("T"));
      r = report_time(lb.config, lb.x, lb.S);
      predicted = lb.predicted;
    } else if (experiment == "spacetime_lb") {
      const SpaceTimeLowerBound lb = gen_spacetime_lb(param("L"), param("T"));
      r = report_box(lb.config, lb.X, lb.S);
      predicted = lb.predicted;
    } else if (experiment == "l2_random") {
      const std::int64_t t = param("t"), L = param("L"), M = param("M");
      const L2RandomConstruction g = gen_l2_random(t, point.seed.value_or(0));
      r = report_l2(g.config, L, M, t, -(L + M) / 2);
    } else {
      throw ParseError("unknown experiment '" + experiment + "'");
    }
    row.status = predicted && r.value != *predicted ? "mismatch" : "ok";
    row.report = std::move(r);
  } catch (const ResourceLimitError& e) {
    row.status = clean(std::string("refused: ") + e.what());
  } catch (const std::exception& e) {
    row.status = clean(std::string("error: ") + e.what());
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const std::vector<SweepPoint> points = expand_grid(spec);
  if (points.empty()) throw ParseError("sweep grid is empty");
  std::vector<SweepRow> rows(points.size());
  unsigned workers = spec.workers;
  if (workers == 0) workers = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
  workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      rows[i] = run_point(spec.experiment, points[i]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rows;
}

std::string sweep_csv_header() { return "experiment,params,status," + csv_header(); }

std::string sweep_csv_row(const SweepRow& row, unsigned digits) {
  std::string out = row.experiment + "," + row.params + "," + row.status + ",";
  if (row.report) return out + csv_row(*row.report, digits);
  return out + ",,,,,,,";
}

}  // namespace proppwalk

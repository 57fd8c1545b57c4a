#include "proppwalk/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "proppwalk/discrepancy.hpp"
#include "proppwalk/errors.hpp"
#include "proppwalk/forcing.hpp"
#include "proppwalk/limits.hpp"
#include "proppwalk/numerics.hpp"
#include "proppwalk/sweep.hpp"

namespace proppwalk {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Configuration load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return read_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

// Rough peak for running c for t steps with both machines: every site in
// reach holds numbers of about (chip bits + t) bits.
std::uint64_t simulation_estimate(const Configuration& c, std::int64_t t) {
  std::size_t bits = 1;
  for (const BigInt& n : c.chip_cells()) bits = std::max(bits, mpz_sizeinbase(n.get_mpz_t(), 2));
  const auto width = static_cast<std::uint64_t>(c.size()) + 2 * static_cast<std::uint64_t>(t) + 2;
  return 2 * width * ((bits + static_cast<std::uint64_t>(t)) / 8 + 32);
}

int cmd_simulate(const std::string& path, std::int64_t t, const std::string& out_path,
                 std::string splits_path, std::ostream& out) {
  if (t < 0) throw UsageError("-t must be non-negative");
  const Configuration c = load_config(path);
  require_budget(simulation_estimate(c, t), "simulating " + std::to_string(t) + " steps");
  const GameTrace tr = propp_run(c, t);
  if (splits_path.empty()) splits_path = out_path + ".splits";
  auto f = open_out(out_path);
  write_config(f, tr.final);
  auto g = open_out(splits_path);
  write_split_log(g, tr.log);
  out << "wrote " << out_path << " and " << splits_path << " (" << tr.log.size()
      << " odd splits)\n";
  return kExitOk;
}

struct DiscFlags {
  std::optional<std::int64_t> t;
  std::vector<std::int64_t> vertex, space, time, box, l2;
  unsigned digits = 12;
  bool no_header = false;
};

int cmd_disc(const std::string& path, const DiscFlags& f, std::ostream& out) {
  const int forms = !f.vertex.empty() + !f.space.empty() + !f.time.empty() + !f.box.empty() +
                    !f.l2.empty();
  if (forms != 1) throw UsageError("give exactly one of --vertex, --space, --time, --box, --l2");
  const bool needs_t = !f.vertex.empty() || !f.space.empty() || !f.l2.empty();
  if (needs_t && !f.t) throw UsageError("this query needs -t");
  if (!needs_t && f.t) throw UsageError("-t does not apply to --time or --box");
  const Configuration c = load_config(path);

  std::int64_t horizon = f.t.value_or(0);
  if (!f.time.empty()) horizon = f.time[1] + f.time[2] - 1;
  if (!f.box.empty()) horizon = f.box[2] + f.box[3] - 1;
  if (horizon < c.time()) throw UsageError("query time precedes the configuration");
  require_budget(simulation_estimate(c, horizon - c.time()),
                 "discrepancy up to time " + std::to_string(horizon));

  DiscrepancyReport r;
  try {
    if (!f.vertex.empty()) {
      r = report_vertex(c, f.vertex[0], *f.t);
    } else if (!f.space.empty()) {
      r = report_space(c, SpaceInterval(f.space[0], f.space[1]), *f.t);
    } else if (!f.time.empty()) {
      r = report_time(c, f.time[0], TimeInterval(f.time[1], f.time[2]));
    } else if (!f.box.empty()) {
      r = report_box(c, SpaceInterval(f.box[0], f.box[1]), TimeInterval(f.box[2], f.box[3]));
    } else {
      r = report_l2(c, f.l2[0], f.l2[1], *f.t, f.l2[2]);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!f.no_header) out << csv_header() << "\n";
  out << csv_row(r, f.digits) << "\n";
  return kExitOk;
}

int cmd_c1(std::int64_t ycut, unsigned digits, std::ostream& out) {
  if (ycut < 1) throw UsageError("--ycut must be >= 1");
  const C1Bracket b = c1_bracket(ycut);
  out << "ycut " << ycut << "\n";
  out << "lower " << to_decimal_directed(b.lower, digits, false) << "\n";
  out << "upper " << to_decimal_directed(b.upper, digits, true) << "\n";
  out << "width " << to_decimal_directed(b.width(), std::max(digits, 3u), true) << "\n";
  const std::string lo2 = to_decimal(b.lower, 2);
  const std::string hi2 = to_decimal(b.upper, 2);
  out << "c1 " << (lo2 == hi2 ? lo2 : "[" + lo2 + ", " + hi2 + "]") << "\n";
  return kExitOk;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> out;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + tok + "'");
    if (!out.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
      throw UsageError("parameter '" + tok.substr(0, eq) + "' given twice");
    }
  }
  return out;
}

std::int64_t take_int(std::map<std::string, std::string>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing parameter " + key + "=<n>");
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) {
    throw UsageError("parameter " + key + " must be an integer");
  }
  params.erase(it);
  return v;
}

int cmd_force(const std::vector<std::string>& positionals, const std::string& lowerbound,
              const std::string& out_path, ForcingMethod method, std::ostream& out) {
  ForcingOptions opts;
  opts.method = method;
  Configuration c;
  std::vector<std::string> comments;
  if (lowerbound.empty()) {
    if (positionals.size() != 1) throw UsageError("force needs one prescription file or --lowerbound");
    std::ifstream in(positionals[0]);
    if (!in) throw UsageError("cannot open " + positionals[0]);
    const auto p = read_prescription(in);
    if (std::holds_alternative<RotorPrescription>(p)) {
      c = arrow_force(std::get<RotorPrescription>(p), opts);
      comments.push_back("generator: arrow_force params=file=" + positionals[0] + " seed=none");
    } else {
      c = parity_force(std::get<ParityPrescription>(p), opts);
      comments.push_back("generator: parity_force params=file=" + positionals[0] + " seed=none");
    }
  } else {
    auto params = parse_params(positionals);
    auto predicted = [](const Dyadic& d) { return "predicted: " + d.to_string(); };
    try {
      if (lowerbound == "vertex") {
        const auto lb = gen_vertex_lb(take_int(params, "y"), opts);
        c = lb.config;
        comments = {lb.provenance, "query: vertex x=0 t=" + std::to_string(lb.t0),
                    predicted(lb.predicted)};
      } else if (lowerbound == "space") {
        const auto lb = gen_space_lb(take_int(params, "L"), opts);
        c = lb.config;
        comments = {lb.provenance,
                    "query: space X=[" + std::to_string(lb.X.lo) + "," + std::to_string(lb.X.hi) +
                        "] t=" + std::to_string(lb.t),
                    predicted(lb.predicted)};
      } else if (lowerbound == "time") {
        const auto lb = gen_time_lb(take_int(params, "T"), opts);
        c = lb.config;
        comments = {lb.provenance,
                    "query: time x=0 t0=" + std::to_string(lb.S.t0) + " T=" + std::to_string(lb.S.length),
                    predicted(lb.predicted)};
        if (lb.rounded) comments.push_back("note: T rounded down to the square " + std::to_string(lb.T));
      } else if (lowerbound == "spacetime") {
        const std::int64_t L = take_int(params, "L");
        const auto lb = gen_spacetime_lb(L, take_int(params, "T"), opts);
        c = lb.config;
        comments = {lb.provenance,
                    "query: box X=[" + std::to_string(lb.X.lo) + "," + std::to_string(lb.X.hi) +
                        "] t0=" + std::to_string(lb.S.t0) + " T=" + std::to_string(lb.S.length),
                    predicted(lb.predicted)};
      } else if (lowerbound == "l2") {
        const std::int64_t t = take_int(params, "t");
        const std::int64_t seed = take_int(params, "seed");
        if (seed < 0) throw UsageError("seed must be non-negative");
        const auto g = gen_l2_random(t, static_cast<std::uint64_t>(seed), opts);
        c = g.config;
        comments = {g.provenance};
      } else {
        throw UsageError("unknown generator '" + lowerbound +
                         "' (vertex, space, time, spacetime, l2)");
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (!params.empty()) throw UsageError("unused parameter " + params.begin()->first);
  }
  if (out_path.empty() || out_path == "-") {
    write_config(out, c, comments);
  } else {
    auto f = open_out(out_path);
    write_config(f, c, comments);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& out_override, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  SweepSpec spec = parse_sweep_spec(ss.str());
  if (!out_override.empty()) spec.output = out_override;
  const std::vector<SweepRow> rows = run_sweep(spec);
  std::ostringstream csv;
  csv << sweep_csv_header() << "\n";
  for (const auto& row : rows) csv << sweep_csv_row(row, spec.digits) << "\n";
  if (!spec.output || *spec.output == "-") {
    out << csv.str();
  } else {
    auto f = open_out(*spec.output);
    f << csv.str();
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact simulation of the one-dimensional Propp machine", "proppwalk"};
  app.require_subcommand(1);

  std::string config_path, out_path, splits_path;
  std::int64_t steps = 0;
  auto* sim = app.add_subcommand("simulate", "Run the Propp machine and record odd splits");
  sim->add_option("config", config_path, "Configuration file")->required();
  sim->add_option("-t", steps, "Number of steps")->required();
  sim->add_option("-o,--out", out_path, "Final configuration file")->required();
  sim->add_option("--splits", splits_path, "Odd-split log file (default <out>.splits)");

  DiscFlags df;
  std::int64_t disc_t = 0;
  auto* disc = app.add_subcommand("disc", "Exact discrepancy of a configuration, as CSV");
  disc->add_option("config", config_path, "Configuration file")->required();
  auto* t_opt = disc->add_option("-t", disc_t, "Query time for --vertex, --space and --l2");
  disc->add_option("--vertex", df.vertex, "x")->expected(1)->allow_extra_args(false);
  disc->add_option("--space", df.space, "lo hi")->expected(2)->allow_extra_args(false);
  disc->add_option("--time", df.time, "x t0 T")->expected(3)->allow_extra_args(false);
  disc->add_option("--box", df.box, "lo hi t0 T")->expected(4)->allow_extra_args(false);
  disc->add_option("--l2", df.l2, "L M base: mean of disc([base+k, base+k+L-1], t)^2 over k=1..M")
      ->expected(3)
      ->allow_extra_args(false);
  disc->add_option("--digits", df.digits, "Decimal digits")->check(CLI::Range(0, 100));
  disc->add_flag("--no-header", df.no_header, "Omit the CSV header");

  std::int64_t ycut = 0;
  unsigned c1_digits = 10;
  auto* c1 = app.add_subcommand("c1", "Certified bracket for the vertex constant");
  c1->add_option("--ycut", ycut, "Terms summed before the tail bound")->required();
  c1->add_option("--digits", c1_digits, "Decimal digits")->check(CLI::Range(1, 60));

  std::vector<std::string> force_args;
  std::string lowerbound, method_name = "auto", force_out;
  auto* force = app.add_subcommand("force", "Build a configuration realizing a prescription");
  force->add_option("args", force_args, "Prescription file, or key=value generator parameters");
  force->add_option("--lowerbound", lowerbound, "Generator: vertex, space, time, spacetime, l2");
  force->add_option("--method", method_name, "auto, stagewise or backprop")
      ->check(CLI::IsMember({"auto", "stagewise", "backprop"}));
  force->add_option("-o,--out", force_out, "Output configuration (default stdout)");

  std::string sweep_path, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a JSON-specified parameter sweep to CSV");
  sweep->add_option("spec", sweep_path, "Sweep spec (JSON)")->required();
  sweep->add_option("-o,--out", sweep_out, "Override the spec's output path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(config_path, steps, out_path, splits_path, out);
    if (*disc) {
      if (*t_opt) df.t = disc_t;
      return cmd_disc(config_path, df, out);
    }
    if (*c1) return cmd_c1(ycut, c1_digits, out);
    if (*force) {
      const ForcingMethod m = method_name == "stagewise" ? ForcingMethod::Stagewise
                              : method_name == "backprop" ? ForcingMethod::BackPropagation
                                                          : ForcingMethod::Auto;
      return cmd_force(force_args, lowerbound, force_out, m, out);
    }
    if (*sweep) return cmd_sweep(sweep_path, sweep_out, out);
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ForcingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitForcing;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

}  // namespace proppwalk

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "proppwalk/cli.hpp"
#include "proppwalk/discrepancy.hpp"
#include "proppwalk/errors.hpp"
#include "proppwalk/forcing.hpp"
#include "proppwalk/numerics.hpp"

namespace py = pybind11;
using namespace proppwalk;

namespace {

py::object fraction(const BigInt& num, const BigInt& den) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  py::object n = py::reinterpret_steal<py::object>(PyLong_FromString(num.get_str().c_str(), nullptr, 10));
  py::object d = py::reinterpret_steal<py::object>(PyLong_FromString(den.get_str().c_str(), nullptr, 10));
  return Fraction(n, d);
}

py::object to_py(const Dyadic& d) {
  BigInt den = 1;
  den <<= d.exponent();
  return fraction(d.mantissa(), den);
}

py::object to_py(const Rational& q) { return fraction(q.get_num(), q.get_den()); }

BigInt to_big(const py::int_& v) { return BigInt(py::str(v).cast<std::string>()); }

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw py::value_error("parity must be 'even' or 'odd'");
}

Rotor parse_rotor(const std::string& s) {
  if (s == "R") return Rotor::Right;
  if (s == "L") return Rotor::Left;
  throw py::value_error("rotor must be 'R' or 'L'");
}

Configuration config_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_config(is);
}

std::string config_to_text(const Configuration& c, const std::vector<std::string>& comments) {
  std::ostringstream os;
  write_config(os, c, comments);
  return os.str();
}

py::dict split_events(const OddSplitLog& log) {
  py::list out;
  for (const auto& e : log.chronological()) {
    out.append(py::make_tuple(e.position, e.time, std::string(1, rotor_char(e.rotor_at_split))));
  }
  py::dict d;
  d["splits"] = out;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact simulation of the one-dimensional Propp machine";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_MemoryError);
  py::register_exception<ForcingError>(m, "ForcingError", PyExc_RuntimeError);

  m.def("H", [](std::int64_t x, std::int64_t t) { return to_py(H(x, t)); },
        "Probability that a simple random walk from 0 is at x after t steps.");
  m.def("inf", [](std::int64_t y, std::int64_t t) { return to_py(inf(y, t)); },
        "Influence of one forced right move at distance y with t steps left.");
  m.def("t_max", &t_max);
  m.def("inf_time_partial_sum",
        [](std::int64_t x, std::int64_t t_cut) { return to_py(inf_time_partial_sum(x, t_cut)); });
  m.def("c1_bracket", [](std::int64_t y_cut) {
    const C1Bracket b = c1_bracket(y_cut);
    return py::make_tuple(to_py(b.lower), to_py(b.upper));
  });

  py::class_<Configuration>(m, "Configuration")
      .def(py::init([](const py::dict& chips, const py::dict& rotors, const std::string& parity) {
             std::vector<std::pair<std::int64_t, BigInt>> c;
             for (auto [k, v] : chips) c.emplace_back(k.cast<std::int64_t>(), to_big(v.cast<py::int_>()));
             std::vector<std::pair<std::int64_t, Rotor>> r;
             for (auto [k, v] : rotors) r.emplace_back(k.cast<std::int64_t>(), parse_rotor(v.cast<std::string>()));
             return make_config(c, r, parse_parity(parity));
           }),
           py::arg("chips"), py::arg("rotors") = py::dict(), py::arg("parity") = "even")
      .def_static("from_text", &config_from_text)
      .def("to_text", &config_to_text, py::arg("comments") = std::vector<std::string>{})
      .def_property_readonly("lo", &Configuration::lo)
      .def_property_readonly("hi", &Configuration::hi)
      .def_property_readonly("parity", [](const Configuration& c) { return std::string(parity_name(c.parity())); })
      .def("chips", [](const Configuration& c, std::int64_t x) {
        return py::reinterpret_steal<py::object>(PyLong_FromString(c.chips(x).get_str().c_str(), nullptr, 10));
      })
      .def("rotor", [](const Configuration& c, std::int64_t x) { return std::string(1, rotor_char(c.rotor(x))); })
      .def("__eq__", [](const Configuration& a, const Configuration& b) { return a == b; });

  m.def("simulate", [](const Configuration& c, std::int64_t t) {
    const GameTrace tr = propp_run(c, t);
    py::dict d = split_events(tr.log);
    d["final"] = tr.final;
    return d;
  });

  m.def("disc_vertex", [](const Configuration& c, std::int64_t x, std::int64_t t) {
    return to_py(disc_vertex(c, x, t));
  });
  m.def("disc_via_splits", [](const Configuration& c, std::int64_t x, std::int64_t t) {
    const GameTrace tr = propp_run(c, std::max<std::int64_t>(t - c.time(), 0));
    return to_py(disc_via_splits(c, tr.log, x, t));
  });
  m.def("disc_space", [](const Configuration& c, std::int64_t lo, std::int64_t hi, std::int64_t t) {
    return to_py(disc_space(c, SpaceInterval(lo, hi), t));
  });
  m.def("disc_time", [](const Configuration& c, std::int64_t x, std::int64_t t0, std::int64_t len) {
    return to_py(disc_time(c, x, TimeInterval(t0, len)));
  });
  m.def("disc_box", [](const Configuration& c, std::int64_t lo, std::int64_t hi, std::int64_t t0,
                       std::int64_t len) {
    return to_py(disc_spacetime(c, SpaceInterval(lo, hi), TimeInterval(t0, len)));
  });
  m.def("l2_average", [](const Configuration& c, std::int64_t L, std::int64_t M, std::int64_t t,
                         std::int64_t base) { return to_py(l2_average(c, L, M, t, base)); });

  m.def("force", [](const std::string& prescription_text) {
    std::istringstream is(prescription_text);
    const auto p = read_prescription(is);
    if (std::holds_alternative<RotorPrescription>(p)) return arrow_force(std::get<RotorPrescription>(p));
    return parity_force(std::get<ParityPrescription>(p));
  }, "Builds a configuration realizing a prescription given in the text format.");

  m.def("gen_vertex_lb", [](std::int64_t y) {
    const auto lb = gen_vertex_lb(y);
    py::dict d;
    d["config"] = lb.config;
    d["t0"] = lb.t0;
    d["predicted"] = to_py(lb.predicted);
    d["provenance"] = lb.provenance;
    return d;
  });
  m.def("gen_space_lb", [](std::int64_t L) {
    const auto lb = gen_space_lb(L);
    py::dict d;
    d["config"] = lb.config;
    d["X"] = py::make_tuple(lb.X.lo, lb.X.hi);
    d["t"] = lb.t;
    d["predicted"] = to_py(lb.predicted);
    d["provenance"] = lb.provenance;
    return d;
  });
  m.def("gen_time_lb", [](std::int64_t T) {
    const auto lb = gen_time_lb(T);
    py::dict d;
    d["config"] = lb.config;
    d["x"] = lb.x;
    d["S"] = py::make_tuple(lb.S.t0, lb.S.length);
    d["T"] = lb.T;
    d["predicted"] = to_py(lb.predicted);
    d["provenance"] = lb.provenance;
    return d;
  });
  m.def("gen_l2_random", [](std::int64_t t, std::uint64_t seed) {
    const auto g = gen_l2_random(t, seed);
    py::dict d;
    d["config"] = g.config;
    d["provenance"] = g.provenance;
    return d;
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}

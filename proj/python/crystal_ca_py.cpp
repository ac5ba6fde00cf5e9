#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crystal_ca/automaton.hpp"
#include "crystal_ca/backend.hpp"
#include "crystal_ca/errors.hpp"
#include "crystal_ca/rmatrix.hpp"
#include "crystal_ca/verify.hpp"

namespace py = pybind11;
using namespace crystal_ca;

namespace {

AlgebraSpec make_spec(const std::string& family, int rank, const std::string& brace) {
  if (brace != "upper" && brace != "lower") throw ParseError("brace must be 'upper' or 'lower'", 0);
  return AlgebraSpec(parse_family(family), rank, brace == "lower" ? Brace::Lower : Brace::Upper);
}

bool is_tensor(const std::string& text) { return text.find('.') != std::string::npos; }

// Single elements and tensors share the text interface; '.' marks a tensor.
struct PyCrystal {
  Crystal c;

  std::string show(const CrystalElement& b) const { return format_element(c.spec(), b); }
  std::string show(const TensorElement& t) const { return format_tensor(c.spec(), t); }

  template <class F>
  auto with(const std::string& text, F f) const {
    if (is_tensor(text)) return f(parse_tensor(c.spec(), text));
    return f(parse_element(c.spec(), text));
  }
};

RMatrixOptions memory_only() {
  RMatrixOptions o;
  o.use_env_cache_dir = false;
  o.lru_capacity = 128;
  return o;
}

py::dict factorized_dict(const Crystal& c, const FactorizedResult& r) {
  py::dict d;
  d["applicable"] = r.applicable();
  py::list steps;
  for (const auto& s : r.steps) steps.append(py::make_tuple(s.color, format_tensor(c.spec(), s.state)));
  d["steps"] = steps;
  d["output"] = r.applicable() ? py::object(py::str(format_tensor(c.spec(), r.output))) : py::object(py::none());
  d["reason"] = r.summary();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Affine crystals, combinatorial R and soliton cellular automata";

  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BackendUnavailable>(m, "BackendUnavailable", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GraphError>(m, "GraphError", base.ptr());
  py::register_exception<OracleError>(m, "OracleError", base.ptr());

  py::class_<PyCrystal>(m, "Crystal")
      .def(py::init([](const std::string& family, int rank, const std::vector<std::string>& graphs,
                       const std::string& brace) {
             const AlgebraSpec s = make_spec(family, rank, brace);
             if (graphs.empty()) return PyCrystal{Crystal::builtin(s)};
             std::vector<CrystalGraph> loaded;
             for (const auto& p : graphs) loaded.push_back(load_graph(p));
             return PyCrystal{Crystal(s, graph_structure(loaded))};
           }),
           py::arg("family") = "A1", py::arg("rank") = 1, py::arg("graphs") = std::vector<std::string>{},
           py::arg("brace") = "upper")
      .def_property_readonly("name", [](const PyCrystal& p) { return p.c.spec().name(); })
      .def_property_readonly("d", [](const PyCrystal& p) { return p.c.spec().d(); })
      .def("index_at", [](const PyCrystal& p, long long k) { return p.c.spec().index_at(k); })
      .def("letter_at", [](const PyCrystal& p, long long k) { return p.c.spec().letter_at(k).to_string(); })
      .def("eps", [](const PyCrystal& p, int i, const std::string& t) {
        return p.with(t, [&](const auto& x) { return p.c.eps(i, x); });
      })
      .def("phi", [](const PyCrystal& p, int i, const std::string& t) {
        return p.with(t, [&](const auto& x) { return p.c.phi(i, x); });
      })
      .def("e", [](const PyCrystal& p, int i, const std::string& t) -> std::optional<std::string> {
        return p.with(t, [&](const auto& x) -> std::optional<std::string> {
          const auto y = p.c.e(i, x);
          if (!y) return std::nullopt;
          return p.show(*y);
        });
      })
      .def("f", [](const PyCrystal& p, int i, const std::string& t) -> std::optional<std::string> {
        return p.with(t, [&](const auto& x) -> std::optional<std::string> {
          const auto y = p.c.f(i, x);
          if (!y) return std::nullopt;
          return p.show(*y);
        });
      })
      .def("e_max", [](const PyCrystal& p, int i, const std::string& t) {
        return p.with(t, [&](const auto& x) { return p.show(p.c.e_max(i, x)); });
      })
      .def("f_max", [](const PyCrystal& p, int i, const std::string& t) {
        return p.with(t, [&](const auto& x) { return p.show(p.c.f_max(i, x)); });
      })
      .def("weyl_s", [](const PyCrystal& p, int i, const std::string& t) {
        return p.with(t, [&](const auto& x) { return p.show(p.c.weyl_s(i, x)); });
      })
      .def("sigma", [](const PyCrystal& p, const std::string& t) {
        return p.with(t, [&](const auto& x) { return p.show(p.c.sigma(x)); });
      })
      .def("t", [](const PyCrystal& p, const std::string& t, long long shift) {
        return p.with(t, [&](const auto& x) { return p.c.t_def(x, shift); });
      }, py::arg("element"), py::arg("shift") = 0)
      .def("enumerate", [](const PyCrystal& p, int l) {
        std::vector<std::string> out;
        for (const auto& b : p.c.enumerate(l)) out.push_back(p.show(b));
        return out;
      })
      .def("admission", [](const PyCrystal& p, int l) {
        py::dict d;
        for (const auto& ch : admission_suite(p.c, l)) d[py::str(ch.name)] = ch.passed;
        return d;
      });

  py::class_<RMatrix>(m, "RMatrix")
      .def(py::init([](const PyCrystal& p) { return std::make_unique<RMatrix>(p.c, memory_only()); }))
      .def("apply", [](const RMatrix& r, const std::string& lhs, const std::string& rhs) {
        const auto& s = r.crystal().spec();
        TensorElement x = parse_tensor(s, lhs);
        const std::size_t split = x.size();
        for (auto& b : parse_tensor(s, rhs).factors) x.factors.push_back(b);
        return format_tensor(s, r.composite(x, split));
      }, py::arg("lhs"), py::arg("rhs"), "R: lhs (x) rhs -> rhs' (x) lhs'")
      .def("factorized", [](const RMatrix& r, const std::string& lhs, const std::string& rhs, long long k,
                            int margin) {
        const auto& s = r.crystal().spec();
        TensorElement x{parse_element(s, lhs)};
        for (auto& b : parse_tensor(s, rhs).factors) x.factors.push_back(b);
        return factorized_dict(r.crystal(), r_factorized(r.crystal(), k, x, margin));
      }, py::arg("lhs"), py::arg("rhs"), py::arg("k"), py::arg("margin") = 1)
      .def("yang_baxter", [](const RMatrix& r, int l, int mm, int kk) { return yang_baxter_check(r, l, mm, kk); });

  py::class_<Automaton>(m, "Automaton")
      .def(py::init([](const PyCrystal& p) {
        AutomatonOptions o;
        o.rmatrix = memory_only();
        return std::make_unique<Automaton>(p.c, o);
      }))
      .def("evolve", [](const Automaton& a, const std::string& state, long long k, long long steps,
                        const std::string& mode, std::optional<std::string> capacities) {
        std::optional<CapacityPattern> caps;
        if (capacities) caps = CapacityPattern::parse(*capacities);
        std::vector<AutomatonState> rows{a.parse_state(state, k, caps)};
        AutomatonState s = a.normalize(rows.front());
        for (long long t = 0; t < steps; ++t) {
          if (mode == "carrier") {
            s = a.evolve_T(s);
          } else if (mode == "factorized") {
            s = a.evolve_T_factorized(s, 1);
          } else if (mode == "fine") {
            s = a.evolve_fine(rows.front(), k + (t + 1) * a.spec().d());
          } else {
            throw ParseError("mode must be carrier, factorized or fine", 0);
          }
          rows.push_back(s);
        }
        const auto [lo, hi] = render_range(rows);
        std::vector<std::string> out;
        for (const auto& r : rows) out.push_back(render_row(a, r, lo, hi));
        return out;
      }, py::arg("state"), py::arg("k"), py::arg("steps") = 1, py::arg("mode") = "carrier",
         py::arg("capacities") = py::none(), "rendered rows, the initial state first")
      .def("fine", [](const Automaton& a, const std::string& state, long long k, long long m,
                      std::optional<std::string> capacities) {
        std::optional<CapacityPattern> caps;
        if (capacities) caps = CapacityPattern::parse(*capacities);
        const auto s = a.parse_state(state, k, caps);
        const auto r = a.evolve_fine(s, m);
        const auto [lo, hi] = render_range({s, r});
        return render_row(a, r, lo, hi);
      }, py::arg("state"), py::arg("k"), py::arg("m"), py::arg("capacities") = py::none())
      .def("carrier_trace", [](const Automaton& a, const std::string& state, long long k, int M) {
        const auto r = a.evolve_carrier(a.normalize(a.parse_state(state, k)), M);
        std::vector<std::string> out;
        for (const auto& u : r.carriers) out.push_back(format_element(a.spec(), u));
        return out;
      });

  m.def("verify_theorem", [](const RMatrix& r, long long trials, std::uint64_t seed, std::vector<int> shape) {
    TheoremOptions o;
    o.trials = trials;
    o.seed = seed;
    o.shape = std::move(shape);
    py::gil_scoped_release nogil;
    return verify_theorem(r, o).to_json();
  }, py::arg("rmatrix"), py::arg("trials") = 200, py::arg("seed") = 0, py::arg("shape") = std::vector<int>{});
  m.def("verify_tmap", [](const PyCrystal& p, int l) { return verify_tmap(p.c, l).to_json(); });
  m.def("verify_corollary", [](const Automaton& a, long long trials, std::uint64_t seed) {
    CorollaryOptions o;
    o.trials = trials;
    o.seed = seed;
    py::gil_scoped_release nogil;
    return verify_corollary(a, o).to_json();
  }, py::arg("automaton"), py::arg("trials") = 100, py::arg("seed") = 0);
}

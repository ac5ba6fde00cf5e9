// crystal-ca: command-line front end.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crystal_ca/automaton.hpp"
#include "crystal_ca/backend.hpp"
#include "crystal_ca/errors.hpp"
#include "crystal_ca/rmatrix.hpp"
#include "crystal_ca/verify.hpp"
#include "json.hpp"

using namespace crystal_ca;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kBackend = 3, kCap = 4, kDisagree = 5 };

struct Global {
  std::string algebra = "A1";
  int rank = 1;
  std::string brace = "upper";
  std::vector<std::string> graphs;
  std::string json_path;
  std::string cache_dir;
  std::size_t enum_cap = kDefaultEnumerationCap;
  long long window_cap = 1 << 16;
  int m_cap = 1024;
  long long carrier_budget = 4096;

  AlgebraSpec spec() const {
    return AlgebraSpec(parse_family(algebra), rank, brace == "lower" ? Brace::Lower : Brace::Upper);
  }

  Crystal crystal() const {
    const AlgebraSpec s = spec();
    if (!graphs.empty()) {
      std::vector<CrystalGraph> loaded;
      for (const auto& p : graphs) {
        loaded.push_back(load_graph(p));
        if (loaded.back().family != s.family() || loaded.back().rank != s.rank())
          throw BackendUnavailable(p + " describes " + family_name(loaded.back().family) + " rank " +
                                   std::to_string(loaded.back().rank) + ", not " + s.name());
      }
      return Crystal(s, graph_structure(loaded));
    }
    if (s.family() != Family::A1)
      throw BackendUnavailable("no builtin crystal structure for " + family_name(s.family()) +
                               "; pass --crystal-graph FILE once per level B_l needed");
    return Crystal::builtin(s);
  }

  RMatrixOptions rmatrix_options() const {
    RMatrixOptions o;
    o.enumeration_cap = enum_cap;
    o.lru_capacity = 128;
    if (!cache_dir.empty()) {
      o.cache_dir = cache_dir;
      o.use_env_cache_dir = false;
    }
    return o;
  }

  AutomatonOptions automaton_options() const {
    AutomatonOptions o;
    o.rmatrix = rmatrix_options();
    o.window_cap = window_cap;
    o.m_cap = m_cap;
    o.carrier_budget = carrier_budget;
    return o;
  }

  void emit(const std::string& text) const {
    if (json_path.empty()) return;
    std::ofstream out(json_path);
    if (!out) throw Error("cannot write " + json_path);
    out << text << '\n';
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::optional<long long> k;
  std::string background;
  std::string capacities;
  long long capacity_offset = 0;
  std::string state;
  long long steps = 1;
  std::string mode = "carrier";
  std::string M = "auto";
  bool show_carrier = false;
  bool trace = false;
};

long long background_index(const AlgebraSpec& s, const SimulateArgs& a) {
  if (a.background.empty()) return a.k.value_or(0);
  const auto b = parse_element(s, a.background);
  for (long long k = 0; k < 2 * s.d(); ++k)
    if (delta(s, b.l, s.letter_at(k)) == b) return k;
  throw ParseError("'" + a.background + "' is not a background letter of " + s.name(), 0);
}

std::string chain_label(const AlgebraSpec& s, long long k, long long j) {
  std::string label;
  for (long long q = k + j; q > k; --q) label += "S" + std::to_string(s.index_at(q));
  return label;
}

int cmd_simulate(const Global& g, const SimulateArgs& a) {
  const AlgebraSpec spec = g.spec();
  const long long k = background_index(spec, a);
  Automaton au(g.crystal(), g.automaton_options());
  std::optional<CapacityPattern> caps;
  if (!a.capacities.empty()) caps = CapacityPattern::parse(a.capacities, -a.capacity_offset);
  const AutomatonState initial = au.parse_state(a.state, k, caps);
  const long long d = spec.d();
  const bool carrier_mode = a.mode == "carrier" || a.mode == "all";

  std::optional<int> fixed_M;
  if (a.M != "auto") {
    try {
      fixed_M = std::stoi(a.M);
    } catch (const std::exception&) {
      throw ParseError("--M expects 'auto' or a positive integer", 0);
    }
  }
  if (a.steps < 0 && a.mode != "factorized")
    throw ParseError("negative --steps needs --mode factorized", 0);

  std::vector<AutomatonState> rows{initial};
  std::vector<std::string> labels{""};
  std::vector<std::vector<CrystalElement>> carriers{{}};
  std::vector<int> used_M{0};

  if (carrier_mode) {
    AutomatonState s = au.normalize(initial);
    for (long long t = 0; t < a.steps; ++t) {
      int M = fixed_M.value_or(0);
      if (!fixed_M) au.evolve_T(s, &M);
      auto r = au.evolve_carrier(s, M);
      s = r.state;
      rows.push_back(s);
      labels.push_back("");
      carriers.push_back(std::move(r.carriers));
      used_M.push_back(M);
    }
  } else if (a.mode == "factorized") {
    AutomatonState s = au.normalize(initial);
    const long long n = a.steps < 0 ? -a.steps : a.steps;
    for (long long t = 0; t < n; ++t) {
      if (a.trace && a.steps > 0) {
        const auto chain = au.factorized_chain(s);
        for (long long j = 0; j < d; ++j) {
          rows.push_back(chain[static_cast<std::size_t>(j)]);
          labels.push_back(chain_label(spec, s.k, j + 1));
        }
      }
      s = au.evolve_T_factorized(s, a.steps < 0 ? -1 : 1);
      rows.push_back(s);
      labels.push_back(a.trace ? "T" : "");
      carriers.emplace_back();
      used_M.push_back(0);
    }
    carriers.resize(rows.size());
    used_M.resize(rows.size());
  } else if (a.mode == "fine") {
    for (long long m = 1; m <= a.steps * d; ++m) {
      rows.push_back(au.evolve_fine(initial, k + m));
      labels.push_back(a.trace ? "T" + std::to_string(k + m) : "");
    }
    carriers.resize(rows.size());
    used_M.resize(rows.size());
  } else {
    throw ParseError("unknown mode '" + a.mode + "'", 0);
  }

  if (a.mode == "all") {
    AutomatonState f = au.normalize(initial);
    for (long long t = 1; t <= a.steps; ++t) {
      f = au.evolve_T_factorized(f, 1);
      const auto fine = au.evolve_fine(initial, k + t * d);
      const auto& c = rows[static_cast<std::size_t>(t)];
      if (f != c || fine != c) {
        const auto [lo, hi] = render_range({c, f, fine});
        std::cerr << "modes disagree at step " << t << ":\n  carrier    " << render_row(au, c, lo, hi)
                  << "\n  factorized " << render_row(au, f, lo, hi) << "\n  fine       " << render_row(au, fine, lo, hi)
                  << '\n';
        return kDisagree;
      }
    }
  }

  const auto [lo, hi] = render_range(rows);
  std::size_t width = 0;
  for (const auto& l : labels) width = std::max(width, l.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (width) std::cout << labels[r] << std::string(width - labels[r].size() + 2, ' ');
    std::cout << render_row(au, rows[r], lo, hi) << '\n';
    if (a.show_carrier && !carriers[r].empty()) {
      std::cout << "carrier (M=" << used_M[r] << "):";
      for (const auto& u : carriers[r]) std::cout << ' ' << format_element(spec, u);
      std::cout << '\n';
    }
  }

  if (!g.json_path.empty()) {
    ojson j;
    j["schema"] = 1;
    j["algebra"] = family_name(spec.family());
    j["rank"] = spec.rank();
    j["k"] = k;
    j["mode"] = a.mode;
    j["range"] = {lo, hi};
    auto& st = j["steps"] = ojson::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      ojson row;
      row["m"] = r;
      if (!labels[r].empty()) row["label"] = labels[r];
      row["sites"] = render_sites(au, rows[r], lo, hi);
      auto& cj = row["carrier"] = ojson::array();
      for (const auto& u : carriers[r]) cj.push_back(format_element(spec, u));
      if (used_M[r]) row["M"] = used_M[r];
      st.push_back(row);
    }
    g.emit(j.dump(2));
  }
  return kOk;
}

// ---------------------------------------------------------------- rmatrix

struct RMatrixArgs {
  std::string lhs, rhs;
  std::string mode = "oracle";
  long long k = 0;
  int margin = 1;
};

int cmd_rmatrix(const Global& g, const RMatrixArgs& a) {
  const AlgebraSpec spec = g.spec();
  const TensorElement lhs = parse_tensor(spec, a.lhs);
  const TensorElement rhs = parse_tensor(spec, a.rhs);
  TensorElement x = lhs;
  x.factors.insert(x.factors.end(), rhs.factors.begin(), rhs.factors.end());
  RMatrix r(g.crystal(), g.rmatrix_options());
  if (a.mode != "oracle" && a.mode != "factorized" && a.mode != "both")
    throw ParseError("unknown mode '" + a.mode + "'", 0);

  ojson j;
  j["schema"] = 1;
  j["algebra"] = family_name(spec.family());
  j["rank"] = spec.rank();
  j["input"] = format_tensor(spec, x);
  int code = kOk;

  std::optional<TensorElement> oracle;
  if (a.mode != "factorized") {
    oracle = r.composite(x, lhs.size());
    std::cout << "oracle: " << format_tensor(spec, *oracle) << '\n';
    j["oracle"] = format_tensor(spec, *oracle);
  }
  if (a.mode != "oracle") {
    if (lhs.size() != 1) throw ParseError("factorized mode needs a single element on the left", 0);
    const auto res = r_factorized(r.crystal(), a.k, x, a.margin);
    ojson fj;
    fj["k"] = a.k;
    fj["margin"] = a.margin;
    fj["applicable"] = res.applicable();
    auto& tr = fj["trace"] = ojson::array();
    for (const auto& st : res.steps) {
      std::cout << "S_" << st.color << ": " << format_tensor(spec, st.state) << '\n';
      tr.push_back({{"color", st.color}, {"state", format_tensor(spec, st.state)}});
    }
    if (res.applicable()) {
      std::cout << "P: " << format_tensor(spec, res.transposed) << '\n';
      std::cout << "factorized: " << format_tensor(spec, res.output) << '\n';
      fj["transposed"] = format_tensor(spec, res.transposed);
      fj["output"] = format_tensor(spec, res.output);
      if (oracle && *oracle != res.output) {
        std::cerr << "factorized and oracle results differ\n";
        code = kDisagree;
      }
    } else {
      std::cout << "factorized: " << res.summary() << '\n';
      fj["reason"] = res.summary();
      if (!oracle) code = kFailure;
    }
    j["factorized"] = fj;
  }
  g.emit(j.dump(2));
  return code;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::vector<int> shape;
  long long trials = 200;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<int> margin;
  std::optional<long long> k;
  std::optional<std::uint64_t> replay;
  int l = 2;
  std::vector<int> sizes{1, 1, 1};
  std::vector<int> levels;
  int max_l = 3;
  int max_M = 10;
  int max_sites = 8;
};

int finish(const Global& g, const VerifyReport& rep) {
  const std::string text = rep.to_json();
  std::cout << text << '\n';
  g.emit(text);
  return rep.ok() ? kOk : kFailure;
}

int cmd_verify(const Global& g, const std::string& suite, const VerifyArgs& a) {
  if (suite == "theorem") {
    RMatrix r(g.crystal(), g.rmatrix_options());
    TheoremOptions o;
    o.shape = a.shape;
    o.trials = a.trials;
    o.seed = a.seed;
    o.jobs = a.jobs;
    o.margin = a.margin;
    o.k = a.k;
    o.replay = a.replay;
    o.max_l = a.max_l;
    return finish(g, verify_theorem(r, o));
  }
  if (suite == "tmap") return finish(g, verify_tmap(g.crystal(), a.l));
  if (suite == "yb") {
    if (a.sizes.size() != 3) throw ParseError("--sizes expects three levels", 0);
    RMatrix r(g.crystal(), g.rmatrix_options());
    return finish(g, verify_yb(r, a.sizes[0], a.sizes[1], a.sizes[2]));
  }
  if (suite == "column") {
    ColumnOptions o;
    o.trials = a.trials;
    o.seed = a.seed;
    o.jobs = a.jobs;
    o.max_l = a.max_l;
    o.max_M = a.max_M;
    return finish(g, verify_column(g.crystal(), o));
  }
  if (suite == "corollary") {
    Automaton au(g.crystal(), g.automaton_options());
    CorollaryOptions o;
    o.trials = a.trials;
    o.seed = a.seed;
    o.jobs = a.jobs;
    o.max_l = a.max_l;
    o.max_sites = a.max_sites;
    return finish(g, verify_corollary(au, o));
  }
  if (suite == "admission") {
    const Crystal c = g.crystal();
    std::vector<int> levels = a.levels;
    if (levels.empty()) levels = c.structure().levels();
    if (levels.empty()) levels = {1, 2, 3};
    return finish(g, verify_admission(c, levels));
  }
  throw ParseError("unknown suite '" + suite + "'", 0);
}

// ---------------------------------------------------------------- graph, enumerate

int cmd_graph_check(const Global& g, const std::vector<std::string>& files) {
  std::vector<CrystalGraph> graphs;
  for (const auto& f : files) graphs.push_back(load_graph(f));
  if (graphs.empty()) throw ParseError("no graph files given", 0);
  const AlgebraSpec spec(graphs.front().family, graphs.front().rank,
                         g.brace == "lower" ? Brace::Lower : Brace::Upper);
  const Crystal c(spec, graph_structure(graphs));
  bool ok = true;
  for (const auto& gr : graphs)
    for (const auto& ch : admission_suite(c, gr.l)) {
      std::cout << "B_" << gr.l << ' ' << ch.name << ": " << (ch.passed ? "PASS" : "FAIL") << " (" << ch.checked
                << " checked)";
      if (!ch.passed) std::cout << ": " << ch.detail;
      std::cout << '\n';
      ok = ok && ch.passed;
    }
  return ok ? kOk : kFailure;
}

int cmd_graph_export(const Global& g, int l, const std::string& out) {
  const Crystal c = g.crystal();
  const auto graph = export_graph(c.structure(), l);
  if (out.empty() || out == "-") {
    write_graph(std::cout, graph);
  } else {
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    write_graph(f, graph);
  }
  return kOk;
}

int cmd_enumerate(const Global& g, int l, bool count, bool with_t) {
  const Crystal c = g.crystal();
  const auto all = c.enumerate(l, g.enum_cap);
  if (count) {
    std::cout << all.size() << '\n';
    return kOk;
  }
  for (const auto& b : all) {
    std::cout << format_element(c.spec(), b);
    if (with_t) {
      std::cout << " t=";
      const auto t = c.t_def(b);
      for (std::size_t j = 0; j < t.size(); ++j) std::cout << (j ? "," : "") << t[j];
    }
    std::cout << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton cellular automata and combinatorial R from affine crystals"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--algebra", g.algebra, "A1, A2odd, A2even, B1, C1, D1 or D2")->capture_default_str();
  app.add_option("--rank", g.rank, "rank n")->capture_default_str();
  app.add_option("--brace", g.brace, "choice of the braced index pair")
      ->check(CLI::IsMember({"upper", "lower"}))
      ->capture_default_str();
  app.add_option("--crystal-graph", g.graphs, "graph file for one B_l (repeatable)");
  app.add_option("--emit-json", g.json_path, "write a JSON report here");
  app.add_option("--cache-dir", g.cache_dir, "persist R tables here (default: $CRYSTAL_CA_CACHE_DIR)");
  app.add_option("--enumeration-cap", g.enum_cap, "largest |B_l| enumerated")->capture_default_str();
  app.add_option("--window-cap", g.window_cap, "largest padded window")->capture_default_str();
  app.add_option("--M-cap", g.m_cap, "largest carrier capacity")->capture_default_str();
  app.add_option("--carrier-budget", g.carrier_budget, "sites the carrier may run past the window")
      ->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "evolve a state");
  simulate->add_option("--background-k", sim.k, "background letter a_k");
  simulate->add_option("--background", sim.background, "background letter (alternative to --background-k)");
  simulate->add_option("--capacities", sim.capacities, "periodic capacity list, e.g. 2,2,1");
  simulate->add_option("--capacity-offset", sim.capacity_offset, "pattern entry of the first state site");
  simulate->add_option("--state", sim.state, "sites separated by '.'")->required();
  simulate->add_option("--steps", sim.steps, "time steps")->capture_default_str();
  simulate->add_option("--mode", sim.mode, "carrier, factorized, fine or all")
      ->check(CLI::IsMember({"carrier", "factorized", "fine", "all"}))
      ->capture_default_str();
  simulate->add_option("--M", sim.M, "carrier capacity or auto")->capture_default_str();
  simulate->add_flag("--show-carrier", sim.show_carrier, "print the carrier after each row");
  simulate->add_flag("--trace", sim.trace, "label rows and print the Weyl chain");

  RMatrixArgs rm;
  auto* rmatrix = app.add_subcommand("rmatrix", "image of the combinatorial R");
  rmatrix->add_option("--lhs", rm.lhs, "left factor(s)")->required();
  rmatrix->add_option("--rhs", rm.rhs, "right factor(s)")->required();
  rmatrix->add_option("--mode", rm.mode, "oracle, factorized or both")
      ->check(CLI::IsMember({"oracle", "factorized", "both"}))
      ->capture_default_str();
  rmatrix->add_option("--k", rm.k, "background index of the domain")->capture_default_str();
  rmatrix->add_option("--margin", rm.margin, "lead required of a_k in the left factor")->capture_default_str();

  VerifyArgs va;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "theorem, tmap, yb, column, corollary or admission")
      ->required()
      ->check(CLI::IsMember({"theorem", "tmap", "yb", "column", "corollary", "admission"}));
  verify->add_option("--shape", va.shape, "capacities of the partner tensor")->delimiter(',');
  verify->add_option("--trials", va.trials)->capture_default_str();
  verify->add_option("--seed", va.seed)->capture_default_str();
  verify->add_option("--jobs", va.jobs)->capture_default_str();
  verify->add_option("--margin", va.margin);
  verify->add_option("--k", va.k);
  verify->add_option("--replay", va.replay, "rerun one trial seed from a report");
  verify->add_option("--l", va.l, "level for tmap")->capture_default_str();
  verify->add_option("--sizes", va.sizes, "l,m,k for yb")->delimiter(',');
  verify->add_option("--levels", va.levels, "levels for admission")->delimiter(',');
  verify->add_option("--max-l", va.max_l)->capture_default_str();
  verify->add_option("--max-M", va.max_M)->capture_default_str();
  verify->add_option("--max-sites", va.max_sites)->capture_default_str();

  auto* graph = app.add_subcommand("graph", "crystal graph files");
  graph->require_subcommand(1);
  std::vector<std::string> check_files;
  auto* gcheck = graph->add_subcommand("check", "validate graph files and run the admission suite");
  gcheck->add_option("files", check_files)->required();
  int export_l = 1;
  std::string export_out;
  auto* gexport = graph->add_subcommand("export", "write the builtin graph of B_l");
  gexport->add_option("--l", export_l)->required();
  gexport->add_option("--out", export_out, "file, or - for stdout");

  int enum_l = 1;
  bool enum_count = false, enum_t = false;
  auto* enumerate = app.add_subcommand("enumerate", "list B_l");
  enumerate->add_option("--l", enum_l)->required();
  enumerate->add_flag("--count", enum_count);
  enumerate->add_flag("--t", enum_t, "print t vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(g, sim);
    if (rmatrix->parsed()) return cmd_rmatrix(g, rm);
    if (verify->parsed()) return cmd_verify(g, suite, va);
    if (gcheck->parsed()) return cmd_graph_check(g, check_files);
    if (gexport->parsed()) return cmd_graph_export(g, export_l, export_out);
    if (enumerate->parsed()) return cmd_enumerate(g, enum_l, enum_count, enum_t);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const BackendUnavailable& e) {
    std::cerr << "backend unavailable: " << e.what() << '\n';
    return kBackend;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCap;
  } catch (const GraphError& e) {
    std::cerr << "graph error: " << e.what() << '\n';
    return kFailure;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

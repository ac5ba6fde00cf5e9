#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "crystal_ca/automaton.hpp"
#include "crystal_ca/backend.hpp"
#include "crystal_ca/crystal.hpp"
#include "crystal_ca/errors.hpp"

using namespace crystal_ca;

namespace {

CrystalGraph from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

std::string message_of(const CrystalGraph& g) {
  try {
    validate_graph_structure(g);
  } catch (const GraphError& e) {
    return e.what();
  }
  return "";
}

bool suite_passes(const Crystal& c, int l) {
  for (const auto& ch : admission_suite(c, l))
    if (!ch.passed) return false;
  return true;
}

std::string a2odd_dir() { return std::string(CRYSTAL_CA_TEST_DATA) + "/a2odd3"; }

}  // namespace

TEST_CASE("export then load reproduces the builtin structure") {
  AlgebraSpec s(Family::A1, 3);
  const auto builtin = builtin_a1(s);
  std::vector<CrystalGraph> graphs;
  for (int l = 1; l <= 3; ++l) {
    std::ostringstream out;
    write_graph(out, export_graph(*builtin, l));
    std::istringstream in(out.str());
    graphs.push_back(parse_graph(in));
  }
  const auto g = graph_structure(graphs);
  CHECK(g->covers(2));
  CHECK(!g->covers(4));
  CHECK(g->fingerprint().rfind("graph-", 0) == 0);
  for (int l = 1; l <= 3; ++l)
    for (const auto& b : enumerate_crystal(s, l))
      for (int i = 0; i <= 3; ++i) {
        CHECK(g->eps(i, b) == builtin->eps(i, b));
        CHECK(g->phi(i, b) == builtin->phi(i, b));
        CHECK(g->e(i, b) == builtin->e(i, b));
        CHECK(g->f(i, b) == builtin->f(i, b));
      }
  const Crystal c(s, g);
  CHECK(suite_passes(c, 2));
  CHECK_THROWS_AS(c.require(4), BackendUnavailable);
}

TEST_CASE("graph parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(from_text("A1 1\n"), "line 1: expected header 'algebra rank l'", GraphError);
  CHECK_THROWS_WITH_AS(from_text("# c\nA1 1 1\n1 x 2\n"), "line 3: malformed color 'x'", GraphError);
  CHECK_THROWS_AS(from_text("A1 1 1\n1 1 3\n"), GraphError);
  CHECK_THROWS_AS(from_text(""), GraphError);
}

TEST_CASE("structural validation names the violated invariant") {
  CHECK(message_of(from_text("A1 1 1\n1 1 2\n2 0 1\n")) == "");
  CHECK(message_of(from_text("A1 1 1\n1 2 2\n2 0 1\n")).find("color") != std::string::npos);
  CHECK(message_of(from_text("A1 1 1\n1 1 1\n2 0 1\n")).find("self loop") != std::string::npos);
  // a missing color is structurally fine; the admission suite rejects it
  const auto partial = from_text("A1 1 1\n1 1 2\n");
  CHECK(message_of(partial) == "");
  CHECK(!suite_passes(Crystal(AlgebraSpec(Family::A1, 1), graph_structure({partial})), 1));
  CHECK(message_of(from_text("A1 1 1\n1 1 2\n2 1 1\n")).find("cycle") != std::string::npos);
  CHECK(message_of(from_text("A1 2 1\n1 1 2\n1 1 3\n2 2 3\n3 0 1\n")).find("degree") != std::string::npos);
}

TEST_CASE("admission suite catches a recolored edge") {
  AlgebraSpec s(Family::A1, 2);
  auto g = export_graph(*builtin_a1(s), 2);
  bool caught = false;
  for (std::size_t v = 0; v < g.edges.size() && !caught; ++v) {
    auto mutated = g;
    mutated.edges[v].color = (mutated.edges[v].color + 1) % 3;
    try {
      const Crystal c(s, graph_structure({mutated}));
      caught = !suite_passes(c, 2);
    } catch (const GraphError&) {
      caught = true;
    }
    CHECK(caught);
    caught = false;
  }
}

TEST_CASE("mixed or duplicate graphs are refused") {
  AlgebraSpec s(Family::A1, 1);
  const auto g = export_graph(*builtin_a1(s), 1);
  CHECK_THROWS_AS(graph_structure({g, g}), GraphError);
  const auto h = export_graph(*builtin_a1(AlgebraSpec(Family::A1, 2)), 2);
  CHECK_THROWS_AS(graph_structure({g, h}), GraphError);
}

TEST_CASE("A2odd graphs replay the evolution example") {
  if (!std::filesystem::exists(a2odd_dir() + "/B1.graph")) return;
  std::vector<CrystalGraph> graphs;
  for (int l = 1; l <= 3; ++l) graphs.push_back(load_graph(a2odd_dir() + "/B" + std::to_string(l) + ".graph"));
  const AlgebraSpec s(Family::A2odd, 3);
  const Crystal c(s, graph_structure(graphs));
  for (int l = 1; l <= 3; ++l) CHECK(suite_passes(c, l));

  AutomatonOptions o;
  o.rmatrix.use_env_cache_dir = false;
  Automaton a(c, o);
  const auto p = a.parse_state("3b3b.12b.3.3b1b.2.3b3b.3b3b", 0);
  CHECK(p.capacities.period == std::vector<int>{2, 2, 1, 2, 1, 2, 2});
  auto row = [&](const AutomatonState& st) {
    const std::string r = render_row(a, st, 0, 7);
    return r.substr(4, r.size() - 8);
  };
  const auto chain = a.factorized_chain(p);
  REQUIRE(chain.size() == 6);
  CHECK(row(chain[0]) == "33.12b.3.3b1b.2.33.33");
  CHECK(row(chain[1]) == "22.13b.2.3b1b.2.33.22");
  CHECK(row(chain[2]) == "11.13b.2.3b2b.1.33.11");
  CHECK(row(chain[3]) == "2b2b.3b2b.1b.3b2b.1.33.2b2b");
  CHECK(row(chain[4]) == "3b3b.3b3b.1b.3b2b.1.23.3b3b");
  CHECK(row(chain[5]) == "3b3b.3b3b.1.3b2b.1b.23.3b3b");

  const char* fine[] = {"3b3b.12b.3.3b1b.2.3b3b.3b3b", "3b3b.12b.3b.31b.2.3b3b.3b3b", "3b3b.12b.3b.2b1b.3b.22.3b3b",
                        "3b3b.3b2b.1.2b1b.3b.22.3b3b", "3b3b.3b2b.1.3b2b.1b.22.3b3b", "3b3b.3b3b.1.3b2b.1b.23.3b3b"};
  for (long long m = 0; m <= 5; ++m) CHECK(row(a.evolve_fine(p, m)) == fine[m]);
  CHECK(a.evolve_T_factorized(chain[5], -1) == a.normalize(p));
}

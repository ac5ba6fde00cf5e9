#include "doctest.h"

#include <random>

#include "crystal_ca/automaton.hpp"
#include "crystal_ca/errors.hpp"
#include "generators.hpp"

using namespace crystal_ca;

namespace {

AutomatonOptions quiet() {
  AutomatonOptions o;
  o.rmatrix.use_env_cache_dir = false;
  o.rmatrix.lru_capacity = 128;
  return o;
}

const char* kIntro[] = {"1112211211111111", "1111122121111111", "1111111212211111", "1111111121122111"};

std::string strip(const std::string& row) {
  // "... xyz ..." -> "xyz"
  return row.substr(4, row.size() - 8);
}

// Random state with a periodic capacity pattern, window up to max_sites.
AutomatonState random_state(std::mt19937_64& rng, const Automaton& a, int max_sites, int max_l) {
  CapacityPattern caps{{}, testgen::uniform(rng, -3, 3)};
  const int period = testgen::uniform(rng, 1, 3);
  for (int j = 0; j < period; ++j) caps.period.push_back(testgen::uniform(rng, 1, max_l));
  const long long k = testgen::uniform(rng, 0, static_cast<int>(a.spec().d()) - 1);
  const long long origin = testgen::uniform(rng, -5, 5);
  std::vector<CrystalElement> w;
  const int n = testgen::uniform(rng, 0, max_sites);
  for (int j = 0; j < n; ++j) w.push_back(testgen::random_element(rng, a.spec(), caps.at(origin + j)));
  return a.make_state(k, caps, origin, w);
}

}  // namespace

TEST_CASE("capacity patterns") {
  const auto p = CapacityPattern::parse("2, 2,1", 1);
  CHECK(p.period == std::vector<int>{2, 2, 1});
  CHECK(p.at(1) == 2);
  CHECK(p.at(3) == 1);
  CHECK(p.at(0) == 1);
  CHECK(p.at(-2) == 2);
  CHECK(p.at(-3) == 1);
  CHECK(!p.is_constant());
  CHECK(p.values() == std::vector<int>{1, 2});
  CHECK_THROWS_AS(CapacityPattern::parse("2,,1"), ParseError);
  CHECK_THROWS_AS(CapacityPattern::parse("0"), ParseError);
}

TEST_CASE("state parsing and normalization") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 1)), quiet());
  const auto s = a.parse_state(kIntro[0], 1);
  CHECK(s.window.size() == 16);
  CHECK(s.capacities == CapacityPattern::constant(1));
  const auto n = a.normalize(s);
  CHECK(n.origin == 3);
  CHECK(n.window.size() == 5);
  CHECK(a.site(n, 0) == a.background(n, 0));

  const auto t = a.parse_state("11.2.12", 1);
  CHECK(t.capacities.period == std::vector<int>{2, 1, 2});
  const auto grouped = a.parse_state("112 12", 1, CapacityPattern::parse("2,1,2"));
  CHECK(grouped == t);
  try {
    a.parse_state("1121x", 1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(a.parse_state("11.2", 1, CapacityPattern::constant(2)), ParseError);
}

TEST_CASE("intro figure under T") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 1)), quiet());
  std::vector<AutomatonState> rows{a.parse_state(kIntro[0], 1)};
  for (int t = 0; t < 3; ++t) rows.push_back(a.evolve_T(rows.back()));
  const auto [lo, hi] = render_range(rows);
  for (int t = 0; t < 4; ++t) CHECK(strip(render_row(a, rows[t], lo, hi)) == kIntro[t]);
  // T_M = T_3 for M >= 3, and T_1 differs
  for (int t = 0; t < 3; ++t) {
    for (int M = 3; M <= 8; ++M) CHECK(a.evolve_carrier(rows[t], M).state == rows[t + 1]);
  }
  CHECK(a.evolve_carrier(rows[0], 1).state != rows[1]);
}

TEST_CASE("intro carrier trace") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 1)), quiet());
  const auto r = a.evolve_carrier(a.parse_state(kIntro[0], 1), 3);
  std::vector<std::string> trace;
  for (std::size_t j = 3; j < r.carriers.size(); ++j) trace.push_back(format_element(a.spec(), r.carriers[j]));
  REQUIRE(trace.size() >= 7);
  trace.resize(7);
  CHECK(trace == std::vector<std::string>{"111", "112", "122", "112", "111", "112", "111"});
  CHECK(r.carriers.back() == a.crystal().delta(3, Letter::plain(1)));
}

TEST_CASE("background-only state is fixed and the carrier stays at rest") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 2)), quiet());
  const auto s = a.normalize(a.parse_state("11.1.11", 2, CapacityPattern::parse("2,1", 0)));
  REQUIRE(s.window.empty());
  const auto r = a.evolve_carrier(s, 4);
  CHECK(r.state == s);
  CHECK(r.carriers.size() == 1);
  CHECK(a.evolve_T(s) == s);
  CHECK(a.evolve_T_factorized(s, 3) == s);
  CHECK(a.evolve_fine(s, 5) == s);
  CHECK(render_row(a, s, 0, 0) == "...");
}

TEST_CASE("soliton velocity equals length") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 1)), quiet());
  for (int len = 1; len <= 4; ++len) {
    auto s = a.normalize(a.parse_state(std::string(static_cast<std::size_t>(len), '2'), 1));
    for (int t = 1; t <= 3; ++t) {
      const auto next = a.evolve_T(s);
      CHECK(next.origin == s.origin + len);
      CHECK(next.window == s.window);
      s = next;
    }
  }
  // two separated solitons of lengths 3 and 2
  auto s = a.normalize(a.parse_state("222111111122", 1));
  const auto next = a.evolve_T(s);
  CHECK(strip(render_row(a, next, 0, 15)) == "111222111111221");
}

TEST_CASE("two-soliton overtaking in the intro keeps both solitons") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 1)), quiet());
  auto s = a.normalize(a.parse_state(kIntro[0], 1));
  for (int t = 0; t < 3; ++t) s = a.evolve_T(s);
  // the 2-soliton has passed the 1-soliton
  const auto later = a.evolve_T(a.evolve_T(s));
  CHECK(strip(render_row(a, later, 0, 22)) == "1111111111211112211111");
  CHECK(a.excitations(later) == a.excitations(s));
}

TEST_CASE("factorized evolution agrees with the carrier") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 2; ++n) {
    Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, n)), quiet());
    const long long d = a.spec().d();
    for (int trial = 0; trial < 40; ++trial) {
      const auto s = a.normalize(random_state(rng, a, 6, 3));
      const auto t = a.evolve_T(s);
      CHECK(a.evolve_T_factorized(s, 1) == t);
      CHECK(a.evolve_fine(s, s.k + d) == t);
      CHECK(a.evolve_fine(s, s.k) == s);
      CHECK(a.evolve_T_factorized(s, 0) == s);
      CHECK(a.evolve_T_factorized(t, -1) == s);
      CHECK(a.evolve_T_factorized(s, 2) == a.evolve_T(t));
      CHECK(a.evolve_fine(s, s.k + 2 * d) == a.evolve_T(t));
      CHECK(a.excitations(t) == a.excitations(s));
      const auto chain = a.factorized_chain(s);
      REQUIRE(chain.size() == static_cast<std::size_t>(d + 1));
      CHECK(chain.back() == t);
      CHECK(chain.front().k == s.k + 1);
    }
  }
}

TEST_CASE("factorized evolution agrees with the carrier on every small window") {
  for (int n = 1; n <= 2; ++n) {
    Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, n)), quiet());
    const auto& c = a.crystal();
    const long long d = a.spec().d();
    for (int l = 1; l <= 2; ++l) {
      const auto sites = c.enumerate(l);
      for (long long k = 0; k < d; ++k)
        for (int len = 1; len <= 3; ++len) {
          std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
          for (;;) {
            std::vector<CrystalElement> w;
            for (auto j : idx) w.push_back(sites[j]);
            const auto s = a.normalize(a.make_state(k, CapacityPattern::constant(l), 0, w));
            const auto t = a.evolve_T(s);
            CHECK(a.evolve_T_factorized(s, 1) == t);
            CHECK(a.evolve_fine(s, k + d) == t);
            CHECK(a.evolve_T_factorized(t, -1) == s);
            CHECK(a.excitations(t) == a.excitations(s));
            std::size_t p = 0;
            while (p < idx.size() && ++idx[p] == sites.size()) idx[p++] = 0;
            if (p == idx.size()) break;
          }
        }
    }
  }
}

TEST_CASE("weyl_s path agrees with e_max on small windows") {
  std::mt19937_64 rng(77);
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 2)), quiet());
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = a.normalize(random_state(rng, a, 5, 3));
    const auto raised = a.weyl_step(s, true);
    // e^max on a background-padded tensor is S whenever the pad absorbs the carry
    TensorElement t;
    for (long long j = s.origin - 12; j < s.end() + 12; ++j) t.factors.push_back(a.site(s, j));
    const auto w = a.crystal().weyl_s(a.spec().index_at(s.k + 1), t);
    AutomatonState viaS{s.k + 1, s.capacities, s.origin - 12, w.factors};
    CHECK(a.normalize(viaS) == raised);
    CHECK(a.weyl_step(raised, false) == s);
  }
}

TEST_CASE("vertex steps") {
  const auto c = Crystal::builtin(AlgebraSpec(Family::A1, 2));
  const auto b = parse_element(c.spec(), "1123");
  for (int i = 0; i <= 2; ++i) {
    const int e = c.eps(i, b);
    const auto big = vertex_step(c, i, e + 2, b);
    CHECK(big.b == b);
    CHECK(big.s == c.phi(i, b) + 2);
    const auto zero = vertex_step(c, i, 0, b);
    CHECK(zero.b == c.e_max(i, b));
    CHECK(zero.s == c.phi(i, b));
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = testgen::random_tensor(rng, c.spec(), testgen::random_shape(rng, 4, 3));
    const int i = testgen::uniform(rng, 0, 2);
    const int s0 = testgen::uniform(rng, 0, 4);
    const auto row = vertex_row(c, i, s0, t);
    CHECK(row.first == c.e_pow(i, t, std::max(0, c.eps(i, t) - s0)));
  }
}

TEST_CASE("column diagrams") {
  const auto c = Crystal::builtin(AlgebraSpec(Family::A1, 3));
  const auto ex = column_diagram_check(c, 3, parse_element(c.spec(), "111223"), parse_element(c.spec(), "344"));
  CHECK(ex.consistent);
  CHECK(ex.column.back() == parse_element(c.spec(), "334"));
  for (long long k = 0; k < 4; ++k) {
    const Letter a = c.spec().letter_at(k);
    CHECK(column_diagram_check(c, k, c.delta(5, a), c.delta(2, a)).consistent);
  }
  CHECK_THROWS_AS(column_diagram_check(c, 3, parse_element(c.spec(), "11223"), parse_element(c.spec(), "344"), 2),
                  DomainError);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testgen::uniform(rng, 1, 3);
    const auto cc = Crystal::builtin(AlgebraSpec(Family::A1, n));
    const long long k = testgen::uniform(rng, 0, n);
    const int l = testgen::uniform(rng, 1, 3);
    const auto b = testgen::random_element(rng, cc.spec(), l);
    CrystalElement u;
    const int M = testgen::uniform(rng, l + 1, 10);
    if (!testgen::random_dominated(rng, cc.spec(), M, cc.spec().letter_at(k).index, l, u)) continue;
    const auto r = column_diagram_check(cc, k, u, b, l);
    CHECK_MESSAGE(r.consistent, r.detail);
  }
}

TEST_CASE("rendering") {
  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 1)), quiet());
  const auto s = a.parse_state("12.2", 1);
  CHECK(render_row(a, s, -1, 3) == "... 1.12.2.11 ...");
  const auto one = a.parse_state("121", 1);
  CHECK(render_row(a, one, 0, 3) == "... 121 ...");
  const auto r = a.evolve_carrier(one, 2);
  const std::string text = render_evolution(a, {one, r.state}, &r.carriers);
  CHECK(text.find("carrier: 11 11 12 11") != std::string::npos);
}

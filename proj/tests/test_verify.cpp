#include "doctest.h"

#include "crystal_ca/verify.hpp"
#include "json.hpp"

using namespace crystal_ca;

namespace {

RMatrixOptions no_disk() {
  RMatrixOptions o;
  o.use_env_cache_dir = false;
  o.lru_capacity = 128;
  return o;
}

}  // namespace

TEST_CASE("theorem suite is green and deterministic") {
  RMatrix r(Crystal::builtin(AlgebraSpec(Family::A1, 2)), no_disk());
  TheoremOptions o;
  o.shape = {2, 1};
  o.trials = 60;
  o.seed = 7;
  const auto a = verify_theorem(r, o);
  CHECK(a.ok());
  CHECK(a.trials == 60);
  CHECK(a.passes + a.flagged == 60);
  CHECK(a.passes > 0);
  o.jobs = 3;
  CHECK(verify_theorem(r, o).to_json() == a.to_json());

  const auto j = nlohmann::json::parse(a.to_json());
  CHECK(j["schema"] == 1);
  CHECK(j["suite"] == "theorem");
  CHECK(j["failures"].empty());
}

TEST_CASE("theorem replay runs a single trial") {
  RMatrix r(Crystal::builtin(AlgebraSpec(Family::A1, 1)), no_disk());
  TheoremOptions o;
  o.replay = trial_seed(3, 5);
  const auto rep = verify_theorem(r, o);
  CHECK(rep.trials == 1);
  CHECK(rep.ok());
}

TEST_CASE("theorem at margin zero flags rather than fails") {
  RMatrix r(Crystal::builtin(AlgebraSpec(Family::A1, 3)), no_disk());
  TheoremOptions o;
  o.margin = 0;
  o.trials = 150;
  o.seed = 11;
  const auto rep = verify_theorem(r, o);
  CHECK(rep.ok());
  CHECK(rep.flagged > 0);
}

TEST_CASE("tmap, yb, column, corollary and admission suites") {
  const auto c3 = Crystal::builtin(AlgebraSpec(Family::A1, 3));
  const auto t = verify_tmap(c3, 3);
  CHECK(t.ok());
  CHECK(t.trials == 20);

  RMatrix r(Crystal::builtin(AlgebraSpec(Family::A1, 1)), no_disk());
  const auto yb = verify_yb(r, 1, 1, 1);
  CHECK(yb.ok());
  CHECK(yb.passes == 8);

  ColumnOptions co;
  co.trials = 50;
  CHECK(verify_column(c3, co).ok());

  Automaton a(Crystal::builtin(AlgebraSpec(Family::A1, 2)), [] {
    AutomatonOptions o;
    o.rmatrix = no_disk();
    return o;
  }());
  CorollaryOptions ko;
  ko.trials = 20;
  ko.max_sites = 5;
  const auto k = verify_corollary(a, ko);
  CHECK(k.ok());
  CHECK(k.passes == 20);

  const auto adm = verify_admission(c3, {1, 2});
  CHECK(adm.ok());
  CHECK(adm.trials == 12);
}

TEST_CASE("library generators respect the domain") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n) {
    AlgebraSpec s(Family::A1, n);
    for (int trial = 0; trial < 100; ++trial) {
      const int M = std::uniform_int_distribution<int>(1, 9)(rng);
      const int margin = std::uniform_int_distribution<int>(0, M)(rng);
      const Letter a = s.letter_at(trial);
      const auto u = random_domain_element(s, M, a, margin, rng);
      REQUIRE(u);
      CHECK(is_valid(s, *u));
      CHECK(u->l == M);
      CHECK(domain_lead(s, *u, a) >= margin);
    }
  }
  AlgebraSpec b(Family::A2odd, 3);
  const auto u = random_domain_element(b, 3, Letter::barred(3), 2, rng);
  REQUIRE(u);
  CHECK(domain_lead(b, *u, Letter::barred(3)) >= 2);
  CHECK(!random_domain_element(b, 3, Letter::barred(3), 4, rng));
}

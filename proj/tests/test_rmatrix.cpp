#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "crystal_ca/rmatrix.hpp"
#include "generators.hpp"

using namespace crystal_ca;

namespace {

RMatrixOptions no_disk() {
  RMatrixOptions o;
  o.use_env_cache_dir = false;
  return o;
}

}  // namespace

TEST_CASE("worked A1_3 oracle values") {
  AlgebraSpec s(Family::A1, 3);
  RMatrix r(Crystal::builtin(s), no_disk());
  CHECK(r.elementary(parse_tensor(s, "111223.344")) == parse_tensor(s, "223.111344"));
  CHECK(r.elementary(parse_tensor(s, "11223.344")) == parse_tensor(s, "223.11344"));
}

TEST_CASE("oracle is a bijection, equivariant, and inverse to the swapped table") {
  for (int n = 1; n <= 2; ++n) {
    AlgebraSpec s(Family::A1, n);
    auto c = Crystal::builtin(s);
    RMatrix r(c, no_disk());
    for (int l = 1; l <= 3; ++l)
      for (int m = 1; m <= 3; ++m) {
        const auto t = r.table(l, m);
        std::set<std::int32_t> img(t->image().begin(), t->image().end());
        CHECK(img.size() == t->size());
        CHECK(*img.begin() == 0);
        const auto back = r.table(m, l);
        for (const auto& a : t->left().nodes)
          for (const auto& b : t->right().nodes) {
            const TensorElement x{a, b};
            const auto y = r.elementary(x);
            CHECK(r.elementary(y) == x);
            for (int i = 0; i <= n; ++i) {
              const auto ex = c.e(i, x);
              const auto ey = c.e(i, y);
              REQUIRE(ex.has_value() == ey.has_value());
              if (ex) CHECK(r.elementary(*ex) == *ey);
            }
            // R (sigma (x) sigma) = (sigma (x) sigma) R
            CHECK(r.elementary(c.sigma(x)) == c.sigma(y));
          }
        (void)back;
      }
  }
}

TEST_CASE("all delta anchors are fixed") {
  AlgebraSpec s(Family::A1, 3);
  auto c = Crystal::builtin(s);
  RMatrix r(c, no_disk());
  for (const Letter& a : s.background_letters())
    CHECK(r.elementary(TensorElement{c.delta(4, a), c.delta(2, a)}) == TensorElement{c.delta(2, a), c.delta(4, a)});
}

TEST_CASE("R on equal capacities is the identity") {
  AlgebraSpec s(Family::A1, 2);
  RMatrix r(Crystal::builtin(s), no_disk());
  const auto t = r.table(2, 2);
  for (std::size_t v = 0; v < t->size(); ++v) CHECK(t->image()[v] == static_cast<std::int32_t>(v));
}

TEST_CASE("composite R is independent of threading order") {
  std::mt19937_64 rng(4242);
  AlgebraSpec s(Family::A1, 2);
  RMatrix r(Crystal::builtin(s), no_disk());
  for (int trial = 0; trial < 200; ++trial) {
    auto shape = testgen::random_shape(rng, 4, 3);
    shape.push_back(testgen::uniform(rng, 1, 3));
    const auto x = testgen::random_tensor(rng, s, shape);
    for (std::size_t split = 1; split < x.size(); ++split)
      CHECK(r.composite(x, split, ThreadOrder::RightOfFirstBlockFirst) ==
            r.composite(x, split, ThreadOrder::LeftOfSecondBlockFirst));
  }
  // single factors reduce to the elementary map
  const auto x = parse_tensor(s, "1123.23");
  CHECK(r.composite(x, 1) == r.elementary(x));
}

TEST_CASE("Yang-Baxter small sizes") {
  AlgebraSpec s1(Family::A1, 1);
  RMatrix r1(Crystal::builtin(s1), no_disk());
  CHECK(yang_baxter_check(r1, 1, 1, 1) == 8);
  CHECK(yang_baxter_check(r1, 2, 1, 2) == 18);
  AlgebraSpec s2(Family::A1, 2);
  RMatrix r2(Crystal::builtin(s2), no_disk());
  CHECK(yang_baxter_check(r2, 2, 1, 1) == 54);
}

TEST_CASE("domain predicate") {
  AlgebraSpec s(Family::A1, 3);
  CHECK(in_domain(s, parse_element(s, "111223"), {Letter::plain(1), 1}));
  CHECK(!in_domain(s, parse_element(s, "111223"), {Letter::plain(1), 2}));
  CHECK(!in_domain(s, parse_element(s, "1122"), {Letter::plain(1), 1}));
  CHECK(in_domain(s, parse_element(s, "111111"), {Letter::plain(1), 6}));

  AlgebraSpec b(Family::A2odd, 3);
  const auto u = parse_element(b, "3b3b3b3b2");
  CHECK(domain_lead(b, u, Letter::barred(3)) == 3);
  CHECK(domain_lead(b, u, Letter::plain(3)) == -5);
}

TEST_CASE("worked A1_3 factorized replay") {
  AlgebraSpec s(Family::A1, 3);
  auto c = Crystal::builtin(s);
  const auto res = r_factorized(c, 3, parse_tensor(s, "111223.344"), 1);
  CHECK(res.applicable());
  REQUIRE(res.steps.size() == 3);
  CHECK(res.steps[0].color == 0);
  CHECK(res.steps[1].color == 3);
  CHECK(res.steps[2].color == 2);
  CHECK(res.steps[0].state == parse_tensor(s, "112234.344"));
  CHECK(res.steps[1].state == parse_tensor(s, "112234.334"));
  CHECK(res.steps[2].state == parse_tensor(s, "112224.334"));
  CHECK(res.output == parse_tensor(s, "223.111344"));
}

TEST_CASE("worked A1_3 negative control is flagged") {
  AlgebraSpec s(Family::A1, 3);
  auto c = Crystal::builtin(s);
  const auto res = r_factorized(c, 3, parse_tensor(s, "11223.344"), 1);
  CHECK(!res.applicable());
  CHECK(res.output == parse_tensor(s, "233.11244"));
  CHECK(res.status == FactorizedResult::Status::OutsideDomain);
  const auto res0 = r_factorized(c, 3, parse_tensor(s, "11223.344"), 0);
  CHECK(res0.status == FactorizedResult::Status::SideConditionFailed);
  CHECK(!res0.failures.empty());
}

TEST_CASE("boundary: delta background passes through") {
  AlgebraSpec s(Family::A1, 2);
  auto c = Crystal::builtin(s);
  for (long long k = 0; k <= s.d(); ++k) {
    const Letter a = s.letter_at(k);
    const TensorElement in{c.delta(9, a), c.delta(2, a), c.delta(1, a)};
    const auto res = r_factorized(c, k, in, 3);
    CHECK(res.applicable());
    CHECK(res.output == TensorElement{c.delta(2, a), c.delta(1, a), c.delta(9, a)});
  }
}

TEST_CASE("disk cache round trip and corruption recovery") {
  const auto dir = std::filesystem::temp_directory_path() / "crystal_ca_cache_test";
  std::filesystem::remove_all(dir);
  AlgebraSpec s(Family::A1, 2);
  RMatrixOptions o;
  o.use_env_cache_dir = false;
  o.cache_dir = dir.string();
  std::vector<std::int32_t> reference;
  {
    RMatrix r(Crystal::builtin(s), o);
    reference = r.table(3, 2)->image();
    CHECK(r.stats().built == 1);
    CHECK(std::filesystem::exists(r.cache_file(3, 2)));
  }
  std::string path;
  {
    RMatrix r(Crystal::builtin(s), o);
    CHECK(r.table(3, 2)->image() == reference);
    CHECK(r.stats().loaded == 1);
    CHECK(r.stats().built == 0);
    path = r.cache_file(3, 2);
  }
  {
    // flip one byte in the payload
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('\x7f');
  }
  {
    RMatrix r(Crystal::builtin(s), o);
    CHECK(r.table(3, 2)->image() == reference);
    CHECK(r.stats().rejected_files == 1);
    CHECK(r.stats().built == 1);
  }
  {
    RMatrix r(Crystal::builtin(s), o);
    CHECK(r.table(3, 2)->image() == reference);
    CHECK(r.stats().loaded == 1);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("LRU keeps the table count bounded") {
  AlgebraSpec s(Family::A1, 1);
  RMatrixOptions o = no_disk();
  o.lru_capacity = 2;
  RMatrix r(Crystal::builtin(s), o);
  r.table(1, 2);
  r.table(2, 1);
  r.table(1, 3);
  r.table(1, 2);
  CHECK(r.stats().built == 4);
  r.table(1, 2);
  CHECK(r.stats().hits == 1);
}

TEST_CASE("domain membership transfers through R with slack") {
  // u (x) x -> y (x) v moves at most l units of weight, so the lead drops by at most 2l
  for (int n = 1; n <= 3; ++n) {
    AlgebraSpec s(Family::A1, n);
    const auto c = Crystal::builtin(s);
    RMatrix r(c, no_disk());
    for (int M = 4; M <= 7; ++M)
      for (int l = 1; l <= 2; ++l)
        for (int k = 0; k <= n; ++k) {
          const Letter a = s.letter_at(k);
          for (int margin = 0; margin <= 2; ++margin) {
            long long tried = 0;
            for (const auto& u : c.enumerate(M)) {
              if (!in_domain(s, u, {a, margin + 2 * l})) continue;
              for (const auto& x : c.enumerate(l)) {
                const auto out = r.elementary(TensorElement{u, x});
                CHECK(in_domain(s, out[1], {a, margin}));
                ++tried;
              }
            }
            if (M >= margin + 2 * l) CHECK(tried > 0);
          }
        }
  }
}

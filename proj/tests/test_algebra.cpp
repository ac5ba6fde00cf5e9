#include "doctest.h"

#include <set>

#include "crystal_ca/algebra.hpp"

using namespace crystal_ca;

namespace {

const Family kFamilies[] = {Family::A1, Family::A2odd, Family::A2even, Family::B1,
                            Family::C1, Family::D1,    Family::D2};

std::vector<int> seq_i(const AlgebraSpec& s) {
  std::vector<int> out;
  for (int k = s.d(); k >= 1; --k) out.push_back(s.index_at(k));
  return out;
}

}  // namespace

TEST_CASE("A1_3 translation data") {
  AlgebraSpec s(Family::A1, 3);
  CHECK(s.d() == 3);
  for (int j = 0; j <= 3; ++j) {
    if (j >= 1) CHECK(s.index_at(j) == (4 - j) % 4);
    CHECK(s.letter_at(j) == Letter::plain((4 - j) % 4 == 0 ? 4 : (4 - j) % 4));
  }
  CHECK(s.index_at(4) == 0);
  CHECK(s.sigma_index(0) == 3);
  CHECK(s.sigma_index(1) == 0);
}

TEST_CASE("A1_1 index extension alternates") {
  AlgebraSpec s(Family::A1, 1);
  CHECK(s.d() == 1);
  CHECK(s.index_at(1) == 1);
  CHECK(s.index_at(2) == 0);
  CHECK(s.index_at(3) == 1);
  CHECK(s.index_at(0) == 0);
  CHECK(s.index_at(-1) == 1);
}

TEST_CASE("A2odd_3 translation data, upper and lower") {
  AlgebraSpec s(Family::A2odd, 3);
  CHECK(s.d() == 5);
  CHECK(seq_i(s) == std::vector<int>{2, 0, 1, 2, 3});
  const std::vector<Letter> a{Letter::barred(3), Letter::barred(2), Letter::plain(1),
                              Letter::plain(2),  Letter::plain(3),  Letter::barred(3)};
  for (int j = 0; j <= 5; ++j) CHECK(s.letter_at(5 - j) == a[static_cast<std::size_t>(j)]);

  AlgebraSpec lo(Family::A2odd, 3, Brace::Lower);
  CHECK(seq_i(lo) == std::vector<int>{2, 1, 0, 2, 3});
  CHECK(lo.letter_at(3) == Letter::barred(1));
}

TEST_CASE("C1 i-sequence") {
  AlgebraSpec s(Family::C1, 4);
  CHECK(s.d() == 8);
  CHECK(seq_i(s) == std::vector<int>{3, 2, 1, 0, 1, 2, 3, 4});
}

TEST_CASE("d per family") {
  const int n = 5;
  CHECK(AlgebraSpec(Family::A1, n).d() == n);
  CHECK(AlgebraSpec(Family::A2odd, n).d() == 2 * n - 1);
  CHECK(AlgebraSpec(Family::A2even, n).d() == 2 * n);
  CHECK(AlgebraSpec(Family::B1, n).d() == 2 * n - 1);
  CHECK(AlgebraSpec(Family::C1, n).d() == 2 * n);
  CHECK(AlgebraSpec(Family::D1, n).d() == 2 * n - 2);
  CHECK(AlgebraSpec(Family::D2, n).d() == 2 * n);
}

TEST_CASE("index and letter extension laws") {
  for (Family f : kFamilies) {
    for (int n = minimum_rank(f); n <= minimum_rank(f) + 2; ++n) {
      for (Brace br : {Brace::Upper, Brace::Lower}) {
        AlgebraSpec s(f, n, br);
        CAPTURE(s.name());
        const long long d = s.d();
        const long long period = d * s.sigma_order();
        std::set<Letter> letters;
        for (long long k = -3 * d; k <= 3 * d; ++k) {
          CHECK(s.index_at(k + d) == s.sigma_inverse_index(s.index_at(k)));
          CHECK(s.letter_at(k + d) == s.sigma_inverse_letter(s.letter_at(k)));
          CHECK(s.index_at(k + period) == s.index_at(k));
          letters.insert(s.letter_at(k));
        }
        const auto bg = s.background_letters();
        CHECK(letters == std::set<Letter>(bg.begin(), bg.end()));
      }
    }
  }
}

TEST_CASE("sigma is a Dynkin automorphism") {
  for (Family f : kFamilies) {
    for (int n = minimum_rank(f); n <= minimum_rank(f) + 3; ++n) {
      AlgebraSpec s(f, n);
      CAPTURE(s.name());
      std::set<int> image;
      for (int i = 0; i <= n; ++i) {
        image.insert(s.sigma_index(i));
        CHECK(s.sigma_inverse_index(s.sigma_index(i)) == i);
        for (int j = 0; j <= n; ++j) CHECK(s.cartan(s.sigma_index(i), s.sigma_index(j)) == s.cartan(i, j));
      }
      CHECK(image.size() == static_cast<std::size_t>(n + 1));
    }
  }
}

TEST_CASE("rank below minimum is rejected") {
  CHECK_THROWS_AS(AlgebraSpec(Family::D1, 3), Error);
  CHECK_THROWS_AS(AlgebraSpec(Family::A1, 0), Error);
  CHECK_THROWS_AS(parse_family("E6"), Error);
}

TEST_CASE("letter text") {
  CHECK(Letter::plain(3).to_string() == "3");
  CHECK(Letter::barred(3).to_string() == "3b");
  CHECK(Letter::plain(12).to_string() == "{12}");
  CHECK(Letter::barred(12).to_string() == "{12}b");
  CHECK(Letter::zero().to_string() == "0");
  CHECK(Letter::empty().to_string() == "e");
}

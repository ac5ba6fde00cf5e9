#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crystal_ca/errors.hpp"

namespace crystal_ca {

/// Non-exceptional affine families.
///   A1 = A^(1)_n, A2odd = A^(2)_{2n-1}, A2even = A^(2)_{2n},
///   B1 = B^(1)_n, C1 = C^(1)_n, D1 = D^(1)_n, D2 = D^(2)_{n+1}.
enum class Family { A1, A2odd, A2even, B1, C1, D1, D2 };

/// Selects the simultaneous upper or lower alternative in the translation data
/// of A2odd, B1 and D1. Irrelevant for the other families.
enum class Brace { Upper, Lower };

std::string family_name(Family f);
Family parse_family(std::string_view name);
int minimum_rank(Family f);

/// A letter labelling a coordinate of B_l.
struct Letter {
  enum class Kind : std::uint8_t { Plain, Barred, Zero, Empty };

  Kind kind = Kind::Plain;
  int index = 0;  // 1-based for Plain/Barred, 0 otherwise

  static constexpr Letter plain(int a) { return {Kind::Plain, a}; }
  static constexpr Letter barred(int a) { return {Kind::Barred, a}; }
  static constexpr Letter zero() { return {Kind::Zero, 0}; }
  static constexpr Letter empty() { return {Kind::Empty, 0}; }

  /// Bar involution; Zero and Empty are fixed.
  Letter bar() const;
  bool is_plain() const { return kind == Kind::Plain; }
  bool is_barred() const { return kind == Kind::Barred; }

  /// `3`, `3b`, `0`, `e`; indices above 9 are braced: `{12}`, `{12}b`.
  std::string to_string() const;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// d, i_1..i_d and a_0..a_d for one algebra.
struct TranslationData {
  int d = 0;
  std::vector<int> i_seq;     // i_seq[j-1] = i_j, 1 <= j <= d
  std::vector<Letter> a_seq;  // a_seq[j] = a_j, 0 <= j <= d
};

/// Family, rank and brace choice together with all static index data derived
/// from them. Immutable after construction.
class AlgebraSpec {
 public:
  AlgebraSpec(Family family, int rank, Brace brace = Brace::Upper);

  Family family() const noexcept { return family_; }
  int rank() const noexcept { return rank_; }
  Brace brace() const noexcept { return brace_; }
  std::string name() const;

  /// |I| = n + 1.
  int index_count() const noexcept { return rank_ + 1; }
  int d() const noexcept { return data_.d; }

  int sigma_index(int i) const;
  int sigma_inverse_index(int i) const;
  /// Order of sigma as a permutation of I.
  int sigma_order() const;

  Letter sigma_letter(Letter a) const;
  Letter sigma_inverse_letter(Letter a) const;

  const TranslationData& translation_data() const noexcept { return data_; }

  /// i_k for any integer k, extended through i_{k+d} = sigma^{-1}(i_k).
  int index_at(long long k) const;
  /// a_k for any integer k, extended through a_{k+d} = sigma^{-1}(a_k).
  Letter letter_at(long long k) const;

  /// The set {a_k | k in Z}, in coordinate order.
  std::vector<Letter> background_letters() const;

  /// Letters of the stored coordinates, in canonical order.
  const std::vector<Letter>& stored_letters() const noexcept { return stored_; }
  /// Letter of the coordinate computed from l (x_0 for A2even/C1, x_empty for D2).
  std::optional<Letter> derived_letter() const;
  std::optional<int> slot_of(Letter a) const;
  bool letter_legal(Letter a) const;

  /// Affine Cartan matrix entry a_{ij}; used to check that sigma is a diagram automorphism.
  int cartan(int i, int j) const;

  friend bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
    return a.family_ == b.family_ && a.rank_ == b.rank_ && a.brace_ == b.brace_;
  }

 private:
  void check_index(int i) const;

  Family family_;
  int rank_;
  Brace brace_;
  TranslationData data_;
  std::vector<Letter> stored_;
};

}  // namespace crystal_ca

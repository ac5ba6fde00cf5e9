#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crystal_ca/algebra.hpp"

namespace crystal_ca {

/// An element of B_l: the fusion level and the stored coordinates, laid out as
/// AlgebraSpec::stored_letters(). Derived coordinates (x_0 for A2even/C1,
/// x_empty for D2) are never stored.
struct CrystalElement {
  int l = 0;
  std::vector<int> x;

  friend bool operator==(const CrystalElement&, const CrystalElement&) = default;
  friend auto operator<=>(const CrystalElement&, const CrystalElement&) = default;
};

/// b_1 (x) ... (x) b_N, N >= 1.
struct TensorElement {
  std::vector<CrystalElement> factors;

  TensorElement() = default;
  explicit TensorElement(std::vector<CrystalElement> f) : factors(std::move(f)) {}
  TensorElement(std::initializer_list<CrystalElement> f) : factors(f) {}

  std::size_t size() const noexcept { return factors.size(); }
  const CrystalElement& operator[](std::size_t j) const { return factors[j]; }
  CrystalElement& operator[](std::size_t j) { return factors[j]; }
  std::vector<int> capacities() const;

  friend bool operator==(const TensorElement&, const TensorElement&) = default;
  friend auto operator<=>(const TensorElement&, const TensorElement&) = default;
};

struct ElementHash {
  std::size_t operator()(const CrystalElement& b) const noexcept;
};

/// Coordinate x_a of b, including derived letters. Zero for letters absent in the family.
int coordinate(const AlgebraSpec& spec, const CrystalElement& b, Letter a);

/// Whether b satisfies the family's coordinate constraints for its level.
bool is_valid(const AlgebraSpec& spec, const CrystalElement& b);

/// Explanation of why b is invalid, empty when valid.
std::string validity_problem(const AlgebraSpec& spec, const CrystalElement& b);

/// delta_l[a]: all l units on letter a.
CrystalElement delta(const AlgebraSpec& spec, int l, Letter a);

/// Letters repeated by multiplicity, e.g. `111223`, `3b3b1b`. The zero letter of
/// C1 is printed x_0 times (so the text length is l - x_0 there).
std::string format_element(const AlgebraSpec& spec, const CrystalElement& b);
/// Factors joined by `.`.
std::string format_tensor(const AlgebraSpec& spec, const TensorElement& t);

/// Inverse of format_element. Whitespace is ignored. When `level` is given the
/// inferred level must match it.
CrystalElement parse_element(const AlgebraSpec& spec, std::string_view text,
                             std::optional<int> level = std::nullopt);
TensorElement parse_tensor(const AlgebraSpec& spec, std::string_view text);

/// Default upper bound on |B_l| for enumeration.
inline constexpr std::size_t kDefaultEnumerationCap = 2'000'000;

/// All elements of B_l in canonical order (descending lexicographic on the
/// stored coordinates). Throws CapExceeded when |B_l| > cap.
std::vector<CrystalElement> enumerate_crystal(const AlgebraSpec& spec, int l,
                                              std::size_t cap = kDefaultEnumerationCap);

/// Total number of stored plus derived units, i.e. the printed letter count.
int letter_count(const AlgebraSpec& spec, const CrystalElement& b);

}  // namespace crystal_ca

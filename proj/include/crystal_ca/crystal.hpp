#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crystal_ca/algebra.hpp"
#include "crystal_ca/backend.hpp"
#include "crystal_ca/element.hpp"

namespace crystal_ca {

/// Vector (t_1, ..., t_d).
using TVector = std::vector<int>;

/// An algebra together with the structure answering single-element queries.
/// Every operation here is a pure function; instances are cheap to copy and
/// safe to share between threads.
class Crystal {
 public:
  Crystal(AlgebraSpec spec, std::shared_ptr<const CrystalStructure> structure);

  /// Builtin A1 structure; throws BackendUnavailable for other families.
  static Crystal builtin(const AlgebraSpec& spec);

  const AlgebraSpec& spec() const noexcept { return spec_; }
  const CrystalStructure& structure() const noexcept { return *structure_; }
  std::shared_ptr<const CrystalStructure> structure_ptr() const noexcept { return structure_; }

  bool covers(int l) const { return structure_->covers(l); }
  /// Throws BackendUnavailable unless B_l is covered.
  void require(int l) const;

  // single factor
  int eps(int i, const CrystalElement& b) const;
  int phi(int i, const CrystalElement& b) const;
  std::optional<CrystalElement> e(int i, const CrystalElement& b) const;
  std::optional<CrystalElement> f(int i, const CrystalElement& b) const;
  /// e_i^k b; throws Error if it would be 0.
  CrystalElement e_pow(int i, const CrystalElement& b, int k) const;
  CrystalElement f_pow(int i, const CrystalElement& b, int k) const;
  CrystalElement e_max(int i, const CrystalElement& b) const;
  CrystalElement f_max(int i, const CrystalElement& b) const;
  CrystalElement weyl_s(int i, const CrystalElement& b) const;

  // tensors, Kashiwara's convention: e goes left iff phi(b1) >= eps(b2)
  int eps(int i, const TensorElement& t) const;
  int phi(int i, const TensorElement& t) const;
  std::optional<TensorElement> e(int i, const TensorElement& t) const;
  std::optional<TensorElement> f(int i, const TensorElement& t) const;
  TensorElement e_pow(int i, const TensorElement& t, int k) const;
  TensorElement f_pow(int i, const TensorElement& t, int k) const;
  TensorElement e_max(int i, const TensorElement& t) const;
  TensorElement f_max(int i, const TensorElement& t) const;
  TensorElement weyl_s(int i, const TensorElement& t) const;

  /// Coordinate permutation of the diagram automorphism.
  CrystalElement sigma(const CrystalElement& b) const;
  CrystalElement sigma_inverse(const CrystalElement& b) const;
  TensorElement sigma(const TensorElement& t) const;
  TensorElement sigma_inverse(const TensorElement& t) const;

  /// S_{i_{k+1}} ... S_{i_{k+d}} b, the rightmost applied first.
  CrystalElement sigma_via_weyl(const CrystalElement& b, long long k = 0) const;
  TensorElement sigma_via_weyl(const TensorElement& t, long long k = 0) const;

  CrystalElement delta(int l, Letter a) const { return crystal_ca::delta(spec_, l, a); }

  /// t^{(shift)}: entry j is phi_{i_{shift+j}}(e^max_{i_{shift+j-1}} ... e^max_{i_{shift+1}} b).
  TVector t_def(const CrystalElement& b, long long shift = 0) const;
  TVector t_def(const TensorElement& t, long long shift = 0) const;
  /// Coordinate formula for t on B_l (shift 0).
  TVector t_closed(const CrystalElement& b) const;

  std::vector<CrystalElement> enumerate(int l, std::size_t cap = kDefaultEnumerationCap) const {
    return enumerate_crystal(spec_, l, cap);
  }

 private:
  AlgebraSpec spec_;
  std::shared_ptr<const CrystalStructure> structure_;
};

/// One row of the admission suite.
struct AdmissionCheck {
  std::string name;
  bool passed = true;
  long long checked = 0;
  std::string detail;  // first counterexample
};

/// Necessary conditions every correct structure satisfies on B_l:
/// delta chain, e^max chain to delta_l[a_d], t_def = t_closed with
/// injectivity, sigma intertwining with the letter action, S_i^2 = id,
/// and e/f inverse pairs with eps/phi counting.
std::vector<AdmissionCheck> admission_suite(const Crystal& crystal, int l);

}  // namespace crystal_ca

#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "crystal_ca/crystal.hpp"

namespace crystal_ca {

/// B_l with elements numbered in canonical order and all operators tabulated.
struct IndexedCrystal {
  int l = 0;
  std::vector<CrystalElement> nodes;
  std::unordered_map<CrystalElement, int, ElementHash> index;
  // [color][node]; -1 marks 0
  std::vector<std::vector<int>> e, f, eps, phi;

  std::size_t size() const noexcept { return nodes.size(); }
  int find(const CrystalElement& b) const;

  static IndexedCrystal build(const Crystal& c, int l, std::size_t cap = kDefaultEnumerationCap);
};

/// The combinatorial R: B_l (x) B_m -> B_m (x) B_l, as a flat permutation.
class RTable {
 public:
  RTable(std::shared_ptr<const IndexedCrystal> left, std::shared_ptr<const IndexedCrystal> right,
         std::vector<std::int32_t> image);

  int l() const noexcept { return left_->l; }
  int m() const noexcept { return right_->l; }
  std::size_t size() const noexcept { return image_.size(); }
  const std::vector<std::int32_t>& image() const noexcept { return image_; }
  const IndexedCrystal& left() const noexcept { return *left_; }
  const IndexedCrystal& right() const noexcept { return *right_; }

  /// R(b1 (x) b2) with b1 in B_l, b2 in B_m. Throws OracleError for unreached inputs.
  std::pair<CrystalElement, CrystalElement> apply(const CrystalElement& b1, const CrystalElement& b2) const;

 private:
  std::shared_ptr<const IndexedCrystal> left_, right_;
  std::vector<std::int32_t> image_;  // i1*|B_m|+i2 -> j1*|B_l|+j2, -1 if unreached
};

/// Builds R by equivariant propagation from delta_l[a_0] (x) delta_m[a_0].
std::vector<std::int32_t> build_r_oracle(const IndexedCrystal& left, const IndexedCrystal& right,
                                         const CrystalElement& seed_left, const CrystalElement& seed_right);

/// Order of elementary swaps used to realize B (x) B' -> B' (x) B.
enum class ThreadOrder {
  RightOfFirstBlockFirst,  // push the last factor of B through B', then the next
  LeftOfSecondBlockFirst,  // pull the first factor of B' through B, then the next
};

struct RMatrixOptions {
  std::size_t lru_capacity = 32;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  /// Directory for persisted tables; empty disables. Defaults from CRYSTAL_CA_CACHE_DIR.
  std::string cache_dir;
  bool use_env_cache_dir = true;
};

struct RMatrixStats {
  std::size_t built = 0;
  std::size_t loaded = 0;
  std::size_t hits = 0;
  std::size_t rejected_files = 0;
};

/// Memoizing front end for elementary and composite R.
/// Thread safe; tables are built under a lock and shared afterwards.
class RMatrix {
 public:
  explicit RMatrix(Crystal crystal, RMatrixOptions options = {});

  const Crystal& crystal() const noexcept { return crystal_; }

  std::shared_ptr<const IndexedCrystal> indexed(int l) const;
  std::shared_ptr<const RTable> table(int l, int m) const;

  /// x = b1 (x) b2.
  TensorElement elementary(const TensorElement& x) const;
  /// Swap of factors p and p+1 within a longer tensor.
  void swap_at(TensorElement& x, std::size_t p) const;
  /// x = (first `split` factors) (x) (rest)  ->  rest' (x) first'.
  TensorElement composite(const TensorElement& x, std::size_t split,
                          ThreadOrder order = ThreadOrder::RightOfFirstBlockFirst) const;

  RMatrixStats stats() const;
  std::string cache_file(int l, int m) const;

 private:
  std::shared_ptr<const RTable> load_or_build(int l, int m) const;

  Crystal crystal_;
  RMatrixOptions options_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const IndexedCrystal>> indexed_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const RTable>> tables_;
  mutable std::list<std::pair<int, int>> lru_;
  mutable RMatrixStats stats_;
};

/// Domain B_M[a] with "much greater" read as "ahead by at least margin".
struct DomainSpec {
  Letter a;
  int margin = 1;
};

bool in_domain(const AlgebraSpec& spec, const CrystalElement& u, const DomainSpec& domain);
/// Lead of letter a over the others; in_domain is lead >= margin.
int domain_lead(const AlgebraSpec& spec, const CrystalElement& u, Letter a);

struct FactorizedStep {
  long long j = 0;  // step number, 1..d
  int color = 0;    // i_{k+j}
  int eps = 0;      // of the state before S
  int phi = 0;
  TensorElement state;  // after S
};

struct SideConditionFailure {
  std::string condition;
  long long step = 0;
  int expected = 0;
  int got = 0;
};

struct FactorizedResult {
  enum class Status { Ok, OutsideDomain, SideConditionFailed };

  Status status = Status::Ok;
  long long k = 0;
  TensorElement input;
  std::vector<FactorizedStep> steps;
  TensorElement transposed;  // P applied
  TensorElement output;      // (sigma_B (x) sigma) P S ... S (input)
  std::vector<SideConditionFailure> failures;
  std::string domain_detail;

  bool applicable() const noexcept { return status == Status::Ok; }
  std::string summary() const;
};

/// The factorized form of R on B_M (x) B for background index k.
/// `ux` holds u in B_M as its first factor. Never throws for inapplicable
/// inputs; the status and failures describe why the formula does not apply.
FactorizedResult r_factorized(const Crystal& c, long long k, const TensorElement& ux, int margin);

/// Braid identity on B_l (x) B_m (x) B_kk. Returns the number of elements checked,
/// or throws OracleError naming the first counterexample.
std::size_t yang_baxter_check(const RMatrix& r, int l, int m, int kk);

}  // namespace crystal_ca

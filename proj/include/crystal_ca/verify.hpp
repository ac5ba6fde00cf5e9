#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "crystal_ca/automaton.hpp"
#include "crystal_ca/rmatrix.hpp"

namespace crystal_ca {

struct VerifyFailure {
  std::uint64_t seed = 0;  // trial seed; 0 for exhaustive suites
  std::string input;
  std::string expected;
  std::string got;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::string algebra;
  int rank = 0;
  long long trials = 0;
  long long passes = 0;
  long long flagged = 0;  // trials where the checked formula declared itself inapplicable
  std::vector<VerifyFailure> failures;
  std::vector<std::pair<std::string, long long>> counters;

  bool ok() const noexcept { return failures.empty(); }
  /// Deterministic JSON with a top-level "schema": 1.
  std::string to_json() const;
};

/// Seed of trial number `trial` in a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, long long trial);

struct TheoremOptions {
  std::vector<int> shape;  // empty: random shape per trial
  int max_factors = 3;
  int max_l = 3;
  long long trials = 200;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<int> margin;    // default sum of the shape
  std::optional<long long> k;   // default random in 0..d
  int extra_M = 3;              // M is drawn from [margin, margin + extra_M]
  std::optional<std::uint64_t> replay;  // run exactly this trial seed
};

/// Factorized R against the oracle on random u (x) b with u in B_M[a_k].
VerifyReport verify_theorem(const RMatrix& r, const TheoremOptions& options);

/// t_def = t_closed and injectivity on B_l.
VerifyReport verify_tmap(const Crystal& c, int l);

/// Exhaustive braid identity on B_l (x) B_m (x) B_kk.
VerifyReport verify_yb(const RMatrix& r, int l, int m, int kk);

struct ColumnOptions {
  long long trials = 500;
  std::uint64_t seed = 0;
  int max_l = 3;
  int max_M = 10;
  int jobs = 1;
};

/// Column diagrams on random (u, b) with u ahead by at least l.
VerifyReport verify_column(const Crystal& c, const ColumnOptions& options);

struct CorollaryOptions {
  long long trials = 200;
  std::uint64_t seed = 0;
  int max_sites = 8;
  int max_l = 3;
  int jobs = 1;
};

/// On random states: Weyl factorization = carrier T, fine evolution at k + d
/// = T, T^{-1} T = id, and conserved excitations.
VerifyReport verify_corollary(const Automaton& a, const CorollaryOptions& options);

/// The admission suite on each level.
VerifyReport verify_admission(const Crystal& c, const std::vector<int>& levels);

/// Uniform element of B_l.
CrystalElement random_element(const AlgebraSpec& spec, int l, std::mt19937_64& rng);
/// Element of B_M with letter a ahead by at least margin; nullopt when none exists.
std::optional<CrystalElement> random_domain_element(const AlgebraSpec& spec, int M, Letter a, int margin,
                                                    std::mt19937_64& rng);

}  // namespace crystal_ca

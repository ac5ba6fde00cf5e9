#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crystal_ca/crystal.hpp"
#include "crystal_ca/rmatrix.hpp"

namespace crystal_ca {

/// Capacity l_j of every site j: a periodic list with period[0] at `anchor`.
struct CapacityPattern {
  std::vector<int> period{1};
  long long anchor = 0;

  int at(long long j) const;
  bool is_constant() const;
  /// Distinct capacities that occur.
  std::vector<int> values() const;

  static CapacityPattern constant(int l) { return {{l}, 0}; }
  /// "2,2,1" -> period {2,2,1}. Throws ParseError.
  static CapacityPattern parse(std::string_view text, long long anchor = 0);

  friend bool operator==(const CapacityPattern&, const CapacityPattern&) = default;
};

/// A bi-infinite state: window sites [origin, origin + window.size()), and
/// delta_{l_j}[a_k] everywhere else.
struct AutomatonState {
  long long k = 0;
  CapacityPattern capacities;
  long long origin = 0;
  std::vector<CrystalElement> window;

  long long end() const noexcept { return origin + static_cast<long long>(window.size()); }

  friend bool operator==(const AutomatonState&, const AutomatonState&) = default;
};

struct AutomatonOptions {
  /// Sites the carrier may travel past the window before giving up.
  long long carrier_budget = 4096;
  /// Largest padded window for factorized evolutions.
  long long window_cap = 1 << 16;
  /// Largest carrier capacity tried by evolve_T.
  int m_cap = 1024;
  RMatrixOptions rmatrix;
};

struct CarrierResult {
  AutomatonState state;  // normalized
  long long first_site = 0;
  /// carriers[j] enters site first_site + j; the last entry leaves the window.
  std::vector<CrystalElement> carriers;
};

class Automaton {
 public:
  explicit Automaton(Crystal crystal, AutomatonOptions options = {});

  const Crystal& crystal() const noexcept { return rmatrix_.crystal(); }
  const AlgebraSpec& spec() const noexcept { return rmatrix_.crystal().spec(); }
  const RMatrix& rmatrix() const noexcept { return rmatrix_; }
  const AutomatonOptions& options() const noexcept { return options_; }

  /// Validates the window against the pattern and the family. Not normalized.
  AutomatonState make_state(long long k, CapacityPattern capacities, long long origin,
                            std::vector<CrystalElement> window) const;
  /// Sites separated by `.`; without separators the letters are grouped by the
  /// capacities. No pattern: a constant one if all sites agree, otherwise the
  /// sites' own capacities repeated.
  AutomatonState parse_state(std::string_view text, long long k,
                             std::optional<CapacityPattern> capacities = std::nullopt,
                             long long origin = 0) const;

  CrystalElement background(const AutomatonState& s, long long j) const;
  CrystalElement site(const AutomatonState& s, long long j) const;
  /// Trims background sites at both ends; an empty window gets origin 0.
  AutomatonState normalize(AutomatonState s) const;

  /// One step of T_M.
  CarrierResult evolve_carrier(const AutomatonState& s, int M) const;
  /// T_M with M doubled until two successive results agree.
  AutomatonState evolve_T(const AutomatonState& s, int* stabilized_M = nullptr) const;
  /// T^t through the Weyl chain.
  AutomatonState evolve_T_factorized(const AutomatonState& s, long long t) const;
  /// States after each S of one period, then after sigma_B (d + 1 entries).
  std::vector<AutomatonState> factorized_chain(const AutomatonState& s) const;
  /// The fine evolution for m >= k; background stays a_k.
  AutomatonState evolve_fine(const AutomatonState& s, long long m) const;

  /// One S on the whole state: e^max with color i_{k+1} (raise) or f^max
  /// with color i_k (lower). The background index moves by +-1.
  AutomatonState weyl_step(const AutomatonState& s, bool raise) const;
  /// sigma_B^{+-1} sitewise.
  AutomatonState sigma_step(const AutomatonState& s, bool inverse) const;

  /// Units of every non-background letter summed over the window.
  std::map<Letter, long long> excitations(const AutomatonState& s) const;
  /// Sum over the window of l_j minus the background coordinate.
  long long weight(const AutomatonState& s) const;

 private:
  TensorElement padded(const AutomatonState& s, long long pad) const;

  RMatrix rmatrix_;
  AutomatonOptions options_;
};

struct VertexResult {
  CrystalElement b;
  int s = 0;
};

/// The vertex (i, s, b) -> (b', s').
VertexResult vertex_step(const Crystal& c, int i, int s, const CrystalElement& b);
/// Row of vertices through b_1 ... b_N; returns the bottom row and s_N.
std::pair<TensorElement, int> vertex_row(const Crystal& c, int i, int s0, const TensorElement& t);

struct ColumnCheck {
  bool consistent = true;
  std::vector<CrystalElement> column;  // |b>_0 ... |b>_d
  std::vector<int> outputs;            // s on the right of each row
  std::vector<int> expected;           // t(sigma |u>_d)
  std::string detail;
};

/// Column of vertices with inputs t^{(k)}(u) against the S-chain of u (x) b.
/// Throws DomainError when u is outside B_M[a_k] with the margin.
ColumnCheck column_diagram_check(const Crystal& c, long long k, const CrystalElement& u,
                                 const CrystalElement& b, int margin = 1);

/// Smallest [lo, hi) covering every window; empty when all windows are.
std::pair<long long, long long> render_range(const std::vector<AutomatonState>& states);
/// Sites of [lo, hi) as text; `.` between sites unless every capacity is 1.
std::vector<std::string> render_sites(const Automaton& a, const AutomatonState& s, long long lo, long long hi);
std::string render_row(const Automaton& a, const AutomatonState& s, long long lo, long long hi);
/// One row per state over the common range, optionally followed by carriers.
std::string render_evolution(const Automaton& a, const std::vector<AutomatonState>& states,
                             const std::vector<CrystalElement>* carriers = nullptr);

}  // namespace crystal_ca

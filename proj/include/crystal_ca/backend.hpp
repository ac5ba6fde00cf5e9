#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crystal_ca/algebra.hpp"
#include "crystal_ca/element.hpp"

namespace crystal_ca {

/// Answers the four crystal queries on single elements of B_l.
/// Implementations are immutable and safe for concurrent queries.
class CrystalStructure {
 public:
  virtual ~CrystalStructure() = default;

  virtual Family family() const = 0;
  virtual int rank() const = 0;
  virtual bool covers(int l) const = 0;
  /// Levels available; empty means every level.
  virtual std::vector<int> levels() const = 0;

  virtual int eps(int i, const CrystalElement& b) const = 0;
  virtual int phi(int i, const CrystalElement& b) const = 0;
  virtual std::optional<CrystalElement> e(int i, const CrystalElement& b) const = 0;
  virtual std::optional<CrystalElement> f(int i, const CrystalElement& b) const = 0;

  /// Stable identifier of the structure's data; used to key persisted tables.
  virtual std::string fingerprint() const = 0;
  virtual std::string description() const = 0;
};

/// Closed-form A^(1)_n structure, valid for every level.
std::shared_ptr<const CrystalStructure> builtin_a1(const AlgebraSpec& spec);

struct GraphEdge {
  CrystalElement source;
  int color = 0;
  CrystalElement target;  // f_color(source)
  int line = 0;           // 1-based source line, 0 when built in memory
};

/// Edge list of one B_l, as read from a graph file.
///
/// File format (line oriented, `#` starts a comment):
///
///     A2odd 3 2
///     11 0 11b
///     ...
///
/// The header names the family, rank and level; each further line is
/// `source color target` meaning f_color(source) = target, with elements in
/// the usual text form.
struct CrystalGraph {
  Family family = Family::A1;
  int rank = 1;
  int l = 1;
  std::vector<GraphEdge> edges;
};

CrystalGraph parse_graph(std::istream& in);
CrystalGraph load_graph(const std::string& path);
void write_graph(std::ostream& out, const CrystalGraph& graph);

/// Edges of B_l as produced by `structure`.
CrystalGraph export_graph(const CrystalStructure& structure, int l);

/// Structural checks: colors in range, per-color path structure (in/out degree
/// at most one, no cycles) and node set equal to the enumeration of B_l.
/// Throws GraphError naming the first offending edge.
void validate_graph_structure(const CrystalGraph& graph);

/// Structure answering queries by walking the loaded graphs, one per level.
/// Every graph is validated before it is accepted.
std::shared_ptr<const CrystalStructure> graph_structure(const std::vector<CrystalGraph>& graphs);

}  // namespace crystal_ca

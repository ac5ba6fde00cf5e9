#include "crystal_ca/backend.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fnv.hpp"

namespace crystal_ca {

namespace {

void check_color(int i, int rank) {
  if (i < 0 || i > rank)
    throw Error("color " + std::to_string(i) + " outside I = {0..." + std::to_string(rank) + "}");
}

class BuiltinA1 final : public CrystalStructure {
 public:
  explicit BuiltinA1(int rank) : n_(rank) {}

  Family family() const override { return Family::A1; }
  int rank() const override { return n_; }
  bool covers(int l) const override { return l >= 1; }
  std::vector<int> levels() const override { return {}; }

  // x[j] holds x_{j+1}. e_i moves a unit x_{i+1} -> x_i, e_0 moves x_1 -> x_{n+1}.
  int eps(int i, const CrystalElement& b) const override {
    check_color(i, n_);
    return b.x[static_cast<std::size_t>(i)];
  }
  int phi(int i, const CrystalElement& b) const override {
    check_color(i, n_);
    return b.x[static_cast<std::size_t>(i == 0 ? n_ : i - 1)];
  }
  std::optional<CrystalElement> e(int i, const CrystalElement& b) const override {
    check_color(i, n_);
    const auto from = static_cast<std::size_t>(i);
    const auto to = static_cast<std::size_t>(i == 0 ? n_ : i - 1);
    if (b.x[from] == 0) return std::nullopt;
    CrystalElement out = b;
    --out.x[from];
    ++out.x[to];
    return out;
  }
  std::optional<CrystalElement> f(int i, const CrystalElement& b) const override {
    check_color(i, n_);
    const auto from = static_cast<std::size_t>(i == 0 ? n_ : i - 1);
    const auto to = static_cast<std::size_t>(i);
    if (b.x[from] == 0) return std::nullopt;
    CrystalElement out = b;
    --out.x[from];
    ++out.x[to];
    return out;
  }

  std::string fingerprint() const override { return "builtin-A1-" + std::to_string(n_); }
  std::string description() const override { return "builtin A1 closed form"; }

 private:
  int n_;
};

struct IndexedGraph {
  std::vector<CrystalElement> nodes;
  std::unordered_map<CrystalElement, int, ElementHash> index;
  std::vector<std::vector<int>> next;  // [color][node] -> f target, -1 if none
  std::vector<std::vector<int>> prev;  // [color][node] -> e target, -1 if none
  std::vector<std::vector<int>> eps;
  std::vector<std::vector<int>> phi;
};

std::string edge_label(const AlgebraSpec& spec, const GraphEdge& e) {
  std::ostringstream os;
  if (e.line > 0) os << "line " << e.line << ": ";
  os << "edge '" << format_element(spec, e.source) << ' ' << e.color << ' '
     << format_element(spec, e.target) << "'";
  return os.str();
}

IndexedGraph index_graph(const CrystalGraph& g) {
  const AlgebraSpec spec(g.family, g.rank);
  IndexedGraph ig;
  ig.nodes = enumerate_crystal(spec, g.l);
  for (std::size_t v = 0; v < ig.nodes.size(); ++v) ig.index.emplace(ig.nodes[v], static_cast<int>(v));
  const std::size_t colors = static_cast<std::size_t>(g.rank + 1);
  const std::size_t count = ig.nodes.size();
  ig.next.assign(colors, std::vector<int>(count, -1));
  ig.prev.assign(colors, std::vector<int>(count, -1));
  for (const auto& e : g.edges) {
    const int s = ig.index.at(e.source);
    const int t = ig.index.at(e.target);
    ig.next[static_cast<std::size_t>(e.color)][static_cast<std::size_t>(s)] = t;
    ig.prev[static_cast<std::size_t>(e.color)][static_cast<std::size_t>(t)] = s;
  }
  ig.eps.assign(colors, std::vector<int>(count, 0));
  ig.phi.assign(colors, std::vector<int>(count, 0));
  for (std::size_t c = 0; c < colors; ++c) {
    for (std::size_t v = 0; v < count; ++v) {
      int steps = 0;
      for (int w = ig.prev[c][v]; w >= 0; w = ig.prev[c][static_cast<std::size_t>(w)]) ++steps;
      ig.eps[c][v] = steps;
      steps = 0;
      for (int w = ig.next[c][v]; w >= 0; w = ig.next[c][static_cast<std::size_t>(w)]) ++steps;
      ig.phi[c][v] = steps;
    }
  }
  return ig;
}

class GraphBacked final : public CrystalStructure {
 public:
  GraphBacked(Family family, int rank, std::map<int, IndexedGraph> graphs, std::string fingerprint)
      : family_(family), rank_(rank), graphs_(std::move(graphs)), fingerprint_(std::move(fingerprint)) {}

  Family family() const override { return family_; }
  int rank() const override { return rank_; }
  bool covers(int l) const override { return graphs_.count(l) != 0; }
  std::vector<int> levels() const override {
    std::vector<int> out;
    for (const auto& [l, g] : graphs_) out.push_back(l);
    return out;
  }

  int eps(int i, const CrystalElement& b) const override {
    auto [g, v] = locate(i, b);
    return g.eps[static_cast<std::size_t>(i)][v];
  }
  int phi(int i, const CrystalElement& b) const override {
    auto [g, v] = locate(i, b);
    return g.phi[static_cast<std::size_t>(i)][v];
  }
  std::optional<CrystalElement> e(int i, const CrystalElement& b) const override {
    auto [g, v] = locate(i, b);
    const int w = g.prev[static_cast<std::size_t>(i)][v];
    if (w < 0) return std::nullopt;
    return g.nodes[static_cast<std::size_t>(w)];
  }
  std::optional<CrystalElement> f(int i, const CrystalElement& b) const override {
    auto [g, v] = locate(i, b);
    const int w = g.next[static_cast<std::size_t>(i)][v];
    if (w < 0) return std::nullopt;
    return g.nodes[static_cast<std::size_t>(w)];
  }

  std::string fingerprint() const override { return fingerprint_; }
  std::string description() const override {
    std::string s = "graph files for levels";
    for (const auto& [l, g] : graphs_) s += " " + std::to_string(l);
    return s;
  }

 private:
  std::pair<const IndexedGraph&, std::size_t> locate(int i, const CrystalElement& b) const {
    check_color(i, rank_);
    auto it = graphs_.find(b.l);
    if (it == graphs_.end())
      throw BackendUnavailable("no crystal graph loaded for " + family_name(family_) + " rank " +
                               std::to_string(rank_) + " level " + std::to_string(b.l) +
                               " (pass --crystal-graph for B_" + std::to_string(b.l) + ")");
    auto v = it->second.index.find(b);
    if (v == it->second.index.end()) throw Error("element is not a node of the loaded crystal graph");
    return {it->second, static_cast<std::size_t>(v->second)};
  }

  Family family_;
  int rank_;
  std::map<int, IndexedGraph> graphs_;
  std::string fingerprint_;
};

}  // namespace

std::shared_ptr<const CrystalStructure> builtin_a1(const AlgebraSpec& spec) {
  if (spec.family() != Family::A1)
    throw BackendUnavailable("the builtin crystal structure covers A1 only; " + spec.name() +
                             " needs --crystal-graph files");
  return std::make_shared<BuiltinA1>(spec.rank());
}

CrystalGraph parse_graph(std::istream& in) {
  CrystalGraph g;
  std::optional<AlgebraSpec> spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;

    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!spec) {
      if (tokens.size() != 3) throw GraphError(where + "expected header 'algebra rank l'");
      try {
        g.family = parse_family(tokens[0]);
        g.rank = std::stoi(tokens[1]);
        g.l = std::stoi(tokens[2]);
        spec.emplace(g.family, g.rank);
      } catch (const std::logic_error&) {
        throw GraphError(where + "malformed header");
      } catch (const Error& e) {
        throw GraphError(where + e.what());
      }
      if (g.l < 1) throw GraphError(where + "level must be positive");
      continue;
    }
    if (tokens.size() != 3) throw GraphError(where + "expected 'source color target'");
    GraphEdge e;
    e.line = lineno;
    try {
      e.source = parse_element(*spec, tokens[0], g.l);
      e.target = parse_element(*spec, tokens[2], g.l);
      std::size_t used = 0;
      e.color = std::stoi(tokens[1], &used);
      if (used != tokens[1].size()) throw GraphError(where + "malformed color '" + tokens[1] + "'");
    } catch (const ParseError& err) {
      throw GraphError(where + err.detail());
    } catch (const std::logic_error&) {
      throw GraphError(where + "malformed color '" + tokens[1] + "'");
    }
    g.edges.push_back(std::move(e));
  }
  if (!spec) throw GraphError("graph file has no header");
  return g;
}

CrystalGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open crystal graph file '" + path + "'");
  try {
    return parse_graph(in);
  } catch (const GraphError& e) {
    throw GraphError(path + ": " + e.what());
  }
}

void write_graph(std::ostream& out, const CrystalGraph& graph) {
  const AlgebraSpec spec(graph.family, graph.rank);
  out << family_name(graph.family) << ' ' << graph.rank << ' ' << graph.l << '\n';
  for (const auto& e : graph.edges)
    out << format_element(spec, e.source) << ' ' << e.color << ' ' << format_element(spec, e.target) << '\n';
}

CrystalGraph export_graph(const CrystalStructure& structure, int l) {
  if (!structure.covers(l))
    throw BackendUnavailable("structure does not cover level " + std::to_string(l));
  const AlgebraSpec spec(structure.family(), structure.rank());
  CrystalGraph g{structure.family(), structure.rank(), l, {}};
  for (const auto& b : enumerate_crystal(spec, l)) {
    for (int i = 0; i <= structure.rank(); ++i) {
      if (auto t = structure.f(i, b)) g.edges.push_back({b, i, *t, 0});
    }
  }
  return g;
}

void validate_graph_structure(const CrystalGraph& graph) {
  const AlgebraSpec spec(graph.family, graph.rank);
  const auto nodes = enumerate_crystal(spec, graph.l);
  std::unordered_map<CrystalElement, int, ElementHash> index;
  for (std::size_t v = 0; v < nodes.size(); ++v) index.emplace(nodes[v], static_cast<int>(v));

  const std::size_t colors = static_cast<std::size_t>(graph.rank + 1);
  std::vector<std::vector<int>> next(colors, std::vector<int>(nodes.size(), -1));
  std::vector<std::vector<int>> prev(colors, std::vector<int>(nodes.size(), -1));
  std::vector<bool> touched(nodes.size(), false);

  for (const auto& e : graph.edges) {
    if (e.color < 0 || e.color > graph.rank)
      throw GraphError(edge_label(spec, e) + ": color outside the index set");
    for (const auto* b : {&e.source, &e.target}) {
      if (b->l != graph.l || !is_valid(spec, *b))
        throw GraphError(edge_label(spec, e) + ": endpoint is not an element of B_" + std::to_string(graph.l));
    }
    if (e.source == e.target) throw GraphError(edge_label(spec, e) + ": color-" + std::to_string(e.color) + " cycle (self loop)");
    const int s = index.at(e.source);
    const int t = index.at(e.target);
    auto& out = next[static_cast<std::size_t>(e.color)][static_cast<std::size_t>(s)];
    auto& in = prev[static_cast<std::size_t>(e.color)][static_cast<std::size_t>(t)];
    if (out >= 0) throw GraphError(edge_label(spec, e) + ": out-degree above one for color " + std::to_string(e.color));
    if (in >= 0) throw GraphError(edge_label(spec, e) + ": in-degree above one for color " + std::to_string(e.color));
    out = t;
    in = s;
    touched[static_cast<std::size_t>(s)] = touched[static_cast<std::size_t>(t)] = true;
  }

  for (std::size_t c = 0; c < colors; ++c) {
    std::vector<bool> seen(nodes.size(), false);
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (prev[c][v] >= 0) continue;
      for (int w = static_cast<int>(v); w >= 0; w = next[c][static_cast<std::size_t>(w)]) seen[static_cast<std::size_t>(w)] = true;
    }
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (!seen[v]) {
        for (const auto& e : graph.edges) {
          if (e.color == static_cast<int>(c) && e.source == nodes[v])
            throw GraphError(edge_label(spec, e) + ": color-" + std::to_string(c) + " edges form a cycle");
        }
        throw GraphError("color-" + std::to_string(c) + " edges form a cycle");
      }
    }
  }

  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!touched[v])
      throw GraphError("node set mismatch: element '" + format_element(spec, nodes[v]) +
                       "' of B_" + std::to_string(graph.l) + " has no edges");
  }
}

std::shared_ptr<const CrystalStructure> graph_structure(const std::vector<CrystalGraph>& graphs) {
  if (graphs.empty()) throw GraphError("no crystal graphs given");
  const Family family = graphs.front().family;
  const int rank = graphs.front().rank;
  std::map<int, IndexedGraph> indexed;
  std::uint64_t h = detail::fnv1a64(family_name(family) + std::to_string(rank));
  for (const auto& g : graphs) {
    if (g.family != family || g.rank != rank)
      throw GraphError("crystal graphs mix algebras; one structure per algebra instance");
    if (indexed.count(g.l)) throw GraphError("two crystal graphs given for level " + std::to_string(g.l));
    validate_graph_structure(g);
    indexed.emplace(g.l, index_graph(g));
  }
  for (const auto& [l, ig] : indexed) {
    std::ostringstream os;
    os << l << ':';
    for (std::size_t c = 0; c < ig.next.size(); ++c)
      for (int t : ig.next[c]) os << t << ',';
    h = detail::fnv1a64(os.str(), h);
  }
  return std::make_shared<GraphBacked>(family, rank, std::move(indexed), "graph-" + detail::hex64(h));
}

}  // namespace crystal_ca

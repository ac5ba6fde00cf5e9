#include "crystal_ca/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "crystal_ca/errors.hpp"

namespace crystal_ca {

int CapacityPattern::at(long long j) const {
  const auto n = static_cast<long long>(period.size());
  long long r = (j - anchor) % n;
  if (r < 0) r += n;
  return period[static_cast<std::size_t>(r)];
}

bool CapacityPattern::is_constant() const {
  return std::all_of(period.begin(), period.end(), [&](int l) { return l == period.front(); });
}

std::vector<int> CapacityPattern::values() const {
  std::set<int> s(period.begin(), period.end());
  return {s.begin(), s.end()};
}

CapacityPattern CapacityPattern::parse(std::string_view text, long long anchor) {
  CapacityPattern p{{}, anchor};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    int v = 0;
    bool digits = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1'000'000) throw ParseError("capacity too large", start);
      digits = true;
      ++pos;
    }
    if (!digits) throw ParseError("expected a capacity", start);
    if (v < 1) throw ParseError("capacities must be positive", start);
    p.period.push_back(v);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == text.size()) break;
    if (text[pos] != ',') throw ParseError(std::string("unexpected character '") + text[pos] + "'", pos);
    ++pos;
  }
  return p;
}

Automaton::Automaton(Crystal crystal, AutomatonOptions options)
    : rmatrix_(std::move(crystal), options.rmatrix), options_(std::move(options)) {}

AutomatonState Automaton::make_state(long long k, CapacityPattern capacities, long long origin,
                                     std::vector<CrystalElement> window) const {
  if (capacities.period.empty()) throw Error("empty capacity pattern");
  for (int l : capacities.period)
    if (l < 1) throw Error("capacities must be positive");
  for (std::size_t j = 0; j < window.size(); ++j) {
    const long long pos = origin + static_cast<long long>(j);
    const int want = capacities.at(pos);
    if (window[j].l != want)
      throw Error("site " + std::to_string(pos) + " has capacity " + std::to_string(window[j].l) +
                  " but the pattern gives " + std::to_string(want));
    if (const auto why = validity_problem(spec(), window[j]); !why.empty())
      throw Error("site " + std::to_string(pos) + ": " + why);
  }
  return {k, std::move(capacities), origin, std::move(window)};
}

namespace {

// Start offsets of the letters in `text`, skipping whitespace.
std::vector<std::size_t> letter_starts(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    out.push_back(pos);
    if (text[pos] == '{') {
      const auto close = text.find('}', pos);
      if (close == std::string_view::npos) throw ParseError("unterminated '{'", pos);
      pos = close + 1;
    } else {
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'b') ++pos;
  }
  return out;
}

}  // namespace

AutomatonState Automaton::parse_state(std::string_view text, long long k,
                                      std::optional<CapacityPattern> capacities, long long origin) const {
  std::vector<CrystalElement> sites;
  if (text.find('.') != std::string_view::npos) {
    sites = parse_tensor(spec(), text).factors;
  } else {
    if (spec().derived_letter())
      throw ParseError("sites of " + spec().name() + " must be separated by '.'", 0);
    const CapacityPattern caps = capacities ? *capacities : CapacityPattern::constant(1);
    const auto starts = letter_starts(text);
    if (starts.empty()) throw ParseError("empty state", 0);
    std::size_t used = 0;
    long long j = origin;
    while (used < starts.size()) {
      const auto l = static_cast<std::size_t>(caps.at(j));
      if (used + l > starts.size())
        throw ParseError("last site has fewer than " + std::to_string(l) + " letters", starts[used]);
      const std::size_t from = starts[used];
      const std::size_t to = used + l < starts.size() ? starts[used + l] : text.size();
      try {
        sites.push_back(parse_element(spec(), text.substr(from, to - from)));
      } catch (const ParseError& e) {
        throw ParseError(e.detail(), from + e.position());
      }
      used += l;
      ++j;
    }
  }
  if (!capacities) {
    CapacityPattern p{{}, origin};
    for (const auto& b : sites) p.period.push_back(b.l);
    if (p.is_constant()) p = CapacityPattern::constant(p.period.front());
    capacities = p;
  }
  for (std::size_t j = 0; j < sites.size(); ++j) {
    const int want = capacities->at(origin + static_cast<long long>(j));
    if (sites[j].l != want)
      throw ParseError("site " + std::to_string(j + 1) + " has " + std::to_string(sites[j].l) +
                           " letters but its capacity is " + std::to_string(want),
                       0);
  }
  return make_state(k, *capacities, origin, std::move(sites));
}

CrystalElement Automaton::background(const AutomatonState& s, long long j) const {
  return crystal().delta(s.capacities.at(j), spec().letter_at(s.k));
}

CrystalElement Automaton::site(const AutomatonState& s, long long j) const {
  if (j >= s.origin && j < s.end()) return s.window[static_cast<std::size_t>(j - s.origin)];
  return background(s, j);
}

AutomatonState Automaton::normalize(AutomatonState s) const {
  std::size_t lo = 0, hi = s.window.size();
  while (lo < hi && s.window[lo] == background(s, s.origin + static_cast<long long>(lo))) ++lo;
  while (hi > lo && s.window[hi - 1] == background(s, s.origin + static_cast<long long>(hi) - 1)) --hi;
  if (lo == hi) {
    s.window.clear();
    s.origin = 0;
    return s;
  }
  s.window = std::vector<CrystalElement>(s.window.begin() + static_cast<std::ptrdiff_t>(lo),
                                         s.window.begin() + static_cast<std::ptrdiff_t>(hi));
  s.origin += static_cast<long long>(lo);
  return s;
}

CarrierResult Automaton::evolve_carrier(const AutomatonState& s, int M) const {
  if (M < 1) throw Error("carrier capacity must be positive");
  crystal().require(M);
  const CrystalElement rest = crystal().delta(M, spec().letter_at(s.k));
  CarrierResult out;
  out.first_site = s.origin;
  out.carriers.push_back(rest);
  CrystalElement u = rest;
  std::vector<CrystalElement> next;
  long long j = s.origin;
  long long extra = 0;
  while (j < s.end() || u != rest) {
    if (j >= s.end() && ++extra > options_.carrier_budget)
      throw CapExceeded("carrier B_" + std::to_string(M) + " did not return to its rest state within " +
                        std::to_string(options_.carrier_budget) + " sites past the window");
    const auto r = rmatrix_.elementary(TensorElement{u, site(s, j)});
    next.push_back(r[0]);
    u = r[1];
    out.carriers.push_back(u);
    ++j;
  }
  out.state = normalize({s.k, s.capacities, s.origin, std::move(next)});
  return out;
}

long long Automaton::weight(const AutomatonState& s) const {
  const Letter a = spec().letter_at(s.k);
  long long w = 0;
  for (const auto& b : s.window) w += b.l - coordinate(spec(), b, a);
  return w;
}

AutomatonState Automaton::evolve_T(const AutomatonState& s, int* stabilized_M) const {
  int M = static_cast<int>(std::clamp<long long>(weight(s), 1, options_.m_cap));
  AutomatonState prev = evolve_carrier(s, M).state;
  while (true) {
    if (2LL * M > options_.m_cap)
      throw CapExceeded("T_M did not stabilize up to M = " + std::to_string(options_.m_cap));
    const AutomatonState cur = evolve_carrier(s, 2 * M).state;
    if (cur == prev) {
      if (stabilized_M) *stabilized_M = M;
      return cur;
    }
    prev = cur;
    M *= 2;
  }
}

TensorElement Automaton::padded(const AutomatonState& s, long long pad) const {
  TensorElement t;
  for (long long j = s.origin - pad; j < s.end() + pad; ++j) t.factors.push_back(site(s, j));
  return t;
}

AutomatonState Automaton::weyl_step(const AutomatonState& s, bool raise) const {
  const int i = spec().index_at(raise ? s.k + 1 : s.k);
  const long long k2 = raise ? s.k + 1 : s.k - 1;
  auto run = [&](long long pad) {
    TensorElement t = padded(s, pad);
    t = raise ? crystal().e_max(i, t) : crystal().f_max(i, t);
    return normalize({k2, s.capacities, s.origin - pad, std::move(t.factors)});
  };
  long long pad = 2 + weight(s);
  while (true) {
    if (static_cast<long long>(s.window.size()) + 2 * pad + 2 > options_.window_cap)
      throw CapExceeded("padded window exceeds " + std::to_string(options_.window_cap) + " sites");
    auto a = run(pad);
    if (a == run(pad + 1)) return a;
    pad *= 2;
  }
}

namespace {

// Applies `f` to every site and checks it maps the old background to the new one.
template <class F>
AutomatonState sitewise(const Automaton& au, const AutomatonState& s, long long k2, F f) {
  for (int l : s.capacities.values()) {
    const auto from = au.crystal().delta(l, au.spec().letter_at(s.k));
    if (f(from) != au.crystal().delta(l, au.spec().letter_at(k2)))
      throw Error("sitewise map does not carry the background of B_" + std::to_string(l));
  }
  AutomatonState out{k2, s.capacities, s.origin, {}};
  for (const auto& b : s.window) out.window.push_back(f(b));
  return au.normalize(std::move(out));
}

}  // namespace

AutomatonState Automaton::sigma_step(const AutomatonState& s, bool inverse) const {
  const long long d = spec().d();
  if (inverse)
    return sitewise(*this, s, s.k + d, [&](const CrystalElement& b) { return crystal().sigma_inverse(b); });
  return sitewise(*this, s, s.k - d, [&](const CrystalElement& b) { return crystal().sigma(b); });
}

std::vector<AutomatonState> Automaton::factorized_chain(const AutomatonState& s) const {
  std::vector<AutomatonState> out;
  AutomatonState cur = s;
  for (long long j = 0; j < spec().d(); ++j) {
    cur = weyl_step(cur, true);
    out.push_back(cur);
  }
  out.push_back(sigma_step(cur, false));
  return out;
}

AutomatonState Automaton::evolve_T_factorized(const AutomatonState& s, long long t) const {
  AutomatonState cur = normalize(s);
  const long long d = spec().d();
  for (long long step = 0; step < (t < 0 ? -t : t); ++step) {
    for (long long j = 0; j < d; ++j) cur = weyl_step(cur, t > 0);
    cur = sigma_step(cur, t < 0);
  }
  return cur;
}

AutomatonState Automaton::evolve_fine(const AutomatonState& s, long long m) const {
  if (m < s.k) throw Error("fine evolution needs m >= k");
  AutomatonState cur = normalize(s);
  for (long long j = s.k; j < m; ++j) cur = weyl_step(cur, true);
  return sitewise(*this, cur, s.k, [&](CrystalElement b) {
    for (long long q = m; q > s.k; --q) b = crystal().weyl_s(spec().index_at(q), b);
    return b;
  });
}

std::map<Letter, long long> Automaton::excitations(const AutomatonState& s) const {
  std::vector<Letter> letters = spec().stored_letters();
  if (const auto dl = spec().derived_letter()) letters.push_back(*dl);
  const Letter a = spec().letter_at(s.k);
  std::map<Letter, long long> out;
  for (const auto& b : s.window)
    for (const Letter& x : letters)
      if (x != a)
        if (const int v = coordinate(spec(), b, x)) out[x] += v;
  return out;
}

VertexResult vertex_step(const Crystal& c, int i, int s, const CrystalElement& b) {
  const int e = c.eps(i, b);
  return {c.e_pow(i, b, std::max(0, e - s)), c.phi(i, b) + std::max(0, s - e)};
}

std::pair<TensorElement, int> vertex_row(const Crystal& c, int i, int s0, const TensorElement& t) {
  std::pair<TensorElement, int> out{TensorElement{}, s0};
  for (const auto& b : t.factors) {
    auto v = vertex_step(c, i, out.second, b);
    out.first.factors.push_back(std::move(v.b));
    out.second = v.s;
  }
  return out;
}

ColumnCheck column_diagram_check(const Crystal& c, long long k, const CrystalElement& u,
                                 const CrystalElement& b, int margin) {
  const AlgebraSpec& spec = c.spec();
  if (!in_domain(spec, u, {spec.letter_at(k), margin}))
    throw DomainError("u = " + format_element(spec, u) + " is outside B_M[" + spec.letter_at(k).to_string() +
                      "] at margin " + std::to_string(margin));
  const TVector tu = c.t_def(u, k);
  TensorElement chain{u, b};
  ColumnCheck out;
  out.column.push_back(b);
  std::vector<TensorElement> states;
  for (long long j = 1; j <= spec.d(); ++j) {
    const int i = spec.index_at(k + j);
    chain = c.weyl_s(i, chain);
    states.push_back(chain);
    const auto v = vertex_step(c, i, tu[static_cast<std::size_t>(j - 1)], out.column.back());
    out.column.push_back(v.b);
    out.outputs.push_back(v.s);
  }
  out.expected = c.t_def(c.sigma(states.back()[0]), k);
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (out.column[j + 1] != states[j][1]) {
      out.consistent = false;
      out.detail = "row " + std::to_string(j + 1) + ": vertex gives " + format_element(spec, out.column[j + 1]) +
                   ", S-chain gives " + format_element(spec, states[j][1]);
      return out;
    }
    if (out.outputs[j] != out.expected[j]) {
      out.consistent = false;
      out.detail = "row " + std::to_string(j + 1) + ": right edge " + std::to_string(out.outputs[j]) +
                   ", t(sigma|u>_d) gives " + std::to_string(out.expected[j]);
      return out;
    }
  }
  return out;
}

std::pair<long long, long long> render_range(const std::vector<AutomatonState>& states) {
  bool any = false;
  long long lo = 0, hi = 0;
  for (const auto& s : states) {
    if (s.window.empty()) continue;
    lo = any ? std::min(lo, s.origin) : s.origin;
    hi = any ? std::max(hi, s.end()) : s.end();
    any = true;
  }
  return {lo, hi};
}

std::vector<std::string> render_sites(const Automaton& a, const AutomatonState& s, long long lo, long long hi) {
  std::vector<std::string> out;
  for (long long j = lo; j < hi; ++j) out.push_back(format_element(a.spec(), a.site(s, j)));
  return out;
}

std::string render_row(const Automaton& a, const AutomatonState& s, long long lo, long long hi) {
  if (lo >= hi) return "...";
  bool unit = true;
  for (long long j = lo; j < hi; ++j) unit = unit && s.capacities.at(j) == 1;
  std::string row = "... ";
  const auto sites = render_sites(a, s, lo, hi);
  for (std::size_t j = 0; j < sites.size(); ++j) {
    if (j && !unit) row += '.';
    row += sites[j];
  }
  return row + " ...";
}

std::string render_evolution(const Automaton& a, const std::vector<AutomatonState>& states,
                             const std::vector<CrystalElement>* carriers) {
  const auto [lo, hi] = render_range(states);
  std::string out;
  for (const auto& s : states) out += render_row(a, s, lo, hi) + "\n";
  if (carriers && !carriers->empty()) {
    out += "carrier:";
    for (const auto& u : *carriers) out += " " + format_element(a.spec(), u);
    out += "\n";
  }
  return out;
}

}  // namespace crystal_ca

#include "crystal_ca/element.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace crystal_ca {

namespace {

int plain_barred_sum(const AlgebraSpec& spec, const CrystalElement& b) {
  int s = 0;
  const auto& letters = spec.stored_letters();
  for (std::size_t j = 0; j < letters.size(); ++j)
    if (letters[j].is_plain() || letters[j].is_barred()) s += b.x[j];
  return s;
}

}  // namespace

std::vector<int> TensorElement::capacities() const {
  std::vector<int> out;
  out.reserve(factors.size());
  for (const auto& b : factors) out.push_back(b.l);
  return out;
}

std::size_t ElementHash::operator()(const CrystalElement& b) const noexcept {
  std::size_t h = std::hash<int>{}(b.l);
  for (int v : b.x) h = h * 1000003u ^ std::hash<int>{}(v);
  return h;
}

int coordinate(const AlgebraSpec& spec, const CrystalElement& b, Letter a) {
  if (auto slot = spec.slot_of(a)) return b.x[static_cast<std::size_t>(*slot)];
  auto derived = spec.derived_letter();
  if (!derived || *derived != a) return 0;
  const int rest = b.l - std::accumulate(b.x.begin(), b.x.end(), 0);
  return spec.family() == Family::C1 ? rest / 2 : rest;
}

std::string validity_problem(const AlgebraSpec& spec, const CrystalElement& b) {
  if (b.l < 1) return "level must be positive";
  if (b.x.size() != spec.stored_letters().size()) return "wrong number of coordinates";
  for (int v : b.x)
    if (v < 0) return "negative coordinate";

  const int n = spec.rank();
  const int core = plain_barred_sum(spec, b);
  const int total = std::accumulate(b.x.begin(), b.x.end(), 0);
  switch (spec.family()) {
    case Family::A1:
    case Family::A2odd:
      if (core != b.l) return "coordinates must sum to l";
      break;
    case Family::A2even:
      if (core > b.l) return "coordinates exceed l";
      break;
    case Family::B1: {
      const int x0 = coordinate(spec, b, Letter::zero());
      if (x0 > 1) return "x_0 must be 0 or 1";
      if (total != b.l) return "coordinates must sum to l";
      break;
    }
    case Family::C1:
      if (core > b.l) return "coordinates exceed l";
      if ((b.l - core) % 2 != 0) return "l minus coordinate sum must be even";
      break;
    case Family::D1:
      if (core != b.l) return "coordinates must sum to l";
      if (coordinate(spec, b, Letter::plain(n)) != 0 && coordinate(spec, b, Letter::barred(n)) != 0)
        return "x_n and xbar_n cannot both be nonzero";
      break;
    case Family::D2: {
      const int x0 = coordinate(spec, b, Letter::zero());
      if (x0 > 1) return "x_0 must be 0 or 1";
      if (total > b.l) return "coordinates exceed l";
      break;
    }
  }
  return {};
}

bool is_valid(const AlgebraSpec& spec, const CrystalElement& b) {
  return validity_problem(spec, b).empty();
}

CrystalElement delta(const AlgebraSpec& spec, int l, Letter a) {
  if (!(a.is_plain() || a.is_barred()) || !spec.slot_of(a))
    throw Error("delta_l[" + a.to_string() + "] is not defined for " + spec.name());
  CrystalElement b{l, std::vector<int>(spec.stored_letters().size(), 0)};
  b.x[static_cast<std::size_t>(*spec.slot_of(a))] = l;
  return b;
}

int letter_count(const AlgebraSpec& spec, const CrystalElement& b) {
  int s = std::accumulate(b.x.begin(), b.x.end(), 0);
  if (auto derived = spec.derived_letter()) s += coordinate(spec, b, *derived);
  return s;
}

std::string format_element(const AlgebraSpec& spec, const CrystalElement& b) {
  std::string out;
  const auto derived = spec.derived_letter();
  auto emit = [&](Letter a, int count) {
    const std::string s = a.to_string();
    for (int c = 0; c < count; ++c) out += s;
  };
  for (const Letter& a : spec.stored_letters()) {
    // x_0 (and x_empty) sit between the plain and barred letters.
    if (derived && a.is_barred() && a.index == spec.rank()) emit(*derived, coordinate(spec, b, *derived));
    emit(a, coordinate(spec, b, a));
  }
  return out;
}

std::string format_tensor(const AlgebraSpec& spec, const TensorElement& t) {
  std::string out;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j) out += '.';
    out += format_element(spec, t[j]);
  }
  return out;
}

CrystalElement parse_element(const AlgebraSpec& spec, std::string_view text,
                             std::optional<int> level) {
  CrystalElement b{0, std::vector<int>(spec.stored_letters().size(), 0)};
  int derived_count = 0;
  const auto derived = spec.derived_letter();
  bool any = false;

  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    const std::size_t start = pos;
    Letter a;
    if (c == '0') {
      a = Letter::zero();
      ++pos;
    } else if (c == 'e') {
      a = Letter::empty();
      ++pos;
    } else if (c >= '1' && c <= '9') {
      a = Letter::plain(c - '0');
      ++pos;
    } else if (c == '{') {
      const std::size_t close = text.find('}', pos);
      if (close == std::string_view::npos) throw ParseError("unterminated '{'", pos);
      int v = 0;
      for (std::size_t q = pos + 1; q < close; ++q) {
        if (!std::isdigit(static_cast<unsigned char>(text[q])))
          throw ParseError("expected digits inside braces", q);
        v = v * 10 + (text[q] - '0');
      }
      if (v < 1) throw ParseError("letter index must be positive", pos);
      a = Letter::plain(v);
      pos = close + 1;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    if (pos < text.size() && text[pos] == 'b') {
      if (!a.is_plain()) throw ParseError("only numbered letters can be barred", pos);
      a = a.bar();
      ++pos;
    }
    if (!spec.letter_legal(a))
      throw ParseError("letter " + a.to_string() + " is not used by " + spec.name(), start);
    any = true;
    if (derived && a == *derived) {
      ++derived_count;
    } else {
      ++b.x[static_cast<std::size_t>(*spec.slot_of(a))];
    }
  }
  if (!any) throw ParseError("empty element", 0);

  const int stored = std::accumulate(b.x.begin(), b.x.end(), 0);
  b.l = stored + (spec.family() == Family::C1 ? 2 * derived_count : derived_count);
  if (level && *level != b.l) {
    // A2even/C1/D2 elements may omit derived letters when the level is known.
    if (derived && derived_count == 0 && *level >= b.l) {
      b.l = *level;
    } else {
      throw ParseError("element '" + std::string(text) + "' has level " + std::to_string(b.l) +
                           ", expected " + std::to_string(*level),
                       0);
    }
  }
  if (auto problem = validity_problem(spec, b); !problem.empty())
    throw ParseError("invalid element '" + std::string(text) + "': " + problem, 0);
  return b;
}

TensorElement parse_tensor(const AlgebraSpec& spec, std::string_view text) {
  TensorElement t;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const std::string_view part =
        text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    try {
      t.factors.push_back(parse_element(spec, part));
    } catch (const ParseError& e) {
      throw ParseError(e.detail(), start + e.position());
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return t;
}

std::vector<CrystalElement> enumerate_crystal(const AlgebraSpec& spec, int l, std::size_t cap) {
  if (l < 1) throw Error("level must be positive");
  const std::size_t slots = spec.stored_letters().size();
  const Family fam = spec.family();
  const bool exact = fam == Family::A1 || fam == Family::A2odd || fam == Family::B1 || fam == Family::D1;

  std::vector<CrystalElement> out;
  CrystalElement cur{l, std::vector<int>(slots, 0)};
  // Depth-first, largest value first, so the output is descending lexicographic.
  auto rec = [&](auto&& self, std::size_t slot, int remaining) -> void {
    if (slot + 1 == slots && exact) {
      cur.x[slot] = remaining;
      if (is_valid(spec, cur)) {
        if (out.size() >= cap)
          throw CapExceeded("|B_" + std::to_string(l) + "| exceeds enumeration cap " + std::to_string(cap));
        out.push_back(cur);
      }
      return;
    }
    if (slot == slots) {
      if (is_valid(spec, cur)) {
        if (out.size() >= cap)
          throw CapExceeded("|B_" + std::to_string(l) + "| exceeds enumeration cap " + std::to_string(cap));
        out.push_back(cur);
      }
      return;
    }
    const bool binary = spec.stored_letters()[slot] == Letter::zero();
    for (int v = binary ? std::min(1, remaining) : remaining; v >= 0; --v) {
      cur.x[slot] = v;
      self(self, slot + 1, remaining - v);
    }
    cur.x[slot] = 0;
  };
  rec(rec, 0, l);
  return out;
}

}  // namespace crystal_ca

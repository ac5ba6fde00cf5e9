#include "crystal_ca/algebra.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace crystal_ca {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::A1, "A1"},
    {Family::A2odd, "A2odd"},
    {Family::A2even, "A2even"},
    {Family::B1, "B1"},
    {Family::C1, "C1"},
    {Family::D1, "D1"},
    {Family::D2, "D2"},
}};

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long positive_mod(long long a, long long b) {
  long long r = a % b;
  return r < 0 ? r + b : r;
}

// Table 2 rows are written in the order i_d, ..., i_1 and a_d, ..., a_0;
// the builders below emit exactly that order and reverse at the end.
TranslationData build_translation(Family family, int n, Brace brace) {
  const bool upper = brace == Brace::Upper;
  std::vector<int> is;        // i_d ... i_1
  std::vector<Letter> as;     // a_d ... a_0
  auto P = Letter::plain;
  auto B = Letter::barred;

  switch (family) {
    case Family::A1:
      for (int a = 1; a <= n; ++a) is.push_back(a);
      for (int a = 1; a <= n + 1; ++a) as.push_back(P(a));
      break;
    case Family::A2odd:
    case Family::B1:
      for (int a = n - 1; a >= 2; --a) is.push_back(a);
      if (upper) {
        is.push_back(0);
        is.push_back(1);
      } else {
        is.push_back(1);
        is.push_back(0);
      }
      for (int a = 2; a <= n; ++a) is.push_back(a);
      for (int a = n; a >= 2; --a) as.push_back(B(a));
      as.push_back(upper ? P(1) : B(1));
      for (int a = 2; a <= n; ++a) as.push_back(P(a));
      as.push_back(B(n));
      break;
    case Family::A2even:
    case Family::C1:
    case Family::D2:
      for (int a = n - 1; a >= 1; --a) is.push_back(a);
      is.push_back(0);
      for (int a = 1; a <= n; ++a) is.push_back(a);
      for (int a = n; a >= 1; --a) as.push_back(B(a));
      for (int a = 1; a <= n; ++a) as.push_back(P(a));
      as.push_back(B(n));
      break;
    case Family::D1:
      is.push_back(n);
      for (int a = n - 2; a >= 2; --a) is.push_back(a);
      if (upper) {
        is.push_back(0);
        is.push_back(1);
      } else {
        is.push_back(1);
        is.push_back(0);
      }
      for (int a = 2; a <= n - 2; ++a) is.push_back(a);
      is.push_back(n);
      as.push_back(P(n));
      for (int a = n - 1; a >= 2; --a) as.push_back(B(a));
      as.push_back(upper ? P(1) : B(1));
      for (int a = 2; a <= n - 1; ++a) as.push_back(P(a));
      as.push_back(B(n));
      break;
  }

  TranslationData data;
  data.d = static_cast<int>(is.size());
  data.i_seq.assign(is.rbegin(), is.rend());
  data.a_seq.assign(as.rbegin(), as.rend());
  return data;
}

}  // namespace

std::string family_name(Family f) {
  for (const auto& [fam, name] : kFamilyNames)
    if (fam == f) return std::string(name);
  return "?";
}

Family parse_family(std::string_view name) {
  for (const auto& [fam, fname] : kFamilyNames)
    if (fname == name) return fam;
  throw Error("unknown algebra family '" + std::string(name) +
              "' (expected A1, A2odd, A2even, B1, C1, D1 or D2)");
}

int minimum_rank(Family f) {
  switch (f) {
    case Family::A1: return 1;
    case Family::A2odd: return 3;
    case Family::A2even: return 2;
    case Family::B1: return 3;
    case Family::C1: return 2;
    case Family::D1: return 4;
    case Family::D2: return 2;
  }
  return 1;
}

Letter Letter::bar() const {
  switch (kind) {
    case Kind::Plain: return barred(index);
    case Kind::Barred: return plain(index);
    default: return *this;
  }
}

std::string Letter::to_string() const {
  switch (kind) {
    case Kind::Zero: return "0";
    case Kind::Empty: return "e";
    default: break;
  }
  std::string s = index <= 9 ? std::to_string(index) : "{" + std::to_string(index) + "}";
  if (kind == Kind::Barred) s += 'b';
  return s;
}

AlgebraSpec::AlgebraSpec(Family family, int rank, Brace brace)
    : family_(family), rank_(rank), brace_(brace) {
  if (rank < minimum_rank(family)) {
    throw Error(family_name(family) + " requires rank >= " + std::to_string(minimum_rank(family)) +
                ", got " + std::to_string(rank));
  }
  data_ = build_translation(family, rank, brace);

  const int n = rank;
  for (int a = 1; a <= n; ++a) stored_.push_back(Letter::plain(a));
  if (family == Family::A1) {
    stored_.push_back(Letter::plain(n + 1));
    return;
  }
  if (family == Family::B1 || family == Family::D2) stored_.push_back(Letter::zero());
  for (int a = n; a >= 1; --a) stored_.push_back(Letter::barred(a));
}

std::string AlgebraSpec::name() const {
  return family_name(family_) + "_" + std::to_string(rank_) +
         (brace_ == Brace::Lower ? "_lower" : "");
}

void AlgebraSpec::check_index(int i) const {
  if (i < 0 || i > rank_) {
    throw Error("index " + std::to_string(i) + " outside I = {0..." + std::to_string(rank_) + "}");
  }
}

int AlgebraSpec::sigma_index(int i) const {
  check_index(i);
  const int n = rank_;
  switch (family_) {
    case Family::A1: return static_cast<int>(positive_mod(i - 1, n + 1));
    case Family::A2odd:
    case Family::B1:
      if (i <= 1) return 1 - i;
      return i;
    case Family::D1:
      if (i <= 1) return 1 - i;
      if (i == n) return n - 1;
      if (i == n - 1) return n;
      return i;
    default: return i;
  }
}

int AlgebraSpec::sigma_inverse_index(int i) const {
  check_index(i);
  if (family_ == Family::A1) return static_cast<int>(positive_mod(i + 1, rank_ + 1));
  return sigma_index(i);  // involutions
}

int AlgebraSpec::sigma_order() const {
  switch (family_) {
    case Family::A1: return rank_ + 1;
    case Family::A2odd:
    case Family::B1:
    case Family::D1: return 2;
    default: return 1;
  }
}

Letter AlgebraSpec::sigma_letter(Letter a) const {
  const int n = rank_;
  switch (family_) {
    case Family::A1:
      if (a.is_plain()) return Letter::plain(a.index == 1 ? n + 1 : a.index - 1);
      return a;
    case Family::A2odd:
    case Family::B1:
      if ((a.is_plain() || a.is_barred()) && a.index == 1) return a.bar();
      return a;
    case Family::D1:
      if ((a.is_plain() || a.is_barred()) && (a.index == 1 || a.index == n)) return a.bar();
      return a;
    default: return a;
  }
}

Letter AlgebraSpec::sigma_inverse_letter(Letter a) const {
  if (family_ == Family::A1 && a.is_plain())
    return Letter::plain(a.index == rank_ + 1 ? 1 : a.index + 1);
  return sigma_letter(a);
}

int AlgebraSpec::index_at(long long k) const {
  const long long d = data_.d;
  const long long q = floor_div(k - 1, d);
  const long long r = k - q * d;  // 1 <= r <= d
  int i = data_.i_seq[static_cast<std::size_t>(r - 1)];
  // i_{r + q d} = sigma^{-q}(i_r)
  const long long steps = positive_mod(q, sigma_order());
  for (long long s = 0; s < steps; ++s) i = sigma_inverse_index(i);
  return i;
}

Letter AlgebraSpec::letter_at(long long k) const {
  const long long d = data_.d;
  const long long q = floor_div(k, d);
  const long long r = k - q * d;  // 0 <= r < d
  Letter a = data_.a_seq[static_cast<std::size_t>(r)];
  const long long steps = positive_mod(q, sigma_order());
  for (long long s = 0; s < steps; ++s) a = sigma_inverse_letter(a);
  return a;
}

std::vector<Letter> AlgebraSpec::background_letters() const {
  std::vector<Letter> out;
  for (const Letter& a : stored_)
    if (a.is_plain() || a.is_barred()) out.push_back(a);
  return out;
}

std::optional<Letter> AlgebraSpec::derived_letter() const {
  switch (family_) {
    case Family::A2even:
    case Family::C1: return Letter::zero();
    case Family::D2: return Letter::empty();
    default: return std::nullopt;
  }
}

std::optional<int> AlgebraSpec::slot_of(Letter a) const {
  auto it = std::find(stored_.begin(), stored_.end(), a);
  if (it == stored_.end()) return std::nullopt;
  return static_cast<int>(it - stored_.begin());
}

bool AlgebraSpec::letter_legal(Letter a) const {
  if (slot_of(a)) return true;
  auto derived = derived_letter();
  return derived && *derived == a;
}

int AlgebraSpec::cartan(int i, int j) const {
  check_index(i);
  check_index(j);
  if (i == j) return 2;
  const int n = rank_;
  auto chain = [](int a, int b) { return a - b == 1 || b - a == 1; };
  auto lo = std::min(i, j);
  auto hi = std::max(i, j);

  switch (family_) {
    case Family::A1:
      if (n == 1) return -2;
      if (chain(i, j) || (lo == 0 && hi == n)) return -1;
      return 0;
    case Family::A2odd:
    case Family::B1: {
      // nodes 0 and 1 both attach to 2; chain 2..n; double bond between n-1 and n.
      bool adjacent = (lo <= 1 && hi == 2) || (lo >= 2 && chain(lo, hi));
      if (!adjacent) return 0;
      if (lo == n - 1 && hi == n) {
        const bool long_end = family_ == Family::A2odd;  // C_n-type vs B_n-type finite part
        if (long_end) return i == n ? -2 : -1;
        return i == n - 1 ? -2 : -1;
      }
      return -1;
    }
    case Family::A2even:
    case Family::C1:
    case Family::D2: {
      if (!chain(i, j)) return 0;
      if (lo == 0) {
        if (family_ == Family::C1) return i == 1 ? -2 : -1;
        return i == 0 ? -2 : -1;
      }
      if (hi == n) {
        if (family_ == Family::D2) return i == n - 1 ? -2 : -1;
        return i == n ? -2 : -1;
      }
      return -1;
    }
    case Family::D1: {
      const bool adjacent = (lo <= 1 && hi == 2) || (lo == n - 2 && hi >= n - 1) ||
                            (lo >= 2 && hi <= n - 2 && chain(lo, hi));
      return adjacent ? -1 : 0;
    }
  }
  return 0;
}

}  // namespace crystal_ca

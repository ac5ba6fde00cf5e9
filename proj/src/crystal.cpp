#include "crystal_ca/crystal.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace crystal_ca {

namespace {

int pos(int v) { return v > 0 ? v : 0; }

struct Signature {
  std::vector<int> eps, phi;
};

// Uncancelled minus counts per factor: (eps_j - phi(prefix))_+.
std::vector<int> open_minus(const Signature& s) {
  std::vector<int> out(s.eps.size());
  int carry = 0;
  for (std::size_t j = 0; j < s.eps.size(); ++j) {
    out[j] = pos(s.eps[j] - carry);
    carry = s.phi[j] + pos(carry - s.eps[j]);
  }
  return out;
}

// Uncancelled plus counts per factor: (phi_j - eps(suffix))_+.
std::vector<int> open_plus(const Signature& s) {
  std::vector<int> out(s.eps.size());
  int carry = 0;
  for (std::size_t j = s.eps.size(); j-- > 0;) {
    out[j] = pos(s.phi[j] - carry);
    carry = s.eps[j] + pos(carry - s.phi[j]);
  }
  return out;
}

std::string show(const AlgebraSpec& spec, const CrystalElement& b) { return format_element(spec, b); }

}  // namespace

Crystal::Crystal(AlgebraSpec spec, std::shared_ptr<const CrystalStructure> structure)
    : spec_(std::move(spec)), structure_(std::move(structure)) {
  if (!structure_) throw BackendUnavailable("no crystal structure for " + spec_.name());
  if (structure_->family() != spec_.family() || structure_->rank() != spec_.rank())
    throw BackendUnavailable("crystal structure is for " + family_name(structure_->family()) + " rank " +
                             std::to_string(structure_->rank()) + ", not " + spec_.name());
}

Crystal Crystal::builtin(const AlgebraSpec& spec) { return Crystal(spec, builtin_a1(spec)); }

void Crystal::require(int l) const {
  if (!covers(l))
    throw BackendUnavailable("no crystal structure for B_" + std::to_string(l) + " of " + spec_.name() +
                             "; supply it with --crystal-graph");
}

int Crystal::eps(int i, const CrystalElement& b) const { return structure_->eps(i, b); }
int Crystal::phi(int i, const CrystalElement& b) const { return structure_->phi(i, b); }
std::optional<CrystalElement> Crystal::e(int i, const CrystalElement& b) const { return structure_->e(i, b); }
std::optional<CrystalElement> Crystal::f(int i, const CrystalElement& b) const { return structure_->f(i, b); }

CrystalElement Crystal::e_pow(int i, const CrystalElement& b, int k) const {
  CrystalElement cur = b;
  for (int s = 0; s < k; ++s) {
    auto next = e(i, cur);
    if (!next) throw Error("e_" + std::to_string(i) + "^" + std::to_string(k) + " annihilates " + show(spec_, b));
    cur = std::move(*next);
  }
  return cur;
}

CrystalElement Crystal::f_pow(int i, const CrystalElement& b, int k) const {
  CrystalElement cur = b;
  for (int s = 0; s < k; ++s) {
    auto next = f(i, cur);
    if (!next) throw Error("f_" + std::to_string(i) + "^" + std::to_string(k) + " annihilates " + show(spec_, b));
    cur = std::move(*next);
  }
  return cur;
}

CrystalElement Crystal::e_max(int i, const CrystalElement& b) const { return e_pow(i, b, eps(i, b)); }
CrystalElement Crystal::f_max(int i, const CrystalElement& b) const { return f_pow(i, b, phi(i, b)); }

CrystalElement Crystal::weyl_s(int i, const CrystalElement& b) const {
  const int ep = eps(i, b);
  const int ph = phi(i, b);
  return ph >= ep ? f_pow(i, b, ph - ep) : e_pow(i, b, ep - ph);
}

namespace {

Signature signature(const Crystal& c, int i, const TensorElement& t) {
  Signature s;
  s.eps.reserve(t.size());
  s.phi.reserve(t.size());
  for (const auto& b : t.factors) {
    s.eps.push_back(c.eps(i, b));
    s.phi.push_back(c.phi(i, b));
  }
  return s;
}

}  // namespace

int Crystal::eps(int i, const TensorElement& t) const {
  int E = 0, P = 0;
  for (const auto& b : t.factors) {
    const int ej = eps(i, b);
    const int pj = phi(i, b);
    E += pos(ej - P);
    P = pj + pos(P - ej);
  }
  return E;
}

int Crystal::phi(int i, const TensorElement& t) const {
  int P = 0;
  for (const auto& b : t.factors) {
    const int ej = eps(i, b);
    P = phi(i, b) + pos(P - ej);
  }
  return P;
}

std::optional<TensorElement> Crystal::e(int i, const TensorElement& t) const {
  const auto minus = open_minus(signature(*this, i, t));
  for (std::size_t j = minus.size(); j-- > 0;) {
    if (minus[j] > 0) {
      TensorElement out = t;
      out[j] = *e(i, t[j]);
      return out;
    }
  }
  return std::nullopt;
}

std::optional<TensorElement> Crystal::f(int i, const TensorElement& t) const {
  const auto plus = open_plus(signature(*this, i, t));
  for (std::size_t j = 0; j < plus.size(); ++j) {
    if (plus[j] > 0) {
      TensorElement out = t;
      out[j] = *f(i, t[j]);
      return out;
    }
  }
  return std::nullopt;
}

TensorElement Crystal::e_pow(int i, const TensorElement& t, int k) const {
  const auto minus = open_minus(signature(*this, i, t));
  TensorElement out = t;
  int left = k;
  for (std::size_t j = minus.size(); j-- > 0 && left > 0;) {
    const int take = std::min(left, minus[j]);
    if (take > 0) out[j] = e_pow(i, t[j], take);
    left -= take;
  }
  if (left > 0) throw Error("e_" + std::to_string(i) + "^" + std::to_string(k) + " annihilates the tensor");
  return out;
}

TensorElement Crystal::f_pow(int i, const TensorElement& t, int k) const {
  const auto plus = open_plus(signature(*this, i, t));
  TensorElement out = t;
  int left = k;
  for (std::size_t j = 0; j < plus.size() && left > 0; ++j) {
    const int take = std::min(left, plus[j]);
    if (take > 0) out[j] = f_pow(i, t[j], take);
    left -= take;
  }
  if (left > 0) throw Error("f_" + std::to_string(i) + "^" + std::to_string(k) + " annihilates the tensor");
  return out;
}

TensorElement Crystal::e_max(int i, const TensorElement& t) const {
  const auto minus = open_minus(signature(*this, i, t));
  TensorElement out = t;
  for (std::size_t j = 0; j < minus.size(); ++j)
    if (minus[j] > 0) out[j] = e_pow(i, t[j], minus[j]);
  return out;
}

TensorElement Crystal::f_max(int i, const TensorElement& t) const {
  const auto plus = open_plus(signature(*this, i, t));
  TensorElement out = t;
  for (std::size_t j = 0; j < plus.size(); ++j)
    if (plus[j] > 0) out[j] = f_pow(i, t[j], plus[j]);
  return out;
}

TensorElement Crystal::weyl_s(int i, const TensorElement& t) const {
  const auto s = signature(*this, i, t);
  int minus = 0, plus = 0;
  for (int v : open_minus(s)) minus += v;
  for (int v : open_plus(s)) plus += v;
  return plus >= minus ? f_pow(i, t, plus - minus) : e_pow(i, t, minus - plus);
}

CrystalElement Crystal::sigma(const CrystalElement& b) const {
  CrystalElement out{b.l, std::vector<int>(b.x.size(), 0)};
  const auto& letters = spec_.stored_letters();
  for (std::size_t j = 0; j < letters.size(); ++j)
    out.x[static_cast<std::size_t>(*spec_.slot_of(spec_.sigma_letter(letters[j])))] = b.x[j];
  return out;
}

CrystalElement Crystal::sigma_inverse(const CrystalElement& b) const {
  CrystalElement out{b.l, std::vector<int>(b.x.size(), 0)};
  const auto& letters = spec_.stored_letters();
  for (std::size_t j = 0; j < letters.size(); ++j)
    out.x[static_cast<std::size_t>(*spec_.slot_of(spec_.sigma_inverse_letter(letters[j])))] = b.x[j];
  return out;
}

TensorElement Crystal::sigma(const TensorElement& t) const {
  TensorElement out = t;
  for (auto& b : out.factors) b = sigma(b);
  return out;
}

TensorElement Crystal::sigma_inverse(const TensorElement& t) const {
  TensorElement out = t;
  for (auto& b : out.factors) b = sigma_inverse(b);
  return out;
}

CrystalElement Crystal::sigma_via_weyl(const CrystalElement& b, long long k) const {
  CrystalElement cur = b;
  for (long long j = k + spec_.d(); j > k; --j) cur = weyl_s(spec_.index_at(j), cur);
  return cur;
}

TensorElement Crystal::sigma_via_weyl(const TensorElement& t, long long k) const {
  TensorElement out = t;
  for (auto& b : out.factors) b = sigma_via_weyl(b, k);
  return out;
}

TVector Crystal::t_def(const CrystalElement& b, long long shift) const {
  TVector out;
  CrystalElement cur = b;
  for (int j = 1; j <= spec_.d(); ++j) {
    const int i = spec_.index_at(shift + j);
    out.push_back(phi(i, cur));
    if (j < spec_.d()) cur = e_max(i, cur);
  }
  return out;
}

TVector Crystal::t_def(const TensorElement& t, long long shift) const {
  TVector out;
  TensorElement cur = t;
  for (int j = 1; j <= spec_.d(); ++j) {
    const int i = spec_.index_at(shift + j);
    out.push_back(phi(i, cur));
    if (j < spec_.d()) cur = e_max(i, cur);
  }
  return out;
}

TVector Crystal::t_closed(const CrystalElement& b) const {
  const int n = spec_.rank();
  auto x = [&](int a) { return coordinate(spec_, b, Letter::plain(a)); };
  auto xb = [&](int a) { return coordinate(spec_, b, Letter::barred(a)); };
  const bool upper = spec_.brace() == Brace::Upper;
  TVector t;
  auto brace_pair = [&] {
    if (upper) {
      t.push_back(x(1));
      t.push_back(xb(1));
    } else {
      t.push_back(xb(1));
      t.push_back(x(1));
    }
  };

  switch (spec_.family()) {
    case Family::A1:
      for (int a = n; a >= 1; --a) t.push_back(x(a));
      break;
    case Family::A2odd:
      for (int a = n; a >= 2; --a) t.push_back(x(a));
      brace_pair();
      for (int a = 2; a <= n - 1; ++a) t.push_back(xb(a));
      break;
    case Family::A2even:
    case Family::C1:
      for (int a = n; a >= 1; --a) t.push_back(x(a));
      t.push_back(coordinate(spec_, b, Letter::zero()));
      for (int a = 1; a <= n - 1; ++a) t.push_back(xb(a));
      break;
    case Family::B1:
      t.push_back(2 * x(n) + coordinate(spec_, b, Letter::zero()));
      for (int a = n - 1; a >= 2; --a) t.push_back(x(a));
      brace_pair();
      for (int a = 2; a <= n - 1; ++a) t.push_back(xb(a));
      break;
    case Family::D1:
      t.push_back(x(n) + x(n - 1));
      for (int a = n - 2; a >= 2; --a) t.push_back(x(a));
      brace_pair();
      for (int a = 2; a <= n - 2; ++a) t.push_back(xb(a));
      t.push_back(xb(n - 1) + x(n));
      break;
    case Family::D2:
      t.push_back(2 * x(n) + coordinate(spec_, b, Letter::zero()));
      for (int a = n - 1; a >= 1; --a) t.push_back(x(a));
      t.push_back(coordinate(spec_, b, Letter::empty()));
      for (int a = 1; a <= n - 1; ++a) t.push_back(xb(a));
      break;
  }
  return t;
}

std::vector<AdmissionCheck> admission_suite(const Crystal& c, int l) {
  c.require(l);
  const AlgebraSpec& spec = c.spec();
  const auto elements = c.enumerate(l);
  const int d = spec.d();
  auto fmt = [&](const CrystalElement& b) { return format_element(spec, b); };
  std::vector<AdmissionCheck> out;

  {
    AdmissionCheck ch;
    ch.name = "delta-chain";
    for (long long k = -3LL * d; k <= 3LL * d && ch.passed; ++k) {
      const int i = spec.index_at(k);
      const auto from = c.delta(l, spec.letter_at(k - 1));
      const auto to = c.delta(l, spec.letter_at(k));
      ++ch.checked;
      if (c.phi(i, from) != 0) {
        ch.passed = false;
        ch.detail = "phi_" + std::to_string(i) + "(" + fmt(from) + ") != 0 at k=" + std::to_string(k);
      } else if (c.weyl_s(i, from) != to || c.e_max(i, from) != to) {
        ch.passed = false;
        ch.detail = "S_" + std::to_string(i) + "(" + fmt(from) + ") != " + fmt(to) + " at k=" + std::to_string(k);
      }
    }
    out.push_back(ch);
  }

  {
    AdmissionCheck ch;
    ch.name = "emax-chain";
    const auto target = c.delta(l, spec.letter_at(d));
    for (const auto& u : elements) {
      CrystalElement cur = u;
      for (int j = 1; j <= d; ++j) cur = c.e_max(spec.index_at(j), cur);
      ++ch.checked;
      if (cur != target) {
        ch.passed = false;
        ch.detail = fmt(u) + " ends at " + fmt(cur) + ", expected " + fmt(target);
        break;
      }
    }
    out.push_back(ch);
  }

  {
    AdmissionCheck ch;
    ch.name = "tmap";
    std::map<TVector, CrystalElement> seen;
    for (const auto& b : elements) {
      ++ch.checked;
      const auto td = c.t_def(b);
      if (td != c.t_closed(b)) {
        ch.passed = false;
        ch.detail = "t_def != t_closed at " + fmt(b);
        break;
      }
      auto [it, fresh] = seen.emplace(td, b);
      if (!fresh) {
        ch.passed = false;
        ch.detail = "t collides on " + fmt(it->second) + " and " + fmt(b);
        break;
      }
    }
    out.push_back(ch);
  }

  {
    AdmissionCheck ch;
    ch.name = "sigma-intertwining";
    for (const auto& b : elements) {
      if (!ch.passed) break;
      const auto sb = c.sigma(b);
      for (long long k = 0; k <= d && ch.passed; ++k) {
        ++ch.checked;
        if (c.sigma_via_weyl(b, k) != sb) {
          ch.passed = false;
          ch.detail = "Weyl form of sigma differs from letter action at " + fmt(b) + ", k=" + std::to_string(k);
        }
      }
      for (int i = 0; i <= spec.rank() && ch.passed; ++i) {
        const int si = spec.sigma_index(i);
        const auto lhs_f = c.f(i, b);
        const auto rhs_f = c.f(si, sb);
        const auto lhs_e = c.e(i, b);
        const auto rhs_e = c.e(si, sb);
        ++ch.checked;
        if (lhs_f.has_value() != rhs_f.has_value() || (lhs_f && c.sigma(*lhs_f) != *rhs_f) ||
            lhs_e.has_value() != rhs_e.has_value() || (lhs_e && c.sigma(*lhs_e) != *rhs_e)) {
          ch.passed = false;
          ch.detail = "sigma does not intertwine color " + std::to_string(i) + " at " + fmt(b);
        }
      }
    }
    out.push_back(ch);
  }

  {
    AdmissionCheck ch;
    ch.name = "weyl-involution";
    for (const auto& b : elements) {
      for (int i = 0; i <= spec.rank() && ch.passed; ++i) {
        ++ch.checked;
        if (c.weyl_s(i, c.weyl_s(i, b)) != b) {
          ch.passed = false;
          ch.detail = "S_" + std::to_string(i) + "^2 != id at " + fmt(b);
        }
      }
      if (!ch.passed) break;
    }
    out.push_back(ch);
  }

  {
    AdmissionCheck ch;
    ch.name = "inverse-pairs";
    for (const auto& b : elements) {
      for (int i = 0; i <= spec.rank() && ch.passed; ++i) {
        ++ch.checked;
        int count_e = 0, count_f = 0;
        for (auto cur = c.e(i, b); cur; cur = c.e(i, *cur)) ++count_e;
        for (auto cur = c.f(i, b); cur; cur = c.f(i, *cur)) ++count_f;
        const auto fb = c.f(i, b);
        const auto eb = c.e(i, b);
        if (count_e != c.eps(i, b) || count_f != c.phi(i, b)) {
          ch.passed = false;
          ch.detail = "eps/phi disagree with operator counts at " + fmt(b);
        } else if ((fb && c.e(i, *fb) != b) || (eb && c.f(i, *eb) != b)) {
          ch.passed = false;
          ch.detail = "e_" + std::to_string(i) + " and f_" + std::to_string(i) + " are not inverse at " + fmt(b);
        } else if ((fb && !is_valid(spec, *fb)) || (eb && !is_valid(spec, *eb))) {
          ch.passed = false;
          ch.detail = "operator leaves B_" + std::to_string(l) + " at " + fmt(b);
        }
      }
      if (!ch.passed) break;
    }
    out.push_back(ch);
  }
  return out;
}

}  // namespace crystal_ca

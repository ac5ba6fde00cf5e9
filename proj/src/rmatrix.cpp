#include "crystal_ca/rmatrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fnv.hpp"

namespace crystal_ca {

int IndexedCrystal::find(const CrystalElement& b) const {
  auto it = index.find(b);
  if (it == index.end()) throw Error("element is not in B_" + std::to_string(l));
  return it->second;
}

IndexedCrystal IndexedCrystal::build(const Crystal& c, int l, std::size_t cap) {
  c.require(l);
  IndexedCrystal ic;
  ic.l = l;
  ic.nodes = c.enumerate(l, cap);
  ic.index.reserve(ic.nodes.size());
  for (std::size_t v = 0; v < ic.nodes.size(); ++v) ic.index.emplace(ic.nodes[v], static_cast<int>(v));
  const std::size_t colors = static_cast<std::size_t>(c.spec().index_count());
  const std::size_t count = ic.nodes.size();
  ic.e.assign(colors, std::vector<int>(count, -1));
  ic.f.assign(colors, std::vector<int>(count, -1));
  ic.eps.assign(colors, std::vector<int>(count, 0));
  ic.phi.assign(colors, std::vector<int>(count, 0));
  for (std::size_t i = 0; i < colors; ++i) {
    for (std::size_t v = 0; v < count; ++v) {
      const auto& b = ic.nodes[v];
      const int ci = static_cast<int>(i);
      ic.eps[i][v] = c.eps(ci, b);
      ic.phi[i][v] = c.phi(ci, b);
      if (auto t = c.e(ci, b)) ic.e[i][v] = ic.find(*t);
      if (auto t = c.f(ci, b)) ic.f[i][v] = ic.find(*t);
    }
  }
  return ic;
}

RTable::RTable(std::shared_ptr<const IndexedCrystal> left, std::shared_ptr<const IndexedCrystal> right,
               std::vector<std::int32_t> image)
    : left_(std::move(left)), right_(std::move(right)), image_(std::move(image)) {}

std::pair<CrystalElement, CrystalElement> RTable::apply(const CrystalElement& b1,
                                                        const CrystalElement& b2) const {
  const std::size_t nm = right_->size();
  const std::size_t nl = left_->size();
  const auto key = static_cast<std::size_t>(left_->find(b1)) * nm + static_cast<std::size_t>(right_->find(b2));
  const std::int32_t v = image_[key];
  if (v < 0)
    throw OracleError("R oracle never reached this element of B_" + std::to_string(l()) + " (x) B_" +
                      std::to_string(m()) + "; the tensor product is not connected");
  const auto uv = static_cast<std::size_t>(v);
  return {right_->nodes[uv / nl], left_->nodes[uv % nl]};
}

namespace {

// Two-factor operators on index pairs, Kashiwara's convention.
struct PairOps {
  const IndexedCrystal& a;  // left factor
  const IndexedCrystal& b;  // right factor

  std::int64_t e(std::size_t i, std::int64_t key) const {
    const auto nb = static_cast<std::int64_t>(b.size());
    const auto v1 = static_cast<std::size_t>(key / nb);
    const auto v2 = static_cast<std::size_t>(key % nb);
    if (a.phi[i][v1] >= b.eps[i][v2]) {
      const int w = a.e[i][v1];
      return w < 0 ? -1 : static_cast<std::int64_t>(w) * nb + static_cast<std::int64_t>(v2);
    }
    const int w = b.e[i][v2];
    return w < 0 ? -1 : static_cast<std::int64_t>(v1) * nb + w;
  }

  std::int64_t f(std::size_t i, std::int64_t key) const {
    const auto nb = static_cast<std::int64_t>(b.size());
    const auto v1 = static_cast<std::size_t>(key / nb);
    const auto v2 = static_cast<std::size_t>(key % nb);
    if (a.phi[i][v1] > b.eps[i][v2]) {
      const int w = a.f[i][v1];
      return w < 0 ? -1 : static_cast<std::int64_t>(w) * nb + static_cast<std::int64_t>(v2);
    }
    const int w = b.f[i][v2];
    return w < 0 ? -1 : static_cast<std::int64_t>(v1) * nb + w;
  }
};

}  // namespace

std::vector<std::int32_t> build_r_oracle(const IndexedCrystal& left, const IndexedCrystal& right,
                                         const CrystalElement& seed_left, const CrystalElement& seed_right) {
  const std::size_t total = left.size() * right.size();
  if (total > static_cast<std::size_t>(INT32_MAX)) throw CapExceeded("R table too large");
  std::vector<std::int32_t> image(total, -1);
  const PairOps src{left, right};
  const PairOps dst{right, left};
  const std::size_t colors = left.e.size();

  const std::int64_t seed = static_cast<std::int64_t>(left.find(seed_left)) * static_cast<std::int64_t>(right.size()) +
                            right.find(seed_right);
  const std::int64_t seed_img = static_cast<std::int64_t>(right.find(seed_right)) * static_cast<std::int64_t>(left.size()) +
                                left.find(seed_left);
  image[static_cast<std::size_t>(seed)] = static_cast<std::int32_t>(seed_img);
  std::deque<std::int64_t> queue{seed};

  auto visit = [&](std::int64_t x2, std::int64_t y2, std::int64_t from) {
    if ((x2 < 0) != (y2 < 0))
      throw OracleError("R oracle: equivariance breaks at table entry " + std::to_string(from) +
                        " (operator defined on one side only)");
    if (x2 < 0) return;
    auto& slot = image[static_cast<std::size_t>(x2)];
    if (slot < 0) {
      slot = static_cast<std::int32_t>(y2);
      queue.push_back(x2);
    } else if (slot != y2) {
      throw OracleError("R oracle: inconsistent images for table entry " + std::to_string(x2));
    }
  };

  while (!queue.empty()) {
    const std::int64_t x = queue.front();
    queue.pop_front();
    const std::int64_t y = image[static_cast<std::size_t>(x)];
    for (std::size_t i = 0; i < colors; ++i) {
      visit(src.e(i, x), dst.e(i, y), x);
      visit(src.f(i, x), dst.f(i, y), x);
    }
  }
  return image;
}

RMatrix::RMatrix(Crystal crystal, RMatrixOptions options) : crystal_(std::move(crystal)), options_(std::move(options)) {
  if (options_.cache_dir.empty() && options_.use_env_cache_dir) {
    if (const char* dir = std::getenv("CRYSTAL_CA_CACHE_DIR"); dir && *dir) options_.cache_dir = dir;
  }
  if (options_.lru_capacity == 0) options_.lru_capacity = 1;
}

std::shared_ptr<const IndexedCrystal> RMatrix::indexed(int l) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = indexed_.find(l); it != indexed_.end()) return it->second;
  }
  auto built = std::make_shared<const IndexedCrystal>(IndexedCrystal::build(crystal_, l, options_.enumeration_cap));
  std::lock_guard lock(mu_);
  return indexed_.emplace(l, std::move(built)).first->second;
}

std::string RMatrix::cache_file(int l, int m) const {
  if (options_.cache_dir.empty()) return {};
  const std::string key = crystal_.structure().fingerprint() + "|" + family_name(crystal_.spec().family()) + "|" +
                          std::to_string(crystal_.spec().rank()) + "|" + std::to_string(l) + "|" + std::to_string(m);
  return (std::filesystem::path(options_.cache_dir) / ("rtable-" + detail::hex64(detail::fnv1a64(key)) + ".bin")).string();
}

namespace {

std::string checksum(const std::vector<std::int32_t>& image) {
  return detail::hex64(detail::fnv1a64(
      std::string_view(reinterpret_cast<const char*>(image.data()), image.size() * sizeof(std::int32_t))));
}

std::string header_for(const Crystal& c, int l, int m, const std::vector<std::int32_t>& image) {
  std::ostringstream os;
  os << "crystal-ca-rtable 1 " << c.structure().fingerprint() << ' ' << family_name(c.spec().family()) << ' '
     << c.spec().rank() << ' ' << l << ' ' << m << ' ' << image.size() << ' ' << checksum(image);
  return os.str();
}

// Returns an empty vector when the file is missing, foreign or damaged.
std::vector<std::int32_t> read_table(const std::string& path, const Crystal& c, int l, int m, std::size_t expected,
                                     bool& damaged) {
  damaged = false;
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, fp, fam, sum;
  int version = 0, rank = 0, hl = 0, hm = 0;
  std::size_t count = 0;
  hs >> magic >> version >> fp >> fam >> rank >> hl >> hm >> count >> sum;
  damaged = true;
  if (!hs || magic != "crystal-ca-rtable" || version != 1 || fp != c.structure().fingerprint() ||
      fam != family_name(c.spec().family()) || rank != c.spec().rank() || hl != l || hm != m || count != expected)
    return {};
  std::vector<std::int32_t> image(count);
  in.read(reinterpret_cast<char*>(image.data()), static_cast<std::streamsize>(count * sizeof(std::int32_t)));
  if (!in || in.peek() != std::char_traits<char>::eof()) return {};
  if (checksum(image) != sum) return {};
  std::vector<bool> hit(count, false);
  for (auto v : image) {
    if (v < 0 || static_cast<std::size_t>(v) >= count || hit[static_cast<std::size_t>(v)]) return {};
    hit[static_cast<std::size_t>(v)] = true;
  }
  damaged = false;
  return image;
}

void write_table(const std::string& path, const Crystal& c, int l, int m, const std::vector<std::int32_t>& image) {
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out << header_for(c, l, m, image) << '\n';
    out.write(reinterpret_cast<const char*>(image.data()),
              static_cast<std::streamsize>(image.size() * sizeof(std::int32_t)));
    if (!out) return;
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

std::shared_ptr<const RTable> RMatrix::load_or_build(int l, int m) const {
  auto left = indexed(l);
  auto right = indexed(m);
  const std::string path = cache_file(l, m);
  const std::size_t expected = left->size() * right->size();
  if (!path.empty()) {
    bool damaged = false;
    auto image = read_table(path, crystal_, l, m, expected, damaged);
    if (!image.empty()) {
      std::lock_guard lock(mu_);
      ++stats_.loaded;
      return std::make_shared<const RTable>(left, right, std::move(image));
    }
    if (damaged) {
      std::lock_guard lock(mu_);
      ++stats_.rejected_files;
    }
  }
  const Letter a0 = crystal_.spec().letter_at(0);
  auto image = build_r_oracle(*left, *right, crystal_.delta(l, a0), crystal_.delta(m, a0));
  const bool complete = std::none_of(image.begin(), image.end(), [](std::int32_t v) { return v < 0; });
  if (!path.empty() && complete) write_table(path, crystal_, l, m, image);
  std::lock_guard lock(mu_);
  ++stats_.built;
  return std::make_shared<const RTable>(left, right, std::move(image));
}

std::shared_ptr<const RTable> RMatrix::table(int l, int m) const {
  const auto key = std::make_pair(l, m);
  {
    std::lock_guard lock(mu_);
    if (auto it = tables_.find(key); it != tables_.end()) {
      ++stats_.hits;
      lru_.remove(key);
      lru_.push_front(key);
      return it->second;
    }
  }
  auto t = load_or_build(l, m);
  std::lock_guard lock(mu_);
  if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  tables_.emplace(key, t);
  lru_.push_front(key);
  while (lru_.size() > options_.lru_capacity) {
    tables_.erase(lru_.back());
    lru_.pop_back();
  }
  return t;
}

RMatrixStats RMatrix::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

TensorElement RMatrix::elementary(const TensorElement& x) const {
  if (x.size() != 2) throw Error("elementary R needs a two-factor tensor");
  auto [a, b] = table(x[0].l, x[1].l)->apply(x[0], x[1]);
  return TensorElement{a, b};
}

void RMatrix::swap_at(TensorElement& x, std::size_t p) const {
  auto [a, b] = table(x[p].l, x[p + 1].l)->apply(x[p], x[p + 1]);
  x[p] = std::move(a);
  x[p + 1] = std::move(b);
}

TensorElement RMatrix::composite(const TensorElement& x, std::size_t split, ThreadOrder order) const {
  if (split == 0 || split >= x.size()) throw Error("composite R needs two nonempty blocks");
  TensorElement out = x;
  const std::size_t s = split;
  const std::size_t n2 = x.size() - split;
  if (order == ThreadOrder::RightOfFirstBlockFirst) {
    for (std::size_t j = s; j-- > 0;)
      for (std::size_t p = j; p < j + n2; ++p) swap_at(out, p);
  } else {
    for (std::size_t c = 0; c < n2; ++c)
      for (std::size_t p = s - 1 + c + 1; p-- > c;) swap_at(out, p);
  }
  return out;
}

int domain_lead(const AlgebraSpec& spec, const CrystalElement& u, Letter a) {
  const int n = spec.rank();
  if (spec.family() == Family::A1) {
    int top = 0;
    for (int b = 1; b <= n + 1; ++b)
      if (b != a.index) top = std::max(top, coordinate(spec, u, Letter::plain(b)));
    return coordinate(spec, u, a) - top;
  }
  if (!(a.is_plain() || a.is_barred())) throw Error("domain letter must be numbered");
  int top = 0;
  for (int b = 1; b <= n; ++b) {
    if (b == a.index) continue;
    top = std::max(top, std::abs(coordinate(spec, u, Letter::plain(b)) - coordinate(spec, u, Letter::barred(b))));
  }
  return coordinate(spec, u, a) - coordinate(spec, u, a.bar()) - top;
}

bool in_domain(const AlgebraSpec& spec, const CrystalElement& u, const DomainSpec& domain) {
  return domain_lead(spec, u, domain.a) >= domain.margin;
}

std::string FactorizedResult::summary() const {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::OutsideDomain: return "inapplicable: " + domain_detail;
    case Status::SideConditionFailed: {
      std::ostringstream os;
      os << "inapplicable (M or margin too small): ";
      for (std::size_t j = 0; j < failures.size(); ++j) {
        const auto& f = failures[j];
        if (j) os << "; ";
        os << f.condition << " at step " << f.step << " expected " << f.expected << " got " << f.got;
      }
      return os.str();
    }
  }
  return {};
}

FactorizedResult r_factorized(const Crystal& c, long long k, const TensorElement& ux, int margin) {
  const AlgebraSpec& spec = c.spec();
  if (ux.size() < 2) throw Error("factorized R needs u (x) x with at least one factor in x");
  FactorizedResult res;
  res.k = k;
  res.input = ux;
  const int d = spec.d();
  const CrystalElement& u = ux[0];

  const Letter ak = spec.letter_at(k);
  const int lead = domain_lead(spec, u, ak);
  if (lead < margin) {
    res.status = FactorizedResult::Status::OutsideDomain;
    res.domain_detail = "u is not in B_M[" + ak.to_string() + "] with margin " + std::to_string(margin) +
                        " (lead " + std::to_string(lead) + ")";
  }

  auto fail = [&](std::string name, long long step, int expected, int got) {
    res.failures.push_back({std::move(name), step, expected, got});
  };

  int capacity = 0;
  for (std::size_t p = 1; p < ux.size(); ++p) capacity += ux[p].l;
  if (u.l < capacity) fail("M >= total capacity of B", 0, capacity, u.l);

  const TVector tu = c.t_def(u, k);
  TensorElement state = ux;
  for (int j = 1; j <= d; ++j) {
    const int i = spec.index_at(k + j);
    FactorizedStep step;
    step.j = j;
    step.color = i;
    step.eps = c.eps(i, state);
    step.phi = c.phi(i, state);
    if (step.eps < step.phi) fail("orientation eps>=phi", j, step.phi, step.eps);
    {
      // S must act as e^q on u and e^max on the partner block
      TensorElement rest;
      rest.factors.assign(state.factors.begin() + 1, state.factors.end());
      const int q = c.eps(i, state[0]) - c.phi(i, rest) - std::max(0, c.phi(i, state[0]) - c.eps(i, rest));
      if (q < 0) fail("S splits as e^q (x) e^max", j, 0, q);
    }
    const int phi_u_prev = c.phi(i, state[0]);
    if (phi_u_prev != tu[static_cast<std::size_t>(j - 1)])
      fail("phi(|u>_{j-1}) = t_j(u)", j, tu[static_cast<std::size_t>(j - 1)], phi_u_prev);
    step.state = c.weyl_s(i, state);
    const int eps_u = c.eps(i, step.state[0]);
    if (eps_u != step.phi) fail("eps(|u>_j) = phi(state_{j-1})", j, step.phi, eps_u);
    const int eps_after = c.eps(i, step.state);
    if (eps_after != eps_u) fail("eps(|u>_j (x) |x>_j) = eps(|u>_j)", j, eps_u, eps_after);
    state = step.state;
    res.steps.push_back(std::move(step));
  }

  TensorElement transposed;
  for (std::size_t p = 1; p < state.size(); ++p) transposed.factors.push_back(state[p]);
  transposed.factors.push_back(state[0]);
  res.transposed = transposed;
  res.output = c.sigma(transposed);

  const TVector t_sigma_ud = c.t_def(c.sigma(state[0]), k);
  for (int j = 1; j <= d; ++j) {
    const int i = spec.index_at(k + j);
    const int eps_u = c.eps(i, res.steps[static_cast<std::size_t>(j - 1)].state[0]);
    if (eps_u != t_sigma_ud[static_cast<std::size_t>(j - 1)])
      fail("eps(|u>_j) = t_j(sigma|u>_d)", j, t_sigma_ud[static_cast<std::size_t>(j - 1)], eps_u);
  }

  // the same chain run on the predicted y (x) v
  const CrystalElement& v = res.output.factors.back();
  const TVector tv = c.t_def(v, k);
  TensorElement yv = res.output;
  const int colors = spec.index_count();
  auto same_profile = [&](const TensorElement& a, const TensorElement& b, long long j) {
    for (int i = 0; i < colors; ++i) {
      const int ea = c.eps(i, a), eb = c.eps(i, b);
      const int pa = c.phi(i, a), pb = c.phi(i, b);
      if (ea != eb) fail("eps_" + std::to_string(i) + " preserved by R", j, ea, eb);
      if (pa != pb) fail("phi_" + std::to_string(i) + " preserved by R", j, pa, pb);
    }
  };
  same_profile(ux, yv, 0);
  for (int j = 1; j <= d; ++j) {
    const int i = spec.index_at(k + j);
    const int phi_v = c.phi(i, yv.factors.back());
    if (phi_v != tv[static_cast<std::size_t>(j - 1)])
      fail("phi(<v|_{j-1}) = t_j(v)", j, tv[static_cast<std::size_t>(j - 1)], phi_v);
    const int phi_all = c.phi(i, yv);
    if (phi_all != phi_v) fail("phi(<y|(x)<v|) = phi(<v|)", j, phi_v, phi_all);
    yv = c.weyl_s(i, yv);
    same_profile(res.steps[static_cast<std::size_t>(j - 1)].state, yv, j);
  }

  if (res.status == FactorizedResult::Status::Ok && !res.failures.empty())
    res.status = FactorizedResult::Status::SideConditionFailed;
  return res;
}

std::size_t yang_baxter_check(const RMatrix& r, int l, int m, int kk) {
  const auto& c = r.crystal();
  const auto bl = r.indexed(l);
  const auto bm = r.indexed(m);
  const auto bk = r.indexed(kk);
  std::size_t checked = 0;
  for (const auto& a : bl->nodes)
    for (const auto& b : bm->nodes)
      for (const auto& g : bk->nodes) {
        const TensorElement x{a, b, g};
        TensorElement lhs = x;  // (R(x)1)(1(x)R)(R(x)1)
        r.swap_at(lhs, 0);
        r.swap_at(lhs, 1);
        r.swap_at(lhs, 0);
        TensorElement rhs = x;  // (1(x)R)(R(x)1)(1(x)R)
        r.swap_at(rhs, 1);
        r.swap_at(rhs, 0);
        r.swap_at(rhs, 1);
        ++checked;
        if (lhs != rhs)
          throw OracleError("Yang-Baxter fails at " + format_tensor(c.spec(), x) + ": " +
                            format_tensor(c.spec(), lhs) + " vs " + format_tensor(c.spec(), rhs));
      }
  return checked;
}

}  // namespace crystal_ca

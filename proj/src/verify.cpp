#include "crystal_ca/verify.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "crystal_ca/errors.hpp"
#include "json.hpp"

namespace crystal_ca {

namespace {

struct Outcome {
  enum Kind { Pass, Flag, Fail } kind = Pass;
  VerifyFailure failure;
  std::string flag_reason;
};

// Runs fn(trial) for every trial on `jobs` threads; outcomes keep trial order.
template <class F>
std::vector<Outcome> run_trials(long long trials, int jobs, F fn) {
  std::vector<Outcome> out(static_cast<std::size_t>(std::max(0LL, trials)));
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max(1LL, trials))));
  if (workers == 1) {
    for (long long t = 0; t < trials; ++t) out[static_cast<std::size_t>(t)] = fn(t);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (long long t = w; t < trials; t += workers) out[static_cast<std::size_t>(t)] = fn(t);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void tally(VerifyReport& rep, const std::vector<Outcome>& outcomes) {
  std::map<std::string, long long> reasons;
  for (const auto& o : outcomes) {
    ++rep.trials;
    if (o.kind == Outcome::Pass) ++rep.passes;
    if (o.kind == Outcome::Flag) {
      ++rep.flagged;
      ++reasons["flagged: " + o.flag_reason];
    }
    if (o.kind == Outcome::Fail) rep.failures.push_back(o.failure);
  }
  for (const auto& [name, count] : reasons) rep.counters.emplace_back(name, count);
}

VerifyReport start(const std::string& suite, const AlgebraSpec& spec) {
  VerifyReport rep;
  rep.suite = suite;
  rep.algebra = family_name(spec.family());
  rep.rank = spec.rank();
  return rep;
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string show_vec(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t j = 0; j < v.size(); ++j) s += (j ? "," : "") + std::to_string(v[j]);
  return s + ")";
}

}  // namespace

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["suite"] = suite;
  j["algebra"] = algebra;
  j["rank"] = rank;
  j["trials"] = trials;
  j["passes"] = passes;
  j["flagged"] = flagged;
  auto& c = j["counters"] = nlohmann::ordered_json::object();
  for (const auto& [name, count] : counters) c[name] = count;
  auto& f = j["failures"] = nlohmann::ordered_json::array();
  for (const auto& x : failures)
    f.push_back({{"seed", x.seed}, {"input", x.input}, {"expected", x.expected}, {"got", x.got}, {"detail", x.detail}});
  j["ok"] = ok();
  return j.dump(2);
}

std::uint64_t trial_seed(std::uint64_t seed, long long trial) {
  // splitmix64 of the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CrystalElement random_element(const AlgebraSpec& spec, int l, std::mt19937_64& rng) {
  if (spec.family() == Family::A1) {
    // stars and bars
    const int parts = spec.rank() + 1;
    std::vector<int> slots(static_cast<std::size_t>(l + parts - 1));
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    std::vector<int> bars(slots.begin(), slots.begin() + (parts - 1));
    std::sort(bars.begin(), bars.end());
    CrystalElement b{l, {}};
    int prev = -1;
    for (int p : bars) {
      b.x.push_back(p - prev - 1);
      prev = p;
    }
    b.x.push_back(l + parts - 2 - prev);
    return b;
  }
  const auto all = enumerate_crystal(spec, l);
  return all[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(all.size()) - 1))];
}

std::optional<CrystalElement> random_domain_element(const AlgebraSpec& spec, int M, Letter a, int margin,
                                                    std::mt19937_64& rng) {
  if (margin > M) return std::nullopt;
  if (spec.family() == Family::A1) {
    const auto slot = static_cast<std::size_t>(*spec.slot_of(a));
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const int rest = uniform(rng, 0, M - margin);
      CrystalElement b{M, std::vector<int>(static_cast<std::size_t>(spec.rank() + 1), 0)};
      if (rest > 0) {
        const auto others = random_element(AlgebraSpec(Family::A1, std::max(1, spec.rank() - 1)), rest, rng);
        if (spec.rank() == 1) {
          b.x[1 - slot] = rest;
        } else {
          std::size_t q = 0;
          for (std::size_t s = 0; s < b.x.size(); ++s)
            if (s != slot) b.x[s] = others.x[q++];
        }
      }
      b.x[slot] = M - rest;
      if (domain_lead(spec, b, a) >= margin) return b;
    }
    return delta(spec, M, a);
  }
  std::vector<CrystalElement> ok;
  for (const auto& b : enumerate_crystal(spec, M))
    if (domain_lead(spec, b, a) >= margin) ok.push_back(b);
  if (ok.empty()) return std::nullopt;
  return ok[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ok.size()) - 1))];
}

VerifyReport verify_theorem(const RMatrix& r, const TheoremOptions& o) {
  const Crystal& c = r.crystal();
  const AlgebraSpec& spec = c.spec();
  auto rep = start("theorem", spec);

  auto trial = [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const long long k = o.k ? *o.k : uniform(rng, 0, static_cast<int>(spec.d()));
    std::vector<int> shape = o.shape;
    if (shape.empty()) {
      shape.resize(static_cast<std::size_t>(uniform(rng, 1, o.max_factors)));
      for (auto& l : shape) l = uniform(rng, 1, o.max_l);
    }
    const int sum = std::accumulate(shape.begin(), shape.end(), 0);
    const int margin = o.margin ? *o.margin : sum;
    const int lo = std::max({margin, sum, 1});
    const int M = uniform(rng, lo, lo + o.extra_M);
    TensorElement x;
    x.factors.push_back(*random_domain_element(spec, M, spec.letter_at(k), margin, rng));
    for (int l : shape) x.factors.push_back(random_element(spec, l, rng));

    Outcome out;
    const auto res = r_factorized(c, k, x, margin);
    const auto oracle = r.composite(x, 1);
    if (!res.applicable()) {
      out.kind = Outcome::Flag;
      out.flag_reason = res.status == FactorizedResult::Status::OutsideDomain ? "outside domain"
                                                                               : res.failures.front().condition;
    } else if (res.output != oracle) {
      out.kind = Outcome::Fail;
      out.failure = {seed, format_tensor(spec, x) + " k=" + std::to_string(k) + " margin=" + std::to_string(margin),
                     format_tensor(spec, oracle), format_tensor(spec, res.output), "factorized R differs from the oracle"};
    }
    return out;
  };

  if (o.replay) {
    tally(rep, {trial(*o.replay)});
    return rep;
  }
  tally(rep, run_trials(o.trials, o.jobs, [&](long long t) { return trial(trial_seed(o.seed, t)); }));
  return rep;
}

VerifyReport verify_tmap(const Crystal& c, int l) {
  auto rep = start("tmap", c.spec());
  std::map<TVector, CrystalElement> seen;
  for (const auto& b : c.enumerate(l)) {
    ++rep.trials;
    const auto td = c.t_def(b);
    const auto tc = c.t_closed(b);
    if (td != tc) {
      rep.failures.push_back({0, format_element(c.spec(), b), show_vec(tc), show_vec(td), "t_def differs from t_closed"});
      continue;
    }
    const auto [it, fresh] = seen.emplace(td, b);
    if (!fresh) {
      rep.failures.push_back({0, format_element(c.spec(), b), "distinct t", show_vec(td),
                              "same t as " + format_element(c.spec(), it->second)});
      continue;
    }
    ++rep.passes;
  }
  rep.counters.emplace_back("distinct t vectors", static_cast<long long>(seen.size()));
  return rep;
}

VerifyReport verify_yb(const RMatrix& r, int l, int m, int kk) {
  auto rep = start("yb", r.crystal().spec());
  try {
    const auto n = static_cast<long long>(yang_baxter_check(r, l, m, kk));
    rep.trials = rep.passes = n;
  } catch (const OracleError& e) {
    rep.trials = 1;
    rep.failures.push_back({0, "B_" + std::to_string(l) + " x B_" + std::to_string(m) + " x B_" + std::to_string(kk),
                            "", "", e.what()});
  }
  return rep;
}

VerifyReport verify_column(const Crystal& c, const ColumnOptions& o) {
  const AlgebraSpec& spec = c.spec();
  auto rep = start("column", spec);
  tally(rep, run_trials(o.trials, o.jobs, [&](long long t) {
    const auto seed = trial_seed(o.seed, t);
    std::mt19937_64 rng(seed);
    const long long k = uniform(rng, 0, static_cast<int>(spec.d()));
    const int l = uniform(rng, 1, o.max_l);
    const auto b = random_element(spec, l, rng);
    const int M = uniform(rng, l, std::max(l, o.max_M));
    const auto u = *random_domain_element(spec, M, spec.letter_at(k), l, rng);
    Outcome out;
    const auto res = column_diagram_check(c, k, u, b, l);
    if (!res.consistent) {
      out.kind = Outcome::Fail;
      out.failure = {seed, format_element(spec, u) + "." + format_element(spec, b) + " k=" + std::to_string(k),
                     show_vec(res.expected), show_vec(res.outputs), res.detail};
    }
    return out;
  }));
  return rep;
}

VerifyReport verify_corollary(const Automaton& a, const CorollaryOptions& o) {
  const AlgebraSpec& spec = a.spec();
  const long long d = spec.d();
  auto rep = start("corollary", spec);
  tally(rep, run_trials(o.trials, o.jobs, [&](long long t) {
    const auto seed = trial_seed(o.seed, t);
    std::mt19937_64 rng(seed);
    CapacityPattern caps{{}, uniform(rng, -3, 3)};
    const int period = uniform(rng, 1, 3);
    for (int j = 0; j < period; ++j) caps.period.push_back(uniform(rng, 1, o.max_l));
    const long long k = t % d;
    const long long origin = uniform(rng, -4, 4);
    std::vector<CrystalElement> w;
    const int sites = uniform(rng, 1, o.max_sites);
    for (int j = 0; j < sites; ++j) w.push_back(random_element(spec, caps.at(origin + j), rng));
    const auto s = a.normalize(a.make_state(k, caps, origin, w));

    Outcome out;
    auto fail = [&](const std::string& what, const AutomatonState& want, const AutomatonState& got) {
      const auto [lo, hi] = render_range({s, want, got});
      out.kind = Outcome::Fail;
      out.failure = {seed, render_row(a, s, lo, hi) + " k=" + std::to_string(k), render_row(a, want, lo, hi),
                     render_row(a, got, lo, hi), what};
    };
    const auto T = a.evolve_T(s);
    const auto F = a.evolve_T_factorized(s, 1);
    if (F != T) {
      fail("Weyl factorization differs from the carrier", T, F);
      return out;
    }
    const auto fine = a.evolve_fine(s, k + d);
    if (fine != T) {
      fail("fine evolution at k + d differs from T", T, fine);
      return out;
    }
    const auto back = a.evolve_T_factorized(T, -1);
    if (back != s) {
      fail("T^{-1} T is not the identity", s, back);
      return out;
    }
    if (a.excitations(T) != a.excitations(s)) fail("letter counts changed", s, T);
    return out;
  }));
  return rep;
}

VerifyReport verify_admission(const Crystal& c, const std::vector<int>& levels) {
  auto rep = start("admission", c.spec());
  for (int l : levels) {
    for (const auto& ch : admission_suite(c, l)) {
      ++rep.trials;
      rep.counters.emplace_back("B_" + std::to_string(l) + " " + ch.name, ch.checked);
      if (ch.passed) {
        ++rep.passes;
      } else {
        rep.failures.push_back({0, "B_" + std::to_string(l), ch.name, "", ch.detail});
      }
    }
  }
  return rep;
}

}  // namespace crystal_ca

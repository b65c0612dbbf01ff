#include "harity/adversaries.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace harity {

ShatteredScenario ShatteredScenario::binary(int d) {
  ShatteredScenario s;
  s.d = d;
  s.L = 2;
  s.f0.assign(d, 0);
  s.f1.assign(d, 1);
  return s;
}

std::vector<int> ShatteredScenario::table(uint64_t B) const {
  std::vector<int> t(d);
  for (int a = 0; a < d; ++a) t[a] = F(B, a);
  return t;
}

void ShatteredScenario::validate() const {
  if (d < 1 || d > 63) throw std::invalid_argument("shattered set needs 1 ≤ d ≤ 63");
  if (static_cast<int>(f0.size()) != d || static_cast<int>(f1.size()) != d)
    throw std::invalid_argument("witness pair must cover the shattered set");
  for (int a = 0; a < d; ++a)
    if (f0[a] == f1[a]) throw std::invalid_argument("witness pair must differ at every point");
}

UnaryLoss unary_zero_one() {
  return {"01", [](int, int y, int y2) { return y == y2 ? 0.0 : 1.0; }, 1.0, 1.0};
}

UnaryLearner unary_memorize(const ShatteredScenario& sc, std::vector<int> fill, std::string name) {
  if (static_cast<int>(fill.size()) != sc.d) throw std::invalid_argument("fill must cover the shattered set");
  return {std::move(name), [fill](const std::vector<int>& xs, const std::vector<int>& ys) {
            std::vector<int> h = fill;
            for (size_t i = 0; i < xs.size(); ++i) h[xs[i]] = ys[i];
            return h;
          }};
}

UnaryLearner unary_erm(const ShatteredScenario& sc) { return unary_memorize(sc, sc.f0, "erm"); }

UnaryLearner unary_constant(const ShatteredScenario& sc, int side) {
  std::vector<int> h = side ? sc.f1 : sc.f0;
  return {"const" + std::to_string(side), [h](const std::vector<int>&, const std::vector<int>&) { return h; }};
}

double unary_total_loss(const ShatteredScenario& sc, const UnaryLoss& l, uint64_t B, const std::vector<int>& h) {
  double s = 0;
  for (int a = 0; a < sc.d; ++a) s += l.value(a, h[a], sc.F(B, a));
  return s / sc.d;
}

double nfl_lower_bound(double eps, int m, int d, double s, double B) {
  if (d < 1) throw std::invalid_argument("d must be ≥ 1");
  if (!(eps > 0) || eps >= B) throw std::invalid_argument("need 0 < eps < B");
  return ((s / 2) * (1 - static_cast<double>(m) / d) - eps) / (B - eps);
}

Frequency nfl_failure(const UnaryLearner& a, const ShatteredScenario& sc, const UnaryLoss& l, uint64_t B, int m,
                      double eps, int trials, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, sc.d - 1);
  int hits = 0;
  std::vector<int> xs(m), ys(m);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < m; ++i) {
      xs[i] = pick(rng);
      ys[i] = sc.F(B, xs[i]);
    }
    if (unary_total_loss(sc, l, B, a.run(xs, ys)) > eps) ++hits;
  }
  return make_frequency(hits, trials);
}

NflResult nfl_worst_F(const UnaryLearner& a, const ShatteredScenario& sc, const UnaryLoss& l, int m, double eps,
                      int trials, Rng& rng) {
  sc.validate();
  std::vector<uint64_t> cands;
  uint64_t all = sc.d == 64 ? ~uint64_t{0} : (uint64_t{1} << sc.d) - 1;
  if (sc.d <= 12) {
    for (uint64_t B = 0; B <= all; ++B) cands.push_back(B);
  } else {
    cands = {0, all};
    for (int i = 0; i < 64; ++i) cands.push_back(rng() & all);
  }
  NflResult best;
  best.failure.freq = -1;
  for (uint64_t B : cands) {
    Frequency f = nfl_failure(a, sc, l, B, m, eps, trials, rng);
    if (f.freq > best.failure.freq) {
      best.B = B;
      best.failure = f;
    }
  }
  best.candidates = static_cast<int>(cands.size());
  return best;
}

// ---- VCN_k ⇒ non-learnability ----

LossFn capped_loss(const LossFn& l) {
  auto inner = l.exact;
  return make_loss("min(" + l.name + ",1)", l.k, l.partite, l.L, [inner](const Local& z, int y, int y2) {
    Rational v = inner(z, y, y2);
    return v < 1 ? v : Rational(1);
  });
}

Local VcnScenario::lift_point(int j) const {
  Local z = base;
  z[1u << a] = shattered[j].point;
  return z;
}

PSample VcnScenario::lift_sample(const std::vector<int>& xs, const std::vector<int>& ys) const {
  int k = cls.k;
  int m = static_cast<int>(xs.size());
  PSample s{PConfig(k, std::vector<int>(k, m)), {}};
  unsigned free = 1u << a;
  for (size_t idx = 0; idx < s.x.layout.size(); ++idx) {
    PartIndex pi = s.x.layout.part_index(idx);
    unsigned mask = pi.domain_mask();
    s.x.c[idx] = mask == free ? shattered[xs[pi.assignment[0].second - 1]].point : base[mask];
  }
  size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<size_t>(m);
  s.y.resize(total);
  std::vector<int> alpha(k);
  for (size_t r = 0; r < total; ++r) {
    tuple_unrank(r, s.x.layout.sizes(), alpha.data());
    s.y[r] = ys[alpha[a]];
  }
  return s;
}

std::vector<int> VcnScenario::project(const Hypothesis& g) const {
  std::vector<int> h(shattered.size());
  for (size_t j = 0; j < shattered.size(); ++j) h[j] = g(lift_point(static_cast<int>(j)));
  return h;
}

uint64_t VcnScenario::member_for(uint64_t B) const {
  auto want = unary.table(B);
  for (uint64_t i = 0; i < cls.count; ++i)
    if (project(cls.member(i)) == want) return i;
  throw std::logic_error("shattered pattern has no witnessing member");
}

Scenario VcnScenario::scenario(uint64_t B) const { return {mu, std::nullopt, cls.member(member_for(B))}; }

UnaryLearner VcnScenario::wrap(const PLearner& alg) const {
  return {"wrapped " + alg.name, [self = *this, alg](const std::vector<int>& xs, const std::vector<int>& ys) {
            return self.project(alg.run(self.lift_sample(xs, ys), 0));
          }};
}

VcnScenario vcn_nonlearn_scenario(const HypothesisClass& h, int d, const LossFn& ell) {
  if (!h.partite) throw std::invalid_argument("the construction needs a partite class");
  if (d < 1) throw std::invalid_argument("d must be ≥ 1");
  const Template& t = h.tmpl;
  std::vector<std::vector<int>> tables;
  for (uint64_t i = 0; i < h.count; ++i) tables.push_back(tabulate(h.member(i), t));

  for (int a = 0; a < t.k; ++a) {
    unsigned free = 1u << a;
    std::vector<unsigned> fixed;
    for (unsigned mask : canonical_masks(t.k))
      if (!(mask & free)) fixed.push_back(mask);
    uint64_t nfixed = 1;
    for (unsigned m : fixed) nfixed *= static_cast<uint64_t>(t.size_at(m));
    int n_free = t.size_at(free);
    for (uint64_t r0 = 0; r0 < nfixed; ++r0) {
      Local z;  // z^C = 0 on every coordinate that meets a and something else
      uint64_t r = r0;
      for (unsigned m : fixed) {
        z[m] = static_cast<int>(r % static_cast<uint64_t>(t.size_at(m)));
        r /= static_cast<uint64_t>(t.size_at(m));
      }
      FunctionFamily fam;
      fam.domain = n_free;
      fam.L = h.L;
      std::vector<uint64_t> ranks(n_free);
      for (int w = 0; w < n_free; ++w) {
        z[free] = w;
        ranks[w] = t.local_rank(z);
      }
      for (const auto& tab : tables) {
        std::vector<int> f(n_free);
        for (int w = 0; w < n_free; ++w) f[w] = tab[ranks[w]];
        fam.functions.push_back(std::move(f));
      }
      auto wit = find_shattered(fam, d);
      if (!wit) continue;

      VcnScenario out;
      out.cls = h;
      out.loss = capped_loss(ell);
      out.a = a;
      out.base = z;
      out.shattered = *wit;
      out.unary.d = d;
      out.unary.L = h.L;
      for (const auto& w : *wit) {
        out.unary.f0.push_back(w.c0);
        out.unary.f1.push_back(w.c1);
      }
      std::vector<std::vector<Rational>> weights(t.slots());
      for (unsigned mask : canonical_masks(t.k)) {
        auto& wv = weights[t.slot(mask)];
        wv.assign(t.size_at(mask), Rational(0));
        if (mask == free) {
          for (const auto& w : *wit) wv[w.point] = Rational(1, d);
        } else {
          wv[z[mask]] = 1;
        }
      }
      out.mu = ProbTemplate(t, weights);
      LossFn capped = out.loss;
      Local basez = out.base;
      std::vector<int> pts;
      for (const auto& w : *wit) pts.push_back(w.point);
      auto lift = [basez, pts, free](int j) {
        Local q = basez;
        q[free] = pts[j];
        return q;
      };
      double sep = -1;
      for (int j = 0; j < d; ++j)
        for (int y = 0; y < h.L; ++y)
          for (int y2 = 0; y2 < h.L; ++y2)
            if (y != y2) {
              double v = capped.value(lift(j), y, y2);
              sep = sep < 0 ? v : std::min(sep, v);
            }
      // the cap makes 1 a valid bound
      out.unary_loss = {"lifted " + capped.name,
                        [capped, lift](int j, int y, int y2) { return capped.value(lift(j), y, y2); },
                        std::max(sep, 0.0), 1.0};
      return out;
    }
  }
  throw std::runtime_error("no slice with Natarajan dimension ≥ " + std::to_string(d) + " at this truncation");
}

// ---- Ramsey-type subset ----

uint64_t ramsey_rho(int n) {
  if (n < 0) throw std::invalid_argument("n must be ≥ 0");
  if (n <= 2) return static_cast<uint64_t>(n);
  return falling(n, 3) / 2 + 3;
}

std::optional<std::vector<int>> find_clean_subset(const std::vector<int>& f1, const std::vector<int>& f2, int n) {
  int rho = static_cast<int>(f1.size());
  if (f2.size() != static_cast<size_t>(rho) * rho) throw std::invalid_argument("f2 must be a ρ×ρ table");
  if (std::set<int>(f1.begin(), f1.end()).size() != f1.size()) throw std::invalid_argument("f1 must be injective");
  if (n < 0) throw std::invalid_argument("n must be ≥ 0");
  auto pair = [&](int u, int v) { return f2[static_cast<size_t>(u) * rho + v]; };

  // Violations only accumulate as U grows, so a dirty prefix is pruned.
  std::vector<int> U;
  std::multiset<int> image;
  auto dfs = [&](auto&& self, int start) -> bool {
    if (static_cast<int>(U.size()) == n) return true;
    for (int w = start; w <= rho - (n - static_cast<int>(U.size())); ++w) {
      bool ok = true;
      for (size_t i = 0; i < U.size() && ok; ++i)
        for (size_t j = i + 1; j < U.size() && ok; ++j)
          if (pair(U[i], U[j]) == f1[w]) ok = false;
      for (size_t i = 0; i < U.size() && ok; ++i) {
        int c = pair(U[i], w);
        if (c == f1[U[i]] || c == f1[w]) continue;
        if (image.count(c)) ok = false;
      }
      if (!ok) continue;
      U.push_back(w);
      image.insert(f1[w]);
      if (self(self, w + 1)) return true;
      image.erase(image.find(f1[w]));
      U.pop_back();
    }
    return false;
  };
  if (dfs(dfs, 0)) return U;
  if (static_cast<uint64_t>(rho) >= ramsey_rho(n))
    throw std::logic_error("exhaustive Ramsey search missed a subset that must exist");
  return std::nullopt;
}

// ---- partition-family adversary ----

int PartitionAdversary::g(int x1, int x2) const {
  int c = chi2(x1, x2);
  if (c < 0) return 0;
  if (c == chi1(x1)) return 1;
  if (c == chi1(x2)) return 2;
  return 0;
}

int PartitionAdversary::F_at(const std::vector<int>& F, int x) const {
  auto it = std::find(V.begin(), V.end(), x);
  if (it == V.end()) throw std::invalid_argument("point outside the shattered set");
  return F[it - V.begin()];
}

uint64_t PartitionAdversary::B_F(const std::vector<int>& F) const {
  uint64_t B = 0;
  for (size_t i = 0; i < V.size(); ++i)
    if (F[i]) B |= uint64_t{1} << chi1(V[i]);
  return B;
}

std::vector<int> PartitionAdversary::x_b(const std::vector<int>& x, const std::vector<int>& b) const {
  std::vector<int> out(x.size());
  for (size_t t = 0; t < x.size(); ++t) out[t] = b[t] ? x[t] : z;
  return out;
}

std::vector<int> PartitionAdversary::y_bx(const std::vector<int>& x, const std::vector<int>& y,
                                          const std::vector<int>& b) const {
  std::vector<int> out;
  for (size_t a1 = 0; a1 < x.size(); ++a1)
    for (size_t a2 = a1 + 1; a2 < x.size(); ++a2) {
      int v = 0;
      if (!b[a1] && b[a2])
        v = y[a2];
      else if (b[a1] && !b[a2])
        v = y[a1];
      else if (b[a1] && b[a2]) {
        int t = g(x[a1], x[a2]);
        v = t == 1 ? y[a1] : t == 2 ? y[a2] : 0;
      }
      out.push_back(v);
    }
  return out;
}

std::vector<int> PartitionAdversary::G_star(uint64_t B, const std::vector<int>& pts) const {
  std::vector<int> out;
  for (size_t a1 = 0; a1 < pts.size(); ++a1)
    for (size_t a2 = a1 + 1; a2 < pts.size(); ++a2) {
      int c = chi2(pts[a1], pts[a2]);
      out.push_back(c >= 0 && (B >> c & 1u) ? 1 : 0);
    }
  return out;
}

double PartitionAdversary::loss_prime(const LossFn& l, int x, int y, int y2) const {
  int py = pattern_pack({y, y}, 2), py2 = pattern_pack({y2, y2}, 2);
  Local zx, xz;
  zx[1u] = z;
  zx[2u] = x;
  xz[1u] = x;
  xz[2u] = z;
  return (l.value(zx, py, py2) + l.value(xz, py, py2)) / 4;
}

PartitionAdversary make_partition_adversary(const PartitionData& pf, int z, std::vector<int> V) {
  if (z < 0 || z >= pf.n) throw std::invalid_argument("z* outside the vertex set");
  if (pf.classes > 63) throw std::invalid_argument("class bitmasks hold at most 63 classes");
  PartitionAdversary adv{pf, z, std::move(V)};
  std::set<int> seen;
  for (int v : adv.V) {
    if (v < 0 || v >= pf.n || v == z) throw std::invalid_argument("z* does not witness shattering of V′");
    if (!seen.insert(adv.chi1(v)).second) throw std::invalid_argument("z* does not witness shattering of V′");
  }
  return adv;
}

std::optional<std::vector<int>> partition_clean_set(const PartitionData& pf, int z, int n) {
  std::vector<int> V;
  std::set<int> seen;
  for (int v = 0; v < pf.n; ++v)
    if (v != z && seen.insert(pf.at(z, v)).second) V.push_back(v);
  int r = static_cast<int>(V.size());
  std::vector<int> f1(r), f2(static_cast<size_t>(r) * r, -1);
  for (int i = 0; i < r; ++i) {
    f1[i] = pf.at(z, V[i]);
    for (int j = 0; j < r; ++j)
      if (i != j) f2[static_cast<size_t>(i) * r + j] = pf.at(V[i], V[j]);
  }
  auto U = find_clean_subset(f1, f2, n);
  if (!U) return std::nullopt;
  std::vector<int> out;
  for (int i : *U) out.push_back(V[i]);
  return out;
}

uint64_t pf_identity_mismatches(const PartitionAdversary& adv, int m) {
  int d = static_cast<int>(adv.V.size());
  if (d > 16 || m > 6) throw std::length_error("identity sweep limited to |V′| ≤ 16, m ≤ 6");
  uint64_t bad = 0;
  uint64_t nx = 1;
  for (int i = 0; i < m; ++i) nx *= static_cast<uint64_t>(d);
  std::vector<int> F(d), x(m), y(m), b(m);
  for (uint32_t fm = 0; fm < (1u << d); ++fm) {
    for (int i = 0; i < d; ++i) F[i] = fm >> i & 1u;
    uint64_t B = adv.B_F(F);
    for (uint64_t xr = 0; xr < nx; ++xr) {
      uint64_t r = xr;
      for (int t = 0; t < m; ++t) {
        x[t] = adv.V[r % d];
        y[t] = F[r % d];
        r /= d;
      }
      for (uint32_t bm = 0; bm < (1u << m); ++bm) {
        for (int t = 0; t < m; ++t) b[t] = bm >> t & 1u;
        if (adv.y_bx(x, y, b) != adv.G_star(B, adv.x_b(x, b))) ++bad;
      }
    }
  }
  return bad;
}

}  // namespace harity

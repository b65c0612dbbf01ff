#include "harity/reductions.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace harity {

namespace {

// Odometer over independent coordinates; weights[c][v] is the mass of value v at coordinate c.
void enumerate_product(const std::vector<std::vector<Rational>>& weights,
                       const std::function<void(const std::vector<int>&, const Rational&)>& fn) {
  uint64_t total = 1;
  for (const auto& w : weights) total = sat_mul(total, w.size());
  if (total > 1000000) throw std::length_error("exact enumeration limited to 10^6 configurations");
  std::vector<int> cur(weights.size(), 0);
  while (true) {
    Rational p = 1;
    for (size_t c = 0; c < weights.size() && p != 0; ++c) p *= weights[c][cur[c]];
    if (p != 0) fn(cur, p);
    size_t i = weights.size();
    while (i > 0) {
      --i;
      if (++cur[i] < static_cast<int>(weights[i].size())) break;
      cur[i] = 0;
      if (i == 0) return;
    }
    if (weights.empty()) return;
  }
}

// Same odometer without the weights, for pointwise checks.
void enumerate_points(const std::vector<int>& sizes, const std::function<void(const std::vector<int>&)>& fn) {
  uint64_t total = 1;
  for (int n : sizes) total = sat_mul(total, static_cast<uint64_t>(n));
  if (total > 1000000) throw std::length_error("exact enumeration limited to 10^6 configurations");
  std::vector<int> cur(sizes.size(), 0);
  while (true) {
    fn(cur);
    size_t i = sizes.size();
    while (i > 0) {
      --i;
      if (++cur[i] < sizes[i]) break;
      cur[i] = 0;
      if (i == 0) return;
    }
    if (sizes.empty()) return;
  }
}

std::vector<std::vector<Rational>> config_weights(const ProbTemplate& mu, int m) {
  SubsetLayout lay(m, mu.tmpl().k);
  std::vector<std::vector<Rational>> w;
  w.reserve(lay.size());
  for (size_t i = 0; i < lay.size(); ++i) w.push_back(mu.weights()[lay.subset(i).members.size() - 1]);
  return w;
}

std::vector<unsigned> pconfig_masks(const PartLayout& lay) {
  std::vector<unsigned> out;
  for (unsigned mask : canonical_masks(lay.k())) {
    size_t block = 1;
    for (int i : mask_members(mask)) block *= static_cast<size_t>(lay.sizes()[i]);
    out.insert(out.end(), block, mask);
  }
  return out;
}

std::vector<std::vector<Rational>> pconfig_weights(const ProbTemplate& mu, const std::vector<int>& sizes) {
  PartLayout lay(mu.tmpl().k, sizes);
  std::vector<std::vector<Rational>> w;
  for (unsigned mask : pconfig_masks(lay)) w.push_back(mu.weights()[mask - 1]);
  return w;
}

// Sorted members of the layout subset at idx, 0-based.
std::vector<int> members0(const SubsetLayout& lay, size_t idx) {
  std::vector<int> v = lay.subset(idx).members;
  for (auto& a : v) --a;
  return v;
}

}  // namespace

PConfig phi_config(const Config& x, int k) {
  int m = x.m();
  if (k < 1 || m < k) throw std::invalid_argument("φ_m needs m ≥ k ≥ 1");
  int q = m / k;
  PConfig out(k, std::vector<int>(k, q));
  size_t idx = 0;
  int sorted[kMaxArity];
  for (unsigned mask : canonical_masks(k)) {
    auto parts = mask_members(mask);
    int w = static_cast<int>(parts.size());
    int cur[kMaxArity] = {0};
    while (true) {
      // increasing since parts are
      for (int i = 0; i < w; ++i) sorted[i] = parts[i] * q + cur[i];
      out.c[idx++] = x.c[x.layout.index(sorted, w)];
      int i = w - 1;
      while (i >= 0 && ++cur[i] == q) cur[i--] = 0;
      if (i < 0) break;
    }
  }
  return out;
}

std::vector<int> Phi_labels(const std::vector<int>& y, int m, int k, int L) {
  if (y.size() != falling(m, k)) throw std::invalid_argument("label tensor does not match ([m])_k");
  int q = m / k;
  const auto& perms = permutations(k);
  std::vector<int> sizes(k, q);
  uint64_t total = sat_pow(static_cast<uint64_t>(q), static_cast<uint64_t>(k));
  std::vector<int> out(total);
  int a[kMaxArity], beta[kMaxArity], bt[kMaxArity];
  for (uint64_t r = 0; r < total; ++r) {
    tuple_unrank(r, sizes, a);
    for (int i = 0; i < k; ++i) beta[i] = i * q + a[i];
    std::vector<int> entries(perms.size());
    for (size_t p = 0; p < perms.size(); ++p) {
      for (int i = 0; i < k; ++i) bt[i] = beta[perms[p][i]];
      entries[p] = y[injection_rank(bt, k, m)];
    }
    out[r] = pattern_pack(entries, L);
  }
  return out;
}

Law config_law(const ProbTemplate& mu, int m) {
  Law out;
  enumerate_product(config_weights(mu, m), [&](const std::vector<int>& c, const Rational& p) { out[c] += p; });
  return out;
}

Law pconfig_law(const ProbTemplate& mu, const std::vector<int>& sizes) {
  Law out;
  enumerate_product(pconfig_weights(mu, sizes), [&](const std::vector<int>& c, const Rational& p) { out[c] += p; });
  return out;
}

Law phi_pushforward_law(const ProbTemplate& mu, int m) {
  Law out;
  int k = mu.tmpl().k;
  enumerate_product(config_weights(mu, m), [&](const std::vector<int>& c, const Rational& p) {
    Config x(m, k);
    x.c = c;
    out[phi_config(x, k).c] += p;
  });
  return out;
}

bool check_partization_square(const Hypothesis& f, const Template& t, int m) {
  int k = t.k;
  Hypothesis fp = partize_hypothesis(f);
  SubsetLayout lay(m, k);
  std::vector<int> sizes(lay.size());
  for (size_t i = 0; i < lay.size(); ++i) sizes[i] = t.n[lay.subset(i).members.size() - 1];
  bool ok = true;
  enumerate_points(sizes, [&](const std::vector<int>& c) {
    if (!ok) return;
    Config x(m, k);
    x.c = c;
    ok = Phi_labels(star(f, x), m, k, f.L) == star(fp, phi_config(x, k));
  });
  return ok;
}

bool check_phi_iota(const Template& t) {
  // ι_kpart and φ_k both act as the identity on local storage; confirm against the index maps.
  int k = t.k;
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    Config x(k, k);
    for (size_t i = 0; i < x.c.size(); ++i) {
      auto mem = members0(x.layout, i);
      unsigned mask = 0;
      for (int v : mem) mask |= 1u << v;
      x.c[i] = z[mask];
    }
    PConfig p = phi_config(x, k);
    int ones[kMaxArity] = {0};
    Local back = pullback_partite(p, ones);
    if (!(back == z)) return false;
  }
  return true;
}

NLearner nonpartite_from_partite(const PLearner& a, int k, int base_L) {
  NLearner out;
  out.name = "nonpartite(" + a.name + ")";
  out.R = [a, k](int m) { return a.R(m / k); };
  out.run = [a, k, base_L](const NSample& s, uint64_t b) {
    int m = s.x.m();
    PSample ps{phi_config(s.x, k), Phi_labels(s.y, m, k, base_L)};
    return departize_hypothesis(a.run(ps, b), base_L);
  };
  return out;
}

const std::vector<unsigned>& k_subsets(int k, int i) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<unsigned>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, i);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<unsigned> out;
  for (const auto& s : enumerate_subsets(k, k))
    if (static_cast<int>(s.members.size()) == i) out.push_back(s.mask());
  return cache.emplace(key, std::move(out)).first->second;
}

int k_subset_index(int k, unsigned mask) {
  const auto& v = k_subsets(k, popcount(mask));
  auto it = std::find(v.begin(), v.end(), mask);
  if (it == v.end()) throw std::invalid_argument("mask is not a subset of [k]");
  return static_cast<int>(it - v.begin());
}

Disintegration disintegrate_finite(const ProbTemplate& mu) {
  const Template& t = mu.tmpl();
  if (!t.partite) throw std::invalid_argument("disintegration starts from a partite measure");
  int k = t.k;
  Disintegration d;
  for (int i = 1; i <= k; ++i) {
    const auto& B = k_subsets(k, i);
    int n = t.size_at(B[0]);
    for (unsigned b : B)
      if (t.size_at(b) != n) throw std::invalid_argument("spaces of equal arity must have equal size");
    Rational inv = Rational(1, static_cast<long long>(B.size()));
    std::vector<Rational> hat(n, 0);
    std::vector<std::vector<Rational>> nu(n, std::vector<Rational>(B.size(), 0)), eta = nu;
    for (int w = 0; w < n; ++w)
      for (size_t j = 0; j < B.size(); ++j) {
        nu[w][j] = inv * mu.weight(static_cast<int>(B[j]) - 1, w);
        hat[w] += nu[w][j];
      }
    for (int w = 0; w < n; ++w)
      for (size_t j = 0; j < B.size(); ++j)
        eta[w][j] = hat[w] == 0 ? Rational(j == 0 ? 1 : 0) : nu[w][j] / hat[w];
    d.mu_hat.push_back(std::move(hat));
    d.nu.push_back(std::move(nu));
    d.eta.push_back(std::move(eta));
  }
  return d;
}

uint64_t departization_R(int m, int k) {
  uint64_t r = factorial(m);
  for (int i = 1; i <= std::min(m, k); ++i)
    r = sat_mul(r, sat_pow(binom(k, i), sat_mul(2, binom(m, i))));
  return r;
}

Injection unrank_permutation(uint64_t r, int m) {
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  Injection p(m);
  for (int i = 0; i < m; ++i) {
    uint64_t f = factorial(m - 1 - i);
    size_t d = static_cast<size_t>(r / f);
    r %= f;
    p[i] = pool[d];
    pool.erase(pool.begin() + static_cast<long>(d));
  }
  return p;
}

uint64_t rank_permutation(const Injection& p) {
  int m = static_cast<int>(p.size());
  uint64_t r = 0;
  for (int i = 0; i < m; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < m; ++j)
      if (p[j] < p[i]) ++smaller;
    r += static_cast<uint64_t>(smaller) * factorial(m - 1 - i);
  }
  return r;
}

DepartizationRandomness decode_departization(uint64_t b, int m, int k) {
  if (departization_R(m, k) == UINT64_MAX) throw std::length_error("departization randomness exceeds 64 bits");
  SubsetLayout lay(m, k);
  DepartizationRandomness r;
  uint64_t f = factorial(m);
  r.sigma = unrank_permutation(b % f, m);
  b /= f;
  for (auto* U : {&r.U, &r.U2}) {
    U->resize(lay.size());
    for (size_t i = 0; i < lay.size(); ++i) {
      uint64_t c = binom(k, static_cast<int>(lay.subset(i).members.size()));
      (*U)[i] = static_cast<int>(b % c);
      b /= c;
    }
  }
  return r;
}

DepartizationRandomness draw_departization(int m, int k, Rng& rng) {
  SubsetLayout lay(m, k);
  DepartizationRandomness r;
  r.sigma = identity(m);
  std::shuffle(r.sigma.begin(), r.sigma.end(), rng);
  for (auto* U : {&r.U, &r.U2}) {
    U->resize(lay.size());
    for (size_t i = 0; i < lay.size(); ++i) {
      int c = static_cast<int>(binom(k, static_cast<int>(lay.subset(i).members.size())));
      (*U)[i] = std::uniform_int_distribution<int>(0, c - 1)(rng);
    }
  }
  return r;
}

Injection sigma_alpha(const Injection& sigma_inv, const int* alpha, int k) {
  Injection tau(k);
  std::iota(tau.begin(), tau.end(), 0);
  std::sort(tau.begin(), tau.end(), [&](int a, int b) { return sigma_inv[alpha[a]] < sigma_inv[alpha[b]]; });
  return tau;
}

Config departize_point(const PConfig& x, const Injection& sigma, const std::vector<int>& U) {
  int k = x.k();
  int m = static_cast<int>(sigma.size());
  for (int v : x.layout.sizes())
    if (v != m) throw std::invalid_argument("departization needs m points in every part");
  Injection sinv = inverse(sigma);
  Config out(m, k);
  int vals[kMaxArity];
  for (size_t i = 0; i < out.c.size(); ++i) {
    auto C = members0(out.layout, i);
    int s = static_cast<int>(C.size());
    std::vector<int> pre(s);
    for (int j = 0; j < s; ++j) pre[j] = sinv[C[j]];
    std::sort(pre.begin(), pre.end());
    unsigned umask = k_subsets(k, s)[U[i]];
    // j-th smallest part of U_C ↦ σ(j-th smallest element of σ⁻¹(C))
    for (int j = 0; j < s; ++j) vals[j] = sigma[pre[j]];
    out.c[i] = x.c[x.layout.index(umask, vals)];
  }
  return out;
}

std::vector<int> departize_labels(const std::vector<int>& y, int m, int k, int base_L,
                                  const DepartizationRandomness& r) {
  std::vector<int> sizes(k, m);
  if (y.size() != sat_pow(static_cast<uint64_t>(m), static_cast<uint64_t>(k)))
    throw std::invalid_argument("label tensor does not match [m]^k");
  SubsetLayout lay(m, k);
  Injection sinv = inverse(r.sigma);
  std::vector<int> out(falling(m, k), base_L);
  int img[kMaxArity], tup[kMaxArity];
  for (const auto& alpha : enumerate_injections(k, m)) {
    Injection tau = sigma_alpha(sinv, alpha.data(), k);
    Injection tinv = inverse(tau);
    bool good = true;
    for (unsigned C = 1; C < (1u << k) && good; ++C) {
      int s = 0;
      for (int i = 0; i < k; ++i)
        if (C >> i & 1u) img[s++] = alpha[i];
      std::sort(img, img + s);
      size_t idx = lay.index(img, s);
      unsigned target = image_mask(tinv, C);
      int want = k_subset_index(k, target);
      good = r.U[idx] == want && r.U2[idx] == want;
    }
    if (!good) continue;
    for (int i = 0; i < k; ++i) tup[i] = alpha[tau[i]];
    int pattern = y[tuple_rank(tup, sizes)];
    out[injection_rank(alpha.data(), k, m)] = pattern_get(pattern, base_L, permutation_rank(tinv));
  }
  return out;
}

NSample departize_sample(const PSample& s, int base_L, const DepartizationRandomness& r) {
  int m = static_cast<int>(r.sigma.size());
  NSample out;
  out.x = departize_point(s.x, r.sigma, r.U);
  out.y = departize_labels(s.y, m, s.x.k(), base_L, r);
  return out;
}

Rational departization_p_exact(int k) {
  Rational p = 1;
  for (int i = 1; i <= k; ++i) {
    long long c = static_cast<long long>(binom(k, i));
    for (long long e = 0; e < 2 * c; ++e) p /= c;
  }
  return p;
}

double departization_p(int k) { return to_double(departization_p_exact(k)); }

namespace {

// Partite pullback of the pair (x, x′) joined on F's template.
Local joint_partite(const PConfig& x, const PConfig& x2, const int* tup, const Template& aux) {
  return join_local(pullback_partite(x, tup), pullback_partite(x2, tup), aux);
}

void require_equal_arity_sizes(const Template& t) {
  for (int i = 1; i <= t.k; ++i) {
    const auto& B = k_subsets(t.k, i);
    for (unsigned b : B)
      if (t.size_at(b) != t.size_at(B[0])) throw std::invalid_argument("spaces of equal arity must have equal size");
  }
}

}  // namespace

Law departization_law(const Scenario& sc, int m, int base_L) {
  if (!sc.partite()) throw std::invalid_argument("departization starts from a partite adversary");
  int k = sc.k();
  ProbTemplate aux = sc.aux();
  std::vector<int> sizes(k, m);
  auto w1 = pconfig_weights(sc.mu, sizes);
  auto w2 = pconfig_weights(aux, sizes);
  uint64_t R = departization_R(m, k);
  if (R > 1000000) throw std::length_error("departization randomness too large to enumerate");
  Rational inv_R = Rational(1, static_cast<long long>(R));
  std::vector<DepartizationRandomness> rs;
  for (uint64_t b = 0; b < R; ++b) rs.push_back(decode_departization(b, m, k));

  Law out;
  enumerate_product(w1, [&](const std::vector<int>& c1, const Rational& p1) {
    PConfig x(k, sizes);
    x.c = c1;
    enumerate_product(w2, [&](const std::vector<int>& c2, const Rational& p2) {
      PConfig x2(k, sizes);
      x2.c = c2;
      std::vector<int> y(sat_pow(static_cast<uint64_t>(m), static_cast<uint64_t>(k)));
      int tup[kMaxArity];
      for (uint64_t r = 0; r < y.size(); ++r) {
        tuple_unrank(r, sizes, tup);
        y[r] = sc.F(joint_partite(x, x2, tup, aux.tmpl()));
      }
      for (const auto& rr : rs) {
        std::vector<int> key = departize_point(x, rr.sigma, rr.U).c;
        auto xb = departize_point(x2, rr.sigma, rr.U2).c;
        key.insert(key.end(), xb.begin(), xb.end());
        key.push_back(static_cast<int>(rank_permutation(rr.sigma)));
        key.insert(key.end(), rr.U.begin(), rr.U.end());
        key.insert(key.end(), rr.U2.begin(), rr.U2.end());
        auto yl = departize_labels(y, m, k, base_L, rr);
        key.insert(key.end(), yl.begin(), yl.end());
        out[key] += p1 * p2 * inv_R;
      }
    });
  });
  return out;
}

namespace {

// Per-coordinate laws of (w, j) under ν over r(m,k), encoded as w·binom(k,|C|) + j.
std::vector<std::vector<Rational>> nu_weights(const ProbTemplate& mu, int m) {
  int k = mu.tmpl().k;
  Disintegration d = disintegrate_finite(mu);
  SubsetLayout lay(m, k);
  std::vector<std::vector<Rational>> w;
  for (size_t i = 0; i < lay.size(); ++i) {
    int s = static_cast<int>(lay.subset(i).members.size());
    std::vector<Rational> v;
    for (const auto& row : d.nu[s - 1])
      for (const auto& p : row) v.push_back(p);
    w.push_back(std::move(v));
  }
  return w;
}

struct TildeConfig {
  Config x;           // w parts
  std::vector<int> j;  // lex indices
};

TildeConfig split_tilde(const std::vector<int>& c, int m, int k) {
  TildeConfig t{Config(m, k), std::vector<int>(c.size())};
  for (size_t i = 0; i < c.size(); ++i) {
    int nb = static_cast<int>(binom(k, static_cast<int>(t.x.layout.subset(i).members.size())));
    t.x.c[i] = c[i] / nb;
    t.j[i] = c[i] % nb;
  }
  return t;
}

// ỹ over ([m])_k; ⊥ = base_L.
std::vector<int> tilde_labels(const TildeConfig& a, const TildeConfig& b, const Injection& sigma, const Hypothesis& F,
                              const Template& aux, int base_L) {
  int m = a.x.m();
  int k = F.k;
  Injection sinv = inverse(sigma);
  std::vector<int> out(falling(m, k), base_L);
  int img[kMaxArity];
  for (const auto& alpha : enumerate_injections(k, m)) {
    Injection tau = sigma_alpha(sinv, alpha.data(), k);
    Injection tinv = inverse(tau);
    bool good = true;
    for (unsigned C = 1; C < (1u << k) && good; ++C) {
      int s = 0;
      for (int i = 0; i < k; ++i)
        if (C >> i & 1u) img[s++] = alpha[i];
      std::sort(img, img + s);
      size_t idx = a.x.layout.index(img, s);
      // α*(j)_C = j_{α(C)} must select B = σ_α⁻¹(C)
      int want = k_subset_index(k, image_mask(tinv, C));
      good = a.j[idx] == want && b.j[idx] == want;
    }
    if (!good) continue;
    Injection comp(k);
    for (int i = 0; i < k; ++i) comp[i] = alpha[tau[i]];
    Local za = pullback(a.x, comp.data(), k), zb = pullback(b.x, comp.data(), k);
    int pattern = F(join_local(za, zb, aux));
    out[injection_rank(alpha.data(), k, m)] = pattern_get(pattern, base_L, permutation_rank(tinv));
  }
  return out;
}

}  // namespace

Law discrete_equivalent_law(const Scenario& sc, int m, int base_L) {
  if (!sc.partite()) throw std::invalid_argument("departization starts from a partite adversary");
  int k = sc.k();
  ProbTemplate aux = sc.aux();
  require_equal_arity_sizes(sc.mu.tmpl());
  require_equal_arity_sizes(aux.tmpl());
  auto w1 = nu_weights(sc.mu, m);
  auto w2 = nu_weights(aux, m);
  uint64_t f = factorial(m);
  Rational inv_f = Rational(1, static_cast<long long>(f));
  Law out;
  enumerate_product(w1, [&](const std::vector<int>& c1, const Rational& p1) {
    TildeConfig a = split_tilde(c1, m, k);
    enumerate_product(w2, [&](const std::vector<int>& c2, const Rational& p2) {
      TildeConfig b = split_tilde(c2, m, k);
      for (uint64_t s = 0; s < f; ++s) {
        Injection sigma = unrank_permutation(s, m);
        std::vector<int> key = a.x.c;
        key.insert(key.end(), b.x.c.begin(), b.x.c.end());
        key.push_back(static_cast<int>(s));
        key.insert(key.end(), a.j.begin(), a.j.end());
        key.insert(key.end(), b.j.begin(), b.j.end());
        auto yl = tilde_labels(a, b, sigma, sc.F, aux.tmpl(), base_L);
        key.insert(key.end(), yl.begin(), yl.end());
        out[key] += p1 * p2 * inv_f;
      }
    });
  });
  return out;
}

DecompositionReport loss_decomposition(const Scenario& sc, int base_L, const LossFn& l_ext,
                                       const NeutralSymbolInfo& n, const Hypothesis& H) {
  if (!sc.partite()) throw std::invalid_argument("departization starts from a partite adversary");
  int k = sc.k();
  ProbTemplate aux = sc.aux();
  Hypothesis Hx = extend_codomain(H, base_L + 1);
  auto w1 = nu_weights(sc.mu, k);
  auto w2 = nu_weights(aux, k);
  uint64_t f = factorial(k);
  Rational inv_f = Rational(1, static_cast<long long>(f));
  DecompositionReport rep;
  rep.lhs = 0;
  rep.p = 0;
  Rational c_mass = 0;
  Rational c_acc = 0;
  enumerate_product(w1, [&](const std::vector<int>& c1, const Rational& p1) {
    TildeConfig a = split_tilde(c1, k, k);
    enumerate_product(w2, [&](const std::vector<int>& c2, const Rational& p2) {
      TildeConfig b = split_tilde(c2, k, k);
      for (uint64_t s = 0; s < f; ++s) {
        Injection sigma = unrank_permutation(s, k);
        Rational pr = p1 * p2 * inv_f;
        auto yl = tilde_labels(a, b, sigma, sc.F, aux.tmpl(), base_L);
        // over [k], ([k])_k in injection order is S_k in lex order
        int pattern = pattern_pack(yl, base_L + 1);
        int ident[kMaxArity];
        std::iota(ident, ident + k, 0);
        Local z = pullback(a.x, ident, k);
        rep.lhs += pr * l_ext.exact(z, predict(Hx, z), pattern);
        if (contains_bottom(pattern, n, k, false)) {
          c_mass += pr;
          c_acc += pr * n.bottom_cost(z);
        } else {
          rep.p += pr;
        }
      }
    });
  });
  rep.C = c_mass == 0 ? Rational(0) : c_acc / c_mass;
  // ℓ^kpart on partite patterns (base base_L, no ⊥): reuse the extended rule after rebasing
  LossFn lp = make_loss(l_ext.name + "^kpart", k, true, pattern_count(base_L, k),
                        [l_ext, base_L, k](const Local& z, int y, int y2) {
                          return l_ext.exact(z, pattern_rebase(y, base_L, base_L + 1, k),
                                             pattern_rebase(y2, base_L, base_L + 1, k));
                        });
  rep.partite = total_loss(sc.mu, aux, sc.F, lp, partize_hypothesis(H));
  return rep;
}

PLearner departize_learner(const NLearner& a, int k, int base_L) {
  PLearner out;
  out.name = "departize(" + a.name + ")";
  out.R = [a, k](int m) { return sat_mul(a.R(m), departization_R(m, k)); };
  out.run = [a, k, base_L](const PSample& s, uint64_t b) {
    int m = s.x.layout.sizes()[0];
    uint64_t ra = a.R(m);
    uint64_t bA = b % ra;
    uint64_t rest = b / ra;
    DepartizationRandomness r;
    if (departization_R(m, k) == UINT64_MAX || sat_mul(ra, departization_R(m, k)) == UINT64_MAX) {
      Rng rng = make_rng(rest, 0x6465706172ull);
      r = draw_departization(m, k, rng);
    } else {
      r = decode_departization(rest, m, k);
    }
    Hypothesis h = a.run(departize_sample(s, base_L, r), bA);
    return partize_hypothesis(strip_codomain(h, base_L));
  };
  return out;
}

std::vector<int> sample_g_star(const FlexibilityWitness& w, const Config& x, Rng& rng) {
  int m = x.m();
  int k = w.k;
  const auto& perms = permutations(k);
  std::vector<int> y(falling(m, k), 0);
  int beta[kMaxArity];
  for (const auto& U : enumerate_subsets(m, k)) {
    if (static_cast<int>(U.members.size()) != k) continue;
    Injection a(k);
    for (int i = 0; i < k; ++i) a[i] = U.members[i] - 1;
    auto law = w.pattern_law(pullback(x, a.data(), k));
    std::vector<double> pd;
    for (const auto& p : law) pd.push_back(to_double(p));
    int pattern = std::discrete_distribution<int>(pd.begin(), pd.end())(rng);
    for (size_t r = 0; r < perms.size(); ++r) {
      for (int i = 0; i < k; ++i) beta[i] = a[perms[r][i]];
      y[injection_rank(beta, k, m)] = pattern_get(pattern, w.L, static_cast<int>(r));
    }
  }
  return y;
}

NLearner neutral_symbol_learner(const NLearner& a, const FlexibilityWitness& w, int base_L) {
  NLearner out;
  out.name = "neutral(" + a.name + ")";
  out.R = [a, w](int m) { return sat_mul(a.R(m), w.R_N(m)); };
  out.run = [a, w, base_L](const NSample& s, uint64_t b) {
    int m = s.x.m();
    int k = w.k;
    uint64_t ra = a.R(m);
    uint64_t bA = b % ra, bN = b / ra;
    std::vector<int> fill;
    if (w.R_N(m) == UINT64_MAX || sat_mul(ra, w.R_N(m)) == UINT64_MAX) {
      Rng rng = make_rng(bN, 0x6e657574ull);
      fill = sample_g_star(w, s.x, rng);
    } else {
      fill = w.N(m, bN);
    }
    NSample t = s;
    const auto& perms = permutations(k);
    int beta[kMaxArity];
    for (const auto& U : enumerate_subsets(m, k)) {
      if (static_cast<int>(U.members.size()) != k) continue;
      Injection alpha(k);
      for (int i = 0; i < k; ++i) alpha[i] = U.members[i] - 1;
      bool bottom = false;
      std::vector<uint64_t> ranks;
      for (const auto& p : perms) {
        for (int i = 0; i < k; ++i) beta[i] = alpha[p[i]];
        ranks.push_back(injection_rank(beta, k, m));
        bottom = bottom || s.y[ranks.back()] == base_L;
      }
      if (bottom)
        for (uint64_t r : ranks) t.y[r] = fill[r];
    }
    return extend_codomain(a.run(t, bA), base_L + 1);
  };
  return out;
}

Hypothesis extend_codomain(const Hypothesis& h, int new_L) {
  if (new_L < h.L) throw std::invalid_argument("codomain can only grow");
  Hypothesis out = h;
  out.L = new_L;
  return out;
}

HypothesisClass extend_codomain(const HypothesisClass& c, int new_L) {
  HypothesisClass out = c;
  out.L = new_L;
  out.member = [c, new_L](uint64_t i) { return extend_codomain(c.member(i), new_L); };
  out.erm01 = nullptr;
  return out;
}

Hypothesis strip_codomain(const Hypothesis& h, int base_L) {
  Hypothesis out = h;
  out.L = base_L;
  return out;
}

double delta_tilde(double eps, double delta, double sup_norm) {
  return std::min(eps * delta / (2.0 * sup_norm), 0.5);
}

double delta_hat(double eps, double delta, double sup_norm, double p) {
  return std::min({p * eps * eps * delta / (8.0 * sup_norm * sup_norm), p * eps / (8.0 * sup_norm), 0.5});
}

SampleSize departized_sample_size(const SampleSize& m_a, int k, double sup_norm) {
  double p = departization_p(k);
  return [m_a, p, sup_norm](double eps, double delta) {
    return m_a(p * eps / 2.0, delta_tilde(eps, delta, sup_norm));
  };
}

SampleSize composed_sample_size(const SampleSize& m_a, int k, double sup_norm) {
  double p = departization_p(k);
  return [m_a, p, sup_norm](double eps, double delta) {
    return m_a(p * eps / 4.0, delta_hat(eps, delta, sup_norm, p));
  };
}

SampleSize neutral_sample_size(const SampleSize& m_a, double sup_norm) {
  return [m_a, sup_norm](double eps, double delta) { return m_a(eps / 2.0, delta_tilde(eps, delta, sup_norm)); };
}

NSample strip_dummy_sample(const NSample& s, int k) {
  NSample out = s;
  const SubsetLayout& lay = out.x.layout;
  for (size_t i = 0; i < out.x.c.size(); ++i)
    if (static_cast<int>(lay.subset(i).members.size()) > k) out.x.c[i] = 0;
  return out;
}

NLearner strip_dummy(const NLearner& a, int k) {
  NLearner out = a;
  out.name = "strip(" + a.name + ")";
  out.run = [a, k](const NSample& s, uint64_t b) { return a.run(strip_dummy_sample(s, k), b); };
  return out;
}

}  // namespace harity

#include "harity/losses.hpp"

#include <algorithm>
#include <stdexcept>

namespace harity {

namespace {

constexpr uint64_t kExactCap = 1000000;

void require_enumerable(uint64_t n) {
  if (n > kExactCap) throw std::length_error("exact enumeration needs at most 10^6 points");
}

// Pad μ′ to arity k so that products line up.
Template padded(const Template& t, int k) {
  if (t.k == k) return t;
  if (t.partite || t.k > k) throw std::invalid_argument("auxiliary template arity mismatch");
  Template out = t;
  out.k = k;
  out.n.resize(k, 1);
  return out;
}

ProbTemplate padded(const ProbTemplate& mu, int k) {
  if (mu.tmpl().k == k) return mu;
  Template t = padded(mu.tmpl(), k);
  auto w = mu.weights();
  while (static_cast<int>(w.size()) < k) w.push_back({Rational(1)});
  return ProbTemplate(t, std::move(w));
}

}  // namespace

LossFn zero_one_loss(int L, int k, bool partite) {
  LossFn l;
  l.name = "01";
  l.k = k;
  l.partite = partite;
  l.L = L;
  l.exact = [](const Local&, int y, int y2) { return Rational(y != y2 ? 1 : 0); };
  l.value = [](const Local&, int y, int y2) { return y != y2 ? 1.0 : 0.0; };
  return l;
}

LossFn make_loss(std::string name, int k, bool partite, int L, std::function<Rational(const Local&, int, int)> rule) {
  LossFn l;
  l.name = std::move(name);
  l.k = k;
  l.partite = partite;
  l.L = L;
  l.exact = rule;
  l.value = [rule](const Local& z, int y, int y2) { return to_double(rule(z, y, y2)); };
  return l;
}

LossFlags loss_flags(const LossFn& l, const Template& t) {
  LossFlags f;
  int n = l.arg_count();
  bool first_sep = true;
  bool zero_diag = true;
  bool sym = !l.partite;
  const auto& perms = permutations(l.k);
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    for (int y = 0; y < n; ++y)
      for (int y2 = 0; y2 < n; ++y2) {
        Rational v = l.exact(z, y, y2);
        if (v > f.sup_norm) f.sup_norm = v;
        if (y == y2) {
          if (v != 0) zero_diag = false;
        } else if (first_sep || v < f.separation) {
          f.separation = v;
          first_sep = false;
        }
        if (sym)
          for (const auto& s : perms) {
            Rational w = l.exact(pullback_local(s, z), pattern_pullback(y, l.L, l.k, s), pattern_pullback(y2, l.L, l.k, s));
            if (w != v) {
              sym = false;
              break;
            }
          }
      }
  }
  f.separated = zero_diag && f.separation > 0;
  f.symmetric = sym;
  return f;
}

int predict(const Hypothesis& h, const Local& z) { return h.partite ? h(z) : star_pattern(h, z); }

AgnosticLossFn wrap_agnostic(const LossFn& l) {
  AgnosticLossFn a;
  a.name = l.name + "^ag";
  a.k = l.k;
  a.partite = l.partite;
  a.L = l.L;
  a.exact = [l](const Hypothesis& h, const Local& z, int y) { return l.exact(z, predict(h, z), y); };
  a.local_part = l;
  a.regularizer = [](const Hypothesis&) { return Rational(0); };
  return a;
}

bool check_locality(const AgnosticLossFn& l, const HypothesisClass& h) {
  if (!l.local_part) return false;
  int n = l.local_part->arg_count();
  for (uint64_t i = 0; i < h.count; ++i) {
    Hypothesis H = h.member(i);
    Rational reg = l.regularizer ? l.regularizer(H) : Rational(0);
    for (uint64_t r = 0; r < h.tmpl.local_count(); ++r) {
      Local z = h.tmpl.local_unrank(r);
      int p = predict(H, z);
      for (int y = 0; y < n; ++y)
        if (l.exact(H, z, y) != l.local_part->exact(z, p, y) + reg) return false;
    }
  }
  return true;
}

Rational agnostic_sup_norm(const AgnosticLossFn& l, const HypothesisClass& h) {
  Rational best = 0;
  int n = l.partite ? l.L : pattern_count(l.L, l.k);
  for (uint64_t i = 0; i < h.count; ++i) {
    Hypothesis H = h.member(i);
    for (uint64_t r = 0; r < h.tmpl.local_count(); ++r) {
      Local z = h.tmpl.local_unrank(r);
      for (int y = 0; y < n; ++y) best = std::max(best, l.exact(H, z, y));
    }
  }
  return best;
}

bool agnostic_symmetric(const AgnosticLossFn& l, const HypothesisClass& h) {
  if (l.partite) return false;
  int n = pattern_count(l.L, l.k);
  for (uint64_t i = 0; i < h.count; ++i) {
    Hypothesis H = h.member(i);
    for (uint64_t r = 0; r < h.tmpl.local_count(); ++r) {
      Local z = h.tmpl.local_unrank(r);
      for (int y = 0; y < n; ++y)
        for (const auto& s : permutations(l.k))
          if (l.exact(H, pullback_local(s, z), pattern_pullback(y, l.L, l.k, s)) != l.exact(H, z, y)) return false;
    }
  }
  return true;
}

Rational total_loss(const ProbTemplate& mu, const Hypothesis& f, const LossFn& l, const Hypothesis& h) {
  const Template& t = mu.tmpl();
  require_enumerable(t.local_count());
  Rational acc = 0;
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    Rational p = mu.local_mass(z);
    if (p == 0) continue;
    acc += p * l.exact(z, predict(h, z), predict(f, z));
  }
  return acc;
}

Rational total_loss(const ProbTemplate& mu, const ProbTemplate& mu2_in, const Hypothesis& f, const LossFn& l,
                    const Hypothesis& h) {
  const Template& t = mu.tmpl();
  ProbTemplate mu2 = t.partite ? mu2_in : padded(mu2_in, t.k);
  const Template& t2 = mu2.tmpl();
  require_enumerable(sat_mul(t.local_count(), t2.local_count()));
  Rational acc = 0;
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    Rational p = mu.local_mass(z);
    if (p == 0) continue;
    int hp = predict(h, z);
    for (uint64_t r2 = 0; r2 < t2.local_count(); ++r2) {
      Local z2 = t2.local_unrank(r2);
      Rational q = mu2.local_mass(z2);
      if (q == 0) continue;
      acc += p * q * l.exact(z, hp, predict(f, join_local(z, z2, t2)));
    }
  }
  return acc;
}

Rational total_loss(const ProbTemplate& mu, const ProbTemplate& mu2_in, const Hypothesis& f, const AgnosticLossFn& l,
                    const Hypothesis& h) {
  const Template& t = mu.tmpl();
  ProbTemplate mu2 = t.partite ? mu2_in : padded(mu2_in, t.k);
  const Template& t2 = mu2.tmpl();
  require_enumerable(sat_mul(t.local_count(), t2.local_count()));
  Rational acc = 0;
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    Rational p = mu.local_mass(z);
    if (p == 0) continue;
    for (uint64_t r2 = 0; r2 < t2.local_count(); ++r2) {
      Local z2 = t2.local_unrank(r2);
      Rational q = mu2.local_mass(z2);
      if (q == 0) continue;
      acc += p * q * l.exact(h, z, predict(f, join_local(z, z2, t2)));
    }
  }
  return acc;
}

double total_loss_d(const ProbTemplate& mu, const ProbTemplate& mu2_in, const Hypothesis& f, const LossFn& l,
                    const Hypothesis& h) {
  const Template& t = mu.tmpl();
  ProbTemplate mu2 = t.partite ? mu2_in : padded(mu2_in, t.k);
  const Template& t2 = mu2.tmpl();
  require_enumerable(sat_mul(t.local_count(), t2.local_count()));
  double acc = 0;
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    double p = mu.local_mass_d(z);
    if (p == 0) continue;
    int hp = predict(h, z);
    for (uint64_t r2 = 0; r2 < t2.local_count(); ++r2) {
      Local z2 = t2.local_unrank(r2);
      double q = mu2.local_mass_d(z2);
      if (q == 0) continue;
      acc += p * q * l.value(z, hp, predict(f, join_local(z, z2, t2)));
    }
  }
  return acc;
}

OrderChoice OrderChoice::canonical(int m, int k) {
  OrderChoice oc;
  oc.m = m;
  oc.k = k;
  for (auto& s : enumerate_subsets(m, k)) {
    if (static_cast<int>(s.members.size()) != k) continue;
    Injection a;
    for (int v : s.members) a.push_back(v - 1);
    oc.alpha.push_back(std::move(a));
  }
  return oc;
}

bool OrderChoice::valid() const {
  auto subs = OrderChoice::canonical(m, k).alpha;
  if (subs.size() != alpha.size()) return false;
  for (size_t i = 0; i < subs.size(); ++i) {
    if (!is_injection(alpha[i], m) || static_cast<int>(alpha[i].size()) != k) return false;
    Injection sorted = alpha[i];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != subs[i]) return false;
  }
  return true;
}

SampleStats stats_partite(const PConfig& x, const std::vector<int>& y) {
  SampleStats s;
  const auto& sizes = x.layout.sizes();
  int alpha[kMaxArity];
  for (uint64_t r = 0; r < y.size(); ++r) {
    tuple_unrank(r, sizes, alpha);
    s.add(pullback_partite(x, alpha), y[r]);
  }
  return s;
}

SampleStats stats_nonpartite(const Config& x, const std::vector<int>& y, int k, int L, const OrderChoice& oc) {
  SampleStats s;
  const auto& perms = permutations(k);
  int m = x.m();
  int beta[kMaxArity];
  for (const auto& a : oc.alpha) {
    Local z = pullback(x, a.data(), k);
    int p = 0;
    for (int r = static_cast<int>(perms.size()) - 1; r >= 0; --r) {
      for (int i = 0; i < k; ++i) beta[i] = a[perms[r][i]];
      p = p * L + y[injection_rank(beta, k, m)];
    }
    s.add(z, p);
  }
  return s;
}

double empirical_loss(const SampleStats& s, const LossFn& l, const Hypothesis& h) {
  if (s.total == 0) return 0.0;
  double acc = 0;
  const Local* last = nullptr;
  int hp = 0;
  for (const auto& [key, c] : s.counts) {
    if (!last || !(*last == key.first)) {
      hp = predict(h, key.first);
      last = &key.first;
    }
    acc += static_cast<double>(c) * l.value(key.first, hp, key.second);
  }
  return acc / static_cast<double>(s.total);
}

Rational empirical_loss_exact(const SampleStats& s, const LossFn& l, const Hypothesis& h) {
  if (s.total == 0) return 0;
  Rational acc = 0;
  for (const auto& [key, c] : s.counts) acc += Rational(c) * l.exact(key.first, predict(h, key.first), key.second);
  return acc / Rational(s.total);
}

double empirical_loss(const SampleStats& s, const AgnosticLossFn& l, const Hypothesis& h) {
  if (s.total == 0) return 0.0;
  double acc = 0;
  for (const auto& [key, c] : s.counts) acc += static_cast<double>(c) * to_double(l.exact(h, key.first, key.second));
  return acc / static_cast<double>(s.total);
}

Rational empirical_loss_partite(const PConfig& x, const std::vector<int>& y, const LossFn& l, const Hypothesis& h) {
  uint64_t expect = 1;
  for (int v : x.layout.sizes()) expect *= static_cast<uint64_t>(v);
  if (y.size() != expect) throw std::invalid_argument("label tensor does not match the sample");
  return empirical_loss_exact(stats_partite(x, y), l, h);
}

Rational empirical_loss_nonpartite(const Config& x, const std::vector<int>& y, const LossFn& l, const Hypothesis& h,
                                   const OrderChoice& oc) {
  if (y.size() != falling(x.m(), l.k)) throw std::invalid_argument("label tensor does not match the sample");
  if (oc.m != x.m() || oc.k != l.k) throw std::invalid_argument("order choice does not match the sample");
  return empirical_loss_exact(stats_nonpartite(x, y, l.k, l.L, oc), l, h);
}

FlexibilityWitness flexibility_witness_01(int L, int k, bool partite) {
  FlexibilityWitness w;
  w.k = k;
  w.partite = partite;
  w.L = L;
  int n = partite ? L : pattern_count(L, k);
  w.pattern_law = [n](const Local&) { return std::vector<Rational>(n, Rational(1, n)); };
  // y ≠ g for all but one of n equally likely g
  w.avg_loss = [n](const Local&) { return Rational(n - 1, n); };
  w.R_N = [L, k, partite](int m) {
    uint64_t entries = partite ? sat_pow(static_cast<uint64_t>(m), static_cast<uint64_t>(k)) : falling(m, k);
    return sat_pow(static_cast<uint64_t>(L), entries);
  };
  w.N = [L, k, partite](int m, uint64_t b) {
    uint64_t entries = partite ? sat_pow(static_cast<uint64_t>(m), static_cast<uint64_t>(k)) : falling(m, k);
    std::vector<int> y(entries);
    for (auto& v : y) {
      v = static_cast<int>(b % static_cast<uint64_t>(L));
      b /= static_cast<uint64_t>(L);
    }
    return y;
  };
  return w;
}

bool check_flexibility(const FlexibilityWitness& w, const LossFn& l, const Template& t) {
  int n = l.arg_count();
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    auto law = w.pattern_law(z);
    if (static_cast<int>(law.size()) != n) return false;
    Rational target = w.avg_loss(z);
    for (int y = 0; y < n; ++y) {
      Rational acc = 0;
      for (int g = 0; g < n; ++g) acc += law[g] * l.exact(z, y, g);
      if (acc != target) return false;
    }
  }
  return true;
}

bool check_flexibility(const FlexibilityWitness& w, const AgnosticLossFn& l, const HypothesisClass& h) {
  for (uint64_t i = 0; i < h.count; ++i) {
    Hypothesis H = h.member(i);
    for (uint64_t r = 0; r < h.tmpl.local_count(); ++r) {
      Local z = h.tmpl.local_unrank(r);
      auto law = w.pattern_law(z);
      Rational acc = 0;
      for (int g = 0; g < static_cast<int>(law.size()); ++g) acc += law[g] * l.exact(H, z, g);
      if (acc != w.avg_loss(z)) return false;
    }
  }
  return true;
}

std::map<std::vector<int>, Rational> n_law(const FlexibilityWitness& w, int m) {
  uint64_t R = w.R_N(m);
  if (R > (uint64_t{1} << 20)) throw std::length_error("randomness too large to enumerate");
  std::map<std::vector<int>, Rational> law;
  for (uint64_t b = 0; b < R; ++b) law[w.N(m, b)] += Rational(1, R);
  return law;
}

namespace {

// Product of independent blocks; each block writes its outcome into fixed tensor slots.
std::map<std::vector<int>, Rational> product_law(size_t entries,
                                                  const std::vector<std::vector<std::pair<std::vector<int>, Rational>>>& blocks,
                                                  const std::vector<std::vector<uint64_t>>& slots) {
  std::map<std::vector<int>, Rational> cur;
  cur[std::vector<int>(entries, 0)] = 1;
  for (size_t b = 0; b < blocks.size(); ++b) {
    std::map<std::vector<int>, Rational> next;
    for (const auto& [t, p] : cur)
      for (const auto& [vals, q] : blocks[b]) {
        if (q == 0) continue;
        std::vector<int> u = t;
        for (size_t i = 0; i < vals.size(); ++i) u[slots[b][i]] = vals[i];
        next[u] += p * q;
      }
    cur.swap(next);
  }
  return cur;
}

}  // namespace

std::map<std::vector<int>, Rational> g_star_law(const FlexibilityWitness& w, const Config& x) {
  int m = x.m(), k = w.k;
  auto oc = OrderChoice::canonical(m, k);
  const auto& perms = permutations(k);
  std::vector<std::vector<std::pair<std::vector<int>, Rational>>> blocks;
  std::vector<std::vector<uint64_t>> slots;
  for (const auto& a : oc.alpha) {
    auto law = w.pattern_law(pullback(x, a.data(), k));
    std::vector<std::pair<std::vector<int>, Rational>> block;
    for (int g = 0; g < static_cast<int>(law.size()); ++g) block.emplace_back(pattern_unpack(g, w.L, k), law[g]);
    std::vector<uint64_t> sl;
    for (const auto& t : perms) {
      Injection beta = compose(a, t);
      sl.push_back(injection_rank(beta.data(), k, m));
    }
    blocks.push_back(std::move(block));
    slots.push_back(std::move(sl));
  }
  return product_law(falling(m, k), blocks, slots);
}

std::map<std::vector<int>, Rational> g_star_law(const FlexibilityWitness& w, const PConfig& x) {
  const auto& sizes = x.layout.sizes();
  uint64_t total = 1;
  for (int s : sizes) total *= static_cast<uint64_t>(s);
  std::vector<std::vector<std::pair<std::vector<int>, Rational>>> blocks;
  std::vector<std::vector<uint64_t>> slots;
  int alpha[kMaxArity];
  for (uint64_t r = 0; r < total; ++r) {
    tuple_unrank(r, sizes, alpha);
    auto law = w.pattern_law(pullback_partite(x, alpha));
    std::vector<std::pair<std::vector<int>, Rational>> block;
    for (int g = 0; g < static_cast<int>(law.size()); ++g) block.push_back({{g}, law[g]});
    blocks.push_back(std::move(block));
    slots.push_back({r});
  }
  return product_law(total, blocks, slots);
}

int pattern_rebase(int pattern, int from_L, int to_L, int k) {
  auto digits = pattern_unpack(pattern, from_L, k);
  for (int d : digits)
    if (d >= to_L) throw std::invalid_argument("pattern digit does not fit the target base");
  return pattern_pack(digits, to_L);
}

bool contains_bottom(int y, const NeutralSymbolInfo& n, int k, bool partite) {
  if (partite) return y == n.bottom;
  for (int d : pattern_unpack(y, n.bottom + 1, k))
    if (d == n.bottom) return true;
  return false;
}

std::pair<AgnosticLossFn, NeutralSymbolInfo> extend_with_neutral(const AgnosticLossFn& l, const FlexibilityWitness& w) {
  NeutralSymbolInfo info;
  info.bottom = l.L;
  info.bottom_cost = w.avg_loss;
  AgnosticLossFn out;
  out.name = l.name + "+bot";
  out.k = l.k;
  out.partite = l.partite;
  out.L = l.L + 1;
  int base = l.L, k = l.k;
  bool partite = l.partite;
  out.exact = [l, info, base, k, partite](const Hypothesis& h, const Local& z, int y) {
    if (contains_bottom(y, info, k, partite)) return info.bottom_cost(z);
    return l.exact(h, z, partite ? y : pattern_rebase(y, base + 1, base, k));
  };
  return {out, info};
}

std::pair<LossFn, NeutralSymbolInfo> extend_with_neutral(const LossFn& l, const FlexibilityWitness& w) {
  NeutralSymbolInfo info;
  info.bottom = l.L;
  info.bottom_cost = w.avg_loss;
  int base = l.L, k = l.k;
  bool partite = l.partite;
  auto rule = [l, info, base, k, partite](const Local& z, int y, int y2) {
    if (contains_bottom(y, info, k, partite) || contains_bottom(y2, info, k, partite)) return info.bottom_cost(z);
    if (partite) return l.exact(z, y, y2);
    return l.exact(z, pattern_rebase(y, base + 1, base, k), pattern_rebase(y2, base + 1, base, k));
  };
  LossFn out = make_loss(l.name + "+bot", k, partite, base + 1, rule);
  return {out, info};
}

bool check_neutral(const AgnosticLossFn& l, const NeutralSymbolInfo& n, const HypothesisClass& h) {
  int count = l.partite ? l.L : pattern_count(l.L, l.k);
  for (uint64_t i = 0; i < h.count; ++i) {
    Hypothesis H = h.member(i);
    for (uint64_t r = 0; r < h.tmpl.local_count(); ++r) {
      Local z = h.tmpl.local_unrank(r);
      for (int y = 0; y < count; ++y)
        if (contains_bottom(y, n, l.k, l.partite) && l.exact(H, z, y) != n.bottom_cost(z)) return false;
    }
  }
  return true;
}

std::optional<Hypothesis> bayes_predictor(const ProbTemplate& mu, const ProbTemplate& mu2_in, const Hypothesis& f,
                                          const LossFn& l) {
  const Template& t = mu.tmpl();
  ProbTemplate mu2 = t.partite ? mu2_in : padded(mu2_in, t.k);
  const Template& t2 = mu2.tmpl();
  require_enumerable(sat_mul(t.local_count(), t2.local_count()));
  int n = l.arg_count();
  uint64_t N = t.local_count();

  // conditional expected loss of each candidate argument at each visible point
  std::vector<std::vector<Rational>> cond(N, std::vector<Rational>(n, 0));
  for (uint64_t r = 0; r < N; ++r) {
    Local z = t.local_unrank(r);
    for (uint64_t r2 = 0; r2 < t2.local_count(); ++r2) {
      Local z2 = t2.local_unrank(r2);
      Rational q = mu2.local_mass(z2);
      if (q == 0) continue;
      int fy = predict(f, join_local(z, z2, t2));
      for (int y = 0; y < n; ++y) cond[r][y] += q * l.exact(z, y, fy);
    }
  }
  auto optimal = [&](uint64_t r) {
    std::vector<int> best;
    Rational lo = cond[r][0];
    for (int y = 1; y < n; ++y) lo = std::min(lo, cond[r][y]);
    for (int y = 0; y < n; ++y)
      if (cond[r][y] == lo) best.push_back(y);
    return best;
  };

  std::vector<int> table(N, -1);
  if (t.partite || t.k == 1) {
    for (uint64_t r = 0; r < N; ++r) table[r] = optimal(r).front();
  } else {
    const auto& perms = permutations(t.k);
    for (uint64_t r = 0; r < N; ++r) {
      if (table[r] >= 0) continue;
      Local rep = t.local_unrank(r);
      std::vector<uint64_t> orbit;
      for (const auto& s : perms) orbit.push_back(t.local_rank(pullback_local(s, rep)));
      bool placed = false;
      for (int p : optimal(r)) {
        auto digits = pattern_unpack(p, f.L, t.k);
        std::vector<int> trial(N, -1);
        bool ok = true;
        for (size_t i = 0; ok && i < perms.size(); ++i) {
          int& slot = trial[orbit[i]];
          if (slot >= 0 && slot != digits[i]) ok = false;
          slot = digits[i];
        }
        // B*_k at every orbit point must be optimal there too
        for (size_t i = 0; ok && i < perms.size(); ++i) {
          Local w = t.local_unrank(orbit[i]);
          std::vector<int> entries(perms.size());
          for (size_t j = 0; j < perms.size(); ++j)
            entries[j] = trial[t.local_rank(pullback_local(perms[j], w))];
          int q = pattern_pack(entries, f.L);
          auto opt = optimal(orbit[i]);
          ok = std::find(opt.begin(), opt.end(), q) != opt.end();
        }
        if (!ok) continue;
        for (size_t i = 0; i < perms.size(); ++i) table[orbit[i]] = trial[orbit[i]];
        placed = true;
        break;
      }
      if (!placed) return std::nullopt;
    }
  }
  return table_hypothesis(t, f.L, std::move(table), "bayes");
}

}  // namespace harity

#include "harity/dims.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace harity {

void FunctionFamily::add(std::vector<int> f) {
  if (static_cast<int>(f.size()) != domain) throw std::invalid_argument("function must be total on the domain");
  functions.push_back(std::move(f));
}

void FunctionFamily::dedup() {
  std::sort(functions.begin(), functions.end());
  functions.erase(std::unique(functions.begin(), functions.end()), functions.end());
}

FunctionFamily FunctionFamily::restrict_to(const std::vector<int>& points) const {
  FunctionFamily out;
  out.domain = static_cast<int>(points.size());
  out.L = L;
  for (const auto& f : functions) {
    std::vector<int> g;
    g.reserve(points.size());
    for (int p : points) g.push_back(f[p]);
    out.functions.push_back(std::move(g));
  }
  out.dedup();
  return out;
}

namespace {

using Witness = ShatterWitness;

// Columns that can appear in a shattered set: ≥ 2 realized values, first of each duplicate group.
std::vector<int> useful_points(const FunctionFamily& fam) {
  std::vector<int> out;
  std::set<std::vector<int>> seen;
  for (int a = 0; a < fam.domain; ++a) {
    std::vector<int> col;
    col.reserve(fam.functions.size());
    for (const auto& f : fam.functions) col.push_back(f[a]);
    if (std::adjacent_find(col.begin(), col.end(), std::not_equal_to<>()) == col.end()) continue;
    if (!seen.insert(col).second) continue;
    out.push_back(a);
  }
  return out;
}

bool shattered(const FunctionFamily& fam, const std::vector<Witness>& s) {
  size_t t = s.size();
  std::vector<char> hit(size_t{1} << t, 0);
  size_t found = 0;
  for (const auto& f : fam.functions) {
    size_t mask = 0;
    bool ok = true;
    for (size_t i = 0; i < t && ok; ++i) {
      int v = f[s[i].point];
      if (v == s[i].c1)
        mask |= size_t{1} << i;
      else if (v != s[i].c0)
        ok = false;
    }
    if (ok && !hit[mask]) {
      hit[mask] = 1;
      if (++found == hit.size()) return true;
    }
  }
  return found == hit.size();
}

}  // namespace

DimResult natarajan_dim(const FunctionFamily& fam0, int cap) {
  FunctionFamily fam = fam0;
  fam.dedup();
  if (fam.functions.size() < 2 || cap <= 0) return {0, cap <= 0 && fam.functions.size() >= 2};
  auto points = useful_points(fam);
  if (static_cast<int>(points.size()) > kDefaultDomainCap)
    throw std::length_error("shattering search domain exceeds " + std::to_string(kDefaultDomainCap) + " points");

  // realized value pairs per point
  std::vector<std::vector<std::pair<int, int>>> pairs(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    std::set<int> vals;
    for (const auto& f : fam.functions) vals.insert(f[points[i]]);
    std::vector<int> v(vals.begin(), vals.end());
    for (size_t a = 0; a < v.size(); ++a)
      for (size_t b = a + 1; b < v.size(); ++b) pairs[i].emplace_back(v[a], v[b]);
  }

  int best = 0;
  std::vector<Witness> cur;
  auto dfs = [&](auto&& self, size_t start) -> void {
    if (best >= cap) return;
    for (size_t i = start; i < points.size(); ++i) {
      if ((size_t{1} << (cur.size() + 1)) > fam.functions.size()) return;
      for (auto [c0, c1] : pairs[i]) {
        cur.push_back({points[i], c0, c1});
        if (shattered(fam, cur)) {
          best = std::max(best, static_cast<int>(cur.size()));
          if (best >= cap) {
            cur.pop_back();
            return;
          }
          self(self, i + 1);
        }
        cur.pop_back();
        if (best >= cap) return;
      }
    }
  };
  dfs(dfs, 0);
  return {std::min(best, cap), best >= cap};
}

std::optional<std::vector<ShatterWitness>> find_shattered(const FunctionFamily& fam0, int size) {
  if (size <= 0) return std::vector<ShatterWitness>{};
  FunctionFamily fam = fam0;
  fam.dedup();
  auto points = useful_points(fam);
  std::vector<Witness> cur;
  std::optional<std::vector<Witness>> out;
  auto dfs = [&](auto&& self, size_t start) -> void {
    for (size_t i = start; i < points.size() && !out; ++i) {
      if ((size_t{1} << (cur.size() + 1)) > fam.functions.size()) return;
      std::set<int> vals;
      for (const auto& f : fam.functions) vals.insert(f[points[i]]);
      std::vector<int> v(vals.begin(), vals.end());
      for (size_t a = 0; a < v.size() && !out; ++a)
        for (size_t b = a + 1; b < v.size() && !out; ++b) {
          cur.push_back({points[i], v[a], v[b]});
          if (shattered(fam, cur)) {
            if (static_cast<int>(cur.size()) == size)
              out = cur;
            else
              self(self, i + 1);
          }
          cur.pop_back();
        }
    }
  };
  dfs(dfs, 0);
  return out;
}

DimResult vc_dim(const FunctionFamily& fam, int cap) {
  for (const auto& f : fam.functions)
    for (int v : f)
      if (v < 0 || v > 1) throw std::invalid_argument("VC dimension needs a binary label space");
  return natarajan_dim(fam, cap);
}

FunctionFamily full_family(const HypothesisClass& h) {
  FunctionFamily fam;
  fam.domain = static_cast<int>(h.tmpl.local_count());
  fam.L = h.L;
  for (uint64_t i = 0; i < h.count; ++i) fam.add(tabulate(h.member(i), h.tmpl));
  fam.dedup();
  return fam;
}

std::vector<FunctionFamily> slice_families(const HypothesisClass& h) {
  const Template& t = h.tmpl;
  std::vector<std::vector<int>> tables;
  for (uint64_t i = 0; i < h.count; ++i) tables.push_back(tabulate(h.member(i), t));

  std::vector<FunctionFamily> out;
  std::vector<int> free_bits;
  if (t.partite)
    for (int j = 0; j < t.k; ++j) free_bits.push_back(j);
  else
    free_bits.push_back(t.k - 1);

  for (int j : free_bits) {
    std::vector<unsigned> fixed, open;
    for (unsigned mask : canonical_masks(t.k)) (mask >> j & 1u ? open : fixed).push_back(mask);
    uint64_t nfixed = 1, nopen = 1;
    for (unsigned m : fixed) nfixed *= static_cast<uint64_t>(t.size_at(m));
    for (unsigned m : open) nopen *= static_cast<uint64_t>(t.size_at(m));
    for (uint64_t a = 0; a < nfixed; ++a) {
      Local z;
      uint64_t r = a;
      for (unsigned m : fixed) {
        z[m] = static_cast<int>(r % static_cast<uint64_t>(t.size_at(m)));
        r /= static_cast<uint64_t>(t.size_at(m));
      }
      FunctionFamily fam;
      fam.domain = static_cast<int>(nopen);
      fam.L = h.L;
      std::vector<uint64_t> ranks(nopen);
      for (uint64_t d = 0; d < nopen; ++d) {
        uint64_t s = d;
        for (unsigned m : open) {
          z[m] = static_cast<int>(s % static_cast<uint64_t>(t.size_at(m)));
          s /= static_cast<uint64_t>(t.size_at(m));
        }
        ranks[d] = t.local_rank(z);
      }
      for (const auto& tab : tables) {
        std::vector<int> f(nopen);
        for (uint64_t d = 0; d < nopen; ++d) f[d] = tab[ranks[d]];
        fam.functions.push_back(std::move(f));
      }
      fam.dedup();
      out.push_back(std::move(fam));
    }
  }
  return out;
}

DimResult vcn_k(const HypothesisClass& h, int cap) {
  DimResult best;
  for (const auto& fam : slice_families(h)) {
    DimResult d = natarajan_dim(fam, cap);
    if (d.value > best.value || (d.value == best.value && d.at_cap)) best = d;
    if (best.at_cap) break;
  }
  return best;
}

uint64_t growth_function(const HypothesisClass& h, int m) {
  if (!h.partite) throw std::invalid_argument("growth function is defined for partite classes");
  uint64_t best = 0;
  for (const auto& fam : slice_families(h)) {
    // constant and duplicate columns never add restrictions
    auto pts = useful_points(fam);
    int size = std::min<int>(m, static_cast<int>(pts.size()));
    if (pts.empty()) {
      best = std::max<uint64_t>(best, fam.functions.empty() ? 0 : 1);
      continue;
    }
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::vector<int> v;
      for (int i : pick) v.push_back(pts[i]);
      best = std::max<uint64_t>(best, fam.restrict_to(v).functions.size());
      int i = size - 1;
      while (i >= 0 && pick[i] == static_cast<int>(pts.size()) - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return best;
}

GrowthBound growth_bound(int vcn, int m, int L) {
  GrowthBound b;
  uint64_t pairs = sat_pow(binom(L, 2), static_cast<uint64_t>(vcn));
  b.falling_form = sat_mul(falling(m + 1, std::min(vcn, m + 1)), pairs);
  b.power_form = sat_mul(sat_pow(static_cast<uint64_t>(m + 1), static_cast<uint64_t>(vcn)), pairs);
  return b;
}

bool ssp_holds(const FunctionFamily& fam) {
  if (fam.domain > 16) throw std::length_error("subset sweep limited to 16 points");
  for (uint32_t s = 0; s < (1u << fam.domain); ++s) {
    std::vector<int> v;
    for (int i = 0; i < fam.domain; ++i)
      if (s >> i & 1u) v.push_back(i);
    FunctionFamily r = fam.restrict_to(v);
    int nat = natarajan_dim(r, static_cast<int>(v.size()) + 1).value;
    uint64_t bound = sat_mul(sat_pow(v.size() + 1, static_cast<uint64_t>(nat)),
                             sat_pow(binom(fam.L, 2), static_cast<uint64_t>(nat)));
    if (r.functions.size() > bound) return false;
  }
  return true;
}

}  // namespace harity

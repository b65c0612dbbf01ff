#include "harity/hypotheses.hpp"

#include <stdexcept>

namespace harity {

Hypothesis constant_hypothesis(int k, bool partite, int L, int label) {
  Hypothesis h;
  h.k = k;
  h.partite = partite;
  h.L = L;
  h.rank = 0;
  h.tag = "const" + std::to_string(label);
  h.eval = [label](const Local&) { return label; };
  return h;
}

Hypothesis table_hypothesis(const Template& t, int L, std::vector<int> table, std::string tag) {
  if (table.size() != t.local_count()) throw std::invalid_argument("table size must match local point count");
  for (int v : table)
    if (v < 0 || v >= L) throw std::invalid_argument("table label out of range");
  Hypothesis h;
  h.k = t.k;
  h.partite = t.partite;
  h.L = L;
  h.rank = t.k;
  h.tag = std::move(tag);
  h.eval = [t, tab = std::move(table)](const Local& z) { return tab[t.local_rank(z)]; };
  h.rank = rank_of(h, t);
  return h;
}

std::vector<int> tabulate(const Hypothesis& h, const Template& t) {
  std::vector<int> out(t.local_count());
  for (uint64_t r = 0; r < out.size(); ++r) out[r] = h(t.local_unrank(r));
  return out;
}

bool pointwise_equal(const Hypothesis& a, const Hypothesis& b, const Template& t) {
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    if (a(z) != b(z)) return false;
  }
  return true;
}

int star_pattern(const Hypothesis& f, const Local& z) {
  const auto& perms = permutations(f.k);
  int p = 0;
  for (int r = static_cast<int>(perms.size()) - 1; r >= 0; --r) p = p * f.L + f(pullback_local(perms[r], z));
  return p;
}

std::vector<int> star(const Hypothesis& f, const Config& x) {
  int m = x.m(), k = f.k;
  if (m < k) return {};
  std::vector<int> out;
  out.reserve(falling(m, k));
  int alpha[kMaxArity];
  std::vector<char> used(m, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == k) {
      out.push_back(f(pullback(x, alpha, k)));
      return;
    }
    for (int v = 0; v < m; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      alpha[pos] = v;
      self(self, pos + 1);
      used[v] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> star(const Hypothesis& f, const PConfig& x) {
  const auto& sizes = x.layout.sizes();
  uint64_t total = 1;
  for (int s : sizes) total *= static_cast<uint64_t>(s);
  std::vector<int> out(total);
  int alpha[kMaxArity];
  for (uint64_t r = 0; r < total; ++r) {
    tuple_unrank(r, sizes, alpha);
    out[r] = f(pullback_partite(x, alpha));
  }
  return out;
}

int rank_of(const Hypothesis& f, const Template& t) {
  const auto& masks = canonical_masks(t.k);
  for (int r = 0; r < t.k; ++r) {
    bool ok = true;
    for (uint64_t i = 0; ok && i < t.local_count(); ++i) {
      Local z = t.local_unrank(i);
      Local w = z;
      for (unsigned mask : masks)
        if (popcount(mask) > r) w[mask] = 0;
      ok = f(z) == f(w);
    }
    if (ok) return r;
  }
  return t.k;
}

Hypothesis partize_hypothesis(const Hypothesis& f) {
  if (f.partite) throw std::invalid_argument("hypothesis is already partite");
  Hypothesis h;
  h.k = f.k;
  h.partite = true;
  h.L = pattern_count(f.L, f.k);
  h.rank = f.rank;
  h.tag = f.tag + "^kpart";
  h.eval = [f](const Local& z) { return star_pattern(f, z); };
  return h;
}

Hypothesis departize_hypothesis(const Hypothesis& fp, int base_L) {
  if (!fp.partite) throw std::invalid_argument("expected a partite hypothesis");
  Hypothesis h;
  h.k = fp.k;
  h.partite = false;
  h.L = base_L;
  h.rank = fp.rank;
  h.tag = fp.tag + "^-kpart";
  h.eval = [fp, base_L](const Local& z) { return pattern_get(fp(z), base_L, 0); };
  return h;
}

HypothesisClass explicit_class(std::string name, const Template& t, std::vector<Hypothesis> hs) {
  std::vector<Hypothesis> kept;
  std::vector<std::vector<int>> tables;
  for (auto& h : hs) {
    auto tab = tabulate(h, t);
    bool dup = false;
    for (auto& other : tables)
      if (other == tab) {
        dup = true;
        break;
      }
    if (dup) continue;
    tables.push_back(std::move(tab));
    kept.push_back(h);
  }
  HypothesisClass c;
  c.name = std::move(name);
  c.tmpl = t;
  c.k = t.k;
  c.partite = t.partite;
  c.L = kept.empty() ? 2 : kept.front().L;
  c.count = kept.size();
  c.member = [kept](uint64_t i) { return kept.at(i); };
  c.contains = [t, tables](const Hypothesis& h) {
    auto tab = tabulate(h, t);
    for (auto& other : tables)
      if (other == tab) return true;
    return false;
  };
  return c;
}

HypothesisClass partize_class(const HypothesisClass& h) {
  HypothesisClass c;
  c.name = h.name + "^kpart";
  c.tmpl = h.partite ? h.tmpl : partize_template(h.tmpl, h.k);
  c.k = h.k;
  c.partite = true;
  c.L = pattern_count(h.L, h.k);
  c.count = h.count;
  c.member = [h](uint64_t i) { return partize_hypothesis(h.member(i)); };
  if (h.contains) {
    int base = h.L;
    c.contains = [h, base](const Hypothesis& g) { return h.contains(departize_hypothesis(g, base)); };
  }
  return c;
}

nlohmann::json hypothesis_to_json(const Hypothesis& h, const Template& t) {
  nlohmann::json j;
  j["k"] = h.k;
  j["partite"] = h.partite;
  j["labels"] = h.L;
  j["rank"] = h.rank;
  j["tag"] = h.tag;
  nlohmann::json table = nlohmann::json::object();
  for (uint64_t r = 0; r < t.local_count(); ++r) {
    Local z = t.local_unrank(r);
    std::string key;
    for (unsigned mask : canonical_masks(t.k)) {
      if (!key.empty()) key += ";";
      if (t.partite) {
        PartIndex f;
        for (int i : mask_members(mask)) f.assignment.emplace_back(i + 1, 1);
        key += f.encode();
      } else {
        SubsetIndex a;
        for (int i : mask_members(mask)) a.members.push_back(i + 1);
        key += a.encode();
      }
      key += "=" + std::to_string(z[mask]);
    }
    table[key] = h(z);
  }
  j["table"] = table;
  return j;
}

}  // namespace harity

#include "harity/sampler.hpp"

#include <stdexcept>

namespace harity {

namespace {

// Mask of every coordinate of a partite layout, in storage order.
std::vector<unsigned> coordinate_masks(const PartLayout& lay) {
  std::vector<unsigned> out;
  out.reserve(lay.size());
  for (unsigned mask : canonical_masks(lay.k())) {
    size_t block = 1;
    for (int i : mask_members(mask)) block *= static_cast<size_t>(lay.sizes()[i]);
    out.insert(out.end(), block, mask);
  }
  return out;
}

Template trivial_like(const Template& t) {
  Template out = t;
  for (auto& v : out.n) v = 1;
  return out;
}

}  // namespace

ProbTemplate Scenario::aux() const {
  if (mu2) {
    if (mu2->tmpl().k == k() || partite()) return *mu2;
    // pad arities up to k with singletons
    Template t = mu2->tmpl();
    auto w = mu2->weights();
    t.n.resize(k(), 1);
    t.k = k();
    w.resize(k(), {Rational(1)});
    return ProbTemplate(t, w);
  }
  return ProbTemplate::uniform(trivial_like(mu.tmpl()));
}

ProbTemplate Scenario::joint() const { return mu2 ? product(mu, aux()) : mu; }

Config sample_config(const ProbTemplate& mu, int m, Rng& rng) {
  const Template& t = mu.tmpl();
  Config x(m, t.k);
  size_t idx = 0;
  for (int s = 1; s <= std::min(m, t.k); ++s) {
    size_t block = binom(m, s);
    if (t.n[s - 1] == 1) {
      idx += block;
      continue;
    }
    for (size_t i = 0; i < block; ++i) x.c[idx++] = mu.draw(s - 1, rng);
  }
  return x;
}

PConfig sample_pconfig(const ProbTemplate& mu, const std::vector<int>& sizes, Rng& rng) {
  const Template& t = mu.tmpl();
  PConfig x(t.k, sizes);
  auto masks = coordinate_masks(x.layout);
  for (size_t i = 0; i < x.c.size(); ++i) {
    unsigned mask = masks[i];
    x.c[i] = t.size_at(mask) == 1 ? 0 : mu.draw(static_cast<int>(mask) - 1, rng);
  }
  return x;
}

Config visible_part(const Config& joint, const Template& aux) {
  Config x = joint;
  size_t idx = 0;
  int m = joint.m();
  for (int s = 1; s <= std::min(m, aux.k); ++s) {
    size_t block = binom(m, s);
    int nb = aux.n[s - 1];
    for (size_t i = 0; i < block; ++i, ++idx) x.c[idx] = split_point(joint.c[idx], nb).first;
  }
  return x;
}

PConfig visible_part(const PConfig& joint, const Template& aux) {
  PConfig x = joint;
  auto masks = coordinate_masks(x.layout);
  for (size_t i = 0; i < x.c.size(); ++i) {
    unsigned mask = masks[i];
    x.c[i] = split_point(joint.c[i], aux.size_at(mask)).first;
  }
  return x;
}

NSample labeled_sample(const Scenario& sc, int m, Rng& rng) {
  if (sc.partite()) throw std::invalid_argument("partite scenario");
  if (!sc.mu2) {
    Config x = sample_config(sc.mu, m, rng);
    auto y = star(sc.F, x);
    return {std::move(x), std::move(y)};
  }
  ProbTemplate j = sc.joint();
  Config xj = sample_config(j, m, rng);
  auto y = star(sc.F, xj);
  return {visible_part(xj, sc.aux().tmpl()), std::move(y)};
}

PSample labeled_sample_partite(const Scenario& sc, int m, Rng& rng) {
  if (!sc.partite()) throw std::invalid_argument("non-partite scenario");
  std::vector<int> sizes(sc.k(), m);
  if (!sc.mu2) {
    PConfig x = sample_pconfig(sc.mu, sizes, rng);
    auto y = star(sc.F, x);
    return {std::move(x), std::move(y)};
  }
  ProbTemplate j = sc.joint();
  PConfig xj = sample_pconfig(j, sizes, rng);
  auto y = star(sc.F, xj);
  return {visible_part(xj, sc.aux().tmpl()), std::move(y)};
}

namespace {

// Odometer over all joint configurations of a given coordinate-size list.
template <class Visit>
void for_each_assignment(const std::vector<int>& radix, Visit&& visit) {
  std::vector<int> cur(radix.size(), 0);
  while (true) {
    visit(cur);
    size_t i = 0;
    while (i < cur.size() && ++cur[i] == radix[i]) cur[i++] = 0;
    if (i == cur.size()) break;
  }
}

}  // namespace

SampleLaw exact_sample_law(const Scenario& sc, int m) {
  ProbTemplate j = sc.joint();
  Template aux = sc.aux().tmpl();
  const Template& t = j.tmpl();
  SampleLaw law;
  if (!sc.partite()) {
    Config x(m, t.k);
    std::vector<int> radix(x.c.size()), slot(x.c.size());
    for (size_t i = 0; i < x.c.size(); ++i) {
      slot[i] = static_cast<int>(x.layout.subset(i).members.size()) - 1;
      radix[i] = t.n[slot[i]];
    }
    uint64_t total = 1;
    for (int r : radix) total = sat_mul(total, static_cast<uint64_t>(r));
    if (total > 1000000) throw std::length_error("sample law too large to enumerate");
    for_each_assignment(radix, [&](const std::vector<int>& a) {
      Rational p = 1;
      for (size_t i = 0; i < a.size(); ++i) p *= j.weight(slot[i], a[i]);
      if (p == 0) return;
      x.c = a;
      auto y = star(sc.F, x);
      law[{visible_part(x, aux).c, std::move(y)}] += p;
    });
  } else {
    PConfig x(t.k, std::vector<int>(t.k, m));
    std::vector<int> radix(x.c.size()), slot(x.c.size());
    for (size_t i = 0; i < x.c.size(); ++i) {
      slot[i] = static_cast<int>(x.layout.part_index(i).domain_mask()) - 1;
      radix[i] = t.n[slot[i]];
    }
    uint64_t total = 1;
    for (int r : radix) total = sat_mul(total, static_cast<uint64_t>(r));
    if (total > 1000000) throw std::length_error("sample law too large to enumerate");
    for_each_assignment(radix, [&](const std::vector<int>& a) {
      Rational p = 1;
      for (size_t i = 0; i < a.size(); ++i) p *= j.weight(slot[i], a[i]);
      if (p == 0) return;
      x.c = a;
      auto y = star(sc.F, x);
      law[{visible_part(x, aux).c, std::move(y)}] += p;
    });
  }
  return law;
}

}  // namespace harity

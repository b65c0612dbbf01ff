#include <doctest.h>

#include <set>

#include "harity/dims.hpp"
#include "harity/families.hpp"

using namespace harity;

namespace {

FunctionFamily random_family(int domain, int L, int count, uint64_t seed) {
  Rng rng = make_rng(seed, 31);
  FunctionFamily f;
  f.domain = domain;
  f.L = L;
  for (int i = 0; i < count; ++i) {
    std::vector<int> g(domain);
    for (auto& v : g) v = std::uniform_int_distribution<int>(0, L - 1)(rng);
    f.add(g);
  }
  f.dedup();
  return f;
}

// Brute force: every point set, every witness pair per point, every pattern.
bool shatters(const FunctionFamily& f, const std::vector<int>& pts, const std::vector<std::pair<int, int>>& w) {
  std::set<std::vector<int>> seen;
  for (const auto& g : f.functions) {
    std::vector<int> bits;
    bool ok = true;
    for (size_t i = 0; i < pts.size() && ok; ++i) {
      if (g[pts[i]] == w[i].first)
        bits.push_back(0);
      else if (g[pts[i]] == w[i].second)
        bits.push_back(1);
      else
        ok = false;
    }
    if (ok) seen.insert(bits);
  }
  return seen.size() == (size_t{1} << pts.size());
}

int brute_natarajan(const FunctionFamily& f) {
  int best = 0;
  for (uint32_t s = 1; s < (1u << f.domain); ++s) {
    std::vector<int> pts;
    for (int i = 0; i < f.domain; ++i)
      if (s >> i & 1u) pts.push_back(i);
    int t = static_cast<int>(pts.size());
    if (t <= best) continue;
    std::vector<std::pair<int, int>> all;
    for (int a = 0; a < f.L; ++a)
      for (int b = a + 1; b < f.L; ++b) all.emplace_back(a, b);
    std::vector<size_t> pick(t, 0);
    while (true) {
      std::vector<std::pair<int, int>> w;
      for (size_t p : pick) w.push_back(all[p]);
      if (shatters(f, pts, w)) {
        best = t;
        break;
      }
      int i = 0;
      while (i < t && ++pick[i] == all.size()) pick[i++] = 0;
      if (i == t) break;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("dims") {
  TEST_CASE("full cube and constants") {
    FunctionFamily cube;
    cube.domain = 4;
    for (int s = 0; s < 16; ++s) cube.add({s & 1, s >> 1 & 1, s >> 2 & 1, s >> 3 & 1});
    CHECK(natarajan_dim(cube).value == 4);
    CHECK(vc_dim(cube).value == 4);
    CHECK(vc_dim(cube, 3) == DimResult{3, true});
    FunctionFamily c;
    c.domain = 3;
    c.L = 3;
    c.add({2, 2, 2});
    CHECK(natarajan_dim(c).value == 0);
    CHECK_THROWS_AS(vc_dim(c), std::invalid_argument);
  }

  TEST_CASE("Natarajan dimension against brute force") {
    for (uint64_t s = 0; s < 60; ++s) {
      int domain = 2 + static_cast<int>(s % 4), L = 2 + static_cast<int>(s % 2);
      FunctionFamily f = random_family(domain, L, 3 + static_cast<int>(s % 13), s);
      CAPTURE(s);
      CHECK(natarajan_dim(f, 8).value == brute_natarajan(f));
    }
  }

  TEST_CASE("find_shattered returns a real witness") {
    for (uint64_t s = 0; s < 20; ++s) {
      FunctionFamily f = random_family(4, 3, 20, s + 500);
      int d = brute_natarajan(f);
      auto w = find_shattered(f, d);
      REQUIRE(w.has_value());
      std::vector<int> pts;
      std::vector<std::pair<int, int>> pr;
      for (auto& x : *w) {
        pts.push_back(x.point);
        pr.emplace_back(x.c0, x.c1);
      }
      CHECK(shatters(f, pts, pr));
      CHECK(!find_shattered(f, d + 1).has_value());
    }
  }

  TEST_CASE("matching slices and full family") {
    FamilySpec m = matching_family(3);
    CHECK(vcn_k(m.cls).value == 1);
    CHECK(vc_dim(full_family(m.cls)).value == 3);
  }

  TEST_CASE("growth bound formulas") {
    GrowthBound b = growth_bound(2, 3, 2);
    CHECK(b.falling_form == 4 * 3);
    CHECK(b.power_form == 16);
    GrowthBound c = growth_bound(3, 1, 3);
    CHECK(c.falling_form == 2 * 27);  // min{3, 2} = 2 factors of (m+1)
    CHECK(c.power_form == 8 * 27);
  }

  TEST_CASE("growth function stays under the bound") {
    FamilySpec h = highorder_family(4);
    for (int m = 1; m <= 5; ++m) {
      uint64_t g = growth_function(h.cls, m);
      CHECK(g <= growth_bound(h.vcn, m, 2).falling_form);
      CHECK(g == (uint64_t{1} << std::min(m, 4)));
    }
    CHECK_THROWS_AS(growth_function(matching_family(2).cls, 2), std::invalid_argument);
  }

  TEST_CASE("SSP on random families") {
    for (uint64_t s = 0; s < 20; ++s) CHECK(ssp_holds(random_family(5, 2 + s % 3, 12, s + 900)));
  }

  TEST_CASE("restriction drops duplicates") {
    FunctionFamily f;
    f.domain = 2;
    f.add({0, 1});
    f.add({0, 0});
    CHECK(f.restrict_to({0}).functions.size() == 1);
    CHECK_THROWS(f.add({0}));
  }
}

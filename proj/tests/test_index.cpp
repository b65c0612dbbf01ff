#include <doctest.h>

#include <algorithm>
#include <set>

#include "harity/index.hpp"

using namespace harity;

namespace {

// Independent count of r_k([m],…,[m]): Σ_A m^|A|.
uint64_t part_index_count(int m, int k) {
  uint64_t total = 0;
  for (unsigned a = 1; a < (1u << k); ++a) {
    uint64_t p = 1;
    for (int i = 0; i < popcount(a); ++i) p *= static_cast<uint64_t>(m);
    total += p;
  }
  return total;
}

Config random_config(int m, int cap, uint64_t seed, int n = 2) {
  Config x(m, cap);
  uint64_t s = seed * 2654435761u + 17;
  for (auto& v : x.c) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    v = static_cast<int>((s >> 33) % static_cast<uint64_t>(n));
  }
  return x;
}

}  // namespace

TEST_SUITE("index") {
  TEST_CASE("subsets come size-then-lex") {
    auto s = enumerate_subsets(2, 2);
    REQUIRE(s.size() == 3);
    CHECK(s[0].encode() == "{1}");
    CHECK(s[1].encode() == "{2}");
    CHECK(s[2].encode() == "{1,2}");
    CHECK(enumerate_subsets(3, 2).size() == 6);
    CHECK(enumerate_subsets(0, 2).empty());
    auto a = enumerate_subsets(5, 3), b = enumerate_subsets(5, 3);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }

  TEST_CASE("encodings round-trip") {
    for (const auto& s : enumerate_subsets(4, 4)) CHECK(SubsetIndex::decode(s.encode()) == s);
    for (const auto& p : enumerate_part_indices(3, 2)) CHECK(PartIndex::decode(p.encode()) == p);
    CHECK_THROWS(SubsetIndex::decode("{2,1}"));
  }

  TEST_CASE("part index counts") {
    CHECK(enumerate_part_indices(2, 2).size() == 8);
    CHECK(enumerate_part_indices(1, 1).size() == 1);
    CHECK(enumerate_part_indices(0, 2).empty());
    for (int m = 1; m <= 3; ++m)
      for (int k = 1; k <= 3; ++k) CHECK(enumerate_part_indices(m, k).size() == part_index_count(m, k));
  }

  TEST_CASE("injections and permutations") {
    CHECK(enumerate_injections(2, 4).size() == 12);
    CHECK(permutations(3).size() == 6);
    for (const auto& p : permutations(3)) {
      CHECK(compose(p, inverse(p)) == identity(3));
      CHECK(permutations(3)[permutation_rank(p)] == p);
    }
    auto inj = enumerate_injections(2, 4);
    for (size_t r = 0; r < inj.size(); ++r) CHECK(injection_rank(inj[r].data(), 2, 4) == r);
  }

  TEST_CASE("pullback at an identity injection") {
    Config x = random_config(3, 3, 1, 5);
    Injection id = identity(3);
    CHECK(pullback_config(x, id) == x);
  }

  TEST_CASE("pullback along (1,3) reads x at {1,3}") {
    Config x = random_config(3, 2, 2, 7);
    int alpha[2] = {0, 2};
    Local z = pullback(x, alpha, 2);
    CHECK(z[3u] == x.at({0, 2}));
    CHECK(z[1u] == x.at({0}));
    CHECK(z[2u] == x.at({2}));
  }

  TEST_CASE("contravariance (α∘β)* = β*∘α*") {
    for (int c = 1; c <= 4; ++c)
      for (uint64_t seed = 0; seed < 4; ++seed) {
        Config x = random_config(c, c, seed);
        for (int b = 1; b <= c; ++b)
          for (const auto& alpha : enumerate_injections(b, c))
            for (int a = 1; a <= b; ++a)
              for (const auto& beta : enumerate_injections(a, b))
                CHECK(pullback_config(x, compose(alpha, beta)) == pullback_config(pullback_config(x, alpha), beta));
      }
  }

  TEST_CASE("partite pullback") {
    PConfig x(2, {2, 2});
    for (size_t i = 0; i < x.c.size(); ++i) x.c[i] = static_cast<int>(i);
    int alpha[2] = {1, 0};
    Local z = pullback_partite(x, alpha);
    int v1[1] = {1};
    CHECK(z[1u] == x.c[x.layout.index(1u, v1)]);
    PConfig one(2, {1, 1});
    for (size_t i = 0; i < one.c.size(); ++i) one.c[i] = static_cast<int>(i) + 3;
    int zero[2] = {0, 0};
    Local w = pullback_partite(one, zero);
    CHECK(w[1u] == 3);
    CHECK(w[2u] == 4);
    CHECK(w[3u] == 5);
  }

  TEST_CASE("partite S_k action is covariant") {
    Local z;
    for (int i = 0; i < 7; ++i) z.v[i] = 10 + i;
    CHECK(sigma_act_partite(identity(3), z) == z);
    for (const auto& s : permutations(3))
      for (const auto& t : permutations(3))
        CHECK(sigma_act_partite(compose(t, s), z) == sigma_act_partite(t, sigma_act_partite(s, z)));
    Local y;
    y[1u] = 1;
    y[2u] = 2;
    y[3u] = 3;
    Local sw = sigma_act_partite({1, 0}, y);
    CHECK(sw[1u] == 2);
    CHECK(sw[2u] == 1);
    CHECK(sw[3u] == 3);
  }

  TEST_CASE("patterns") {
    std::vector<int> e = {1, 0, 2, 2, 1, 0};
    int p = pattern_pack(e, 3);
    CHECK(pattern_unpack(p, 3, 3) == e);
    CHECK(pattern_count(2, 2) == 4);
    for (int r = 0; r < 6; ++r) CHECK(pattern_get(p, 3, r) == e[r]);
  }

  TEST_CASE("saturating arithmetic") {
    CHECK(sat_mul(UINT64_MAX, 2) == UINT64_MAX);
    CHECK(sat_pow(2, 64) == UINT64_MAX);
    CHECK(sat_pow(3, 4) == 81);
    CHECK(falling(5, 3) == 60);
    CHECK(binom(6, 3) == 20);
  }
}

#include <doctest.h>

#include <cmath>
#include <set>

#include "harity/adversaries.hpp"

using namespace harity;

namespace {

// For every pair: f2 ∉ f1(U), or f2 ∈ {f1(u), f1(v)}.
bool clean(const std::vector<int>& f1, const std::vector<int>& f2, int rho, const std::vector<int>& U) {
  std::set<int> img;
  for (int u : U) img.insert(f1[u]);
  for (size_t i = 0; i < U.size(); ++i)
    for (size_t j = i + 1; j < U.size(); ++j) {
      int c = f2[U[i] * rho + U[j]];
      if (img.count(c) && c != f1[U[i]] && c != f1[U[j]]) return false;
    }
  return true;
}

}  // namespace

TEST_SUITE("adversaries") {
  TEST_CASE("lower bound values") {
    CHECK(nfl_lower_bound(0.1, 5, 20, 1, 1) == doctest::Approx((0.375 - 0.1) / 0.9));
    CHECK(nfl_lower_bound(0.1, 5, 20, 1, 1) == doctest::Approx(0.3055555556));
    CHECK(nfl_lower_bound(0.1, 20, 20, 1, 1) < 0);
    CHECK_THROWS_AS(nfl_lower_bound(1.0, 5, 20, 1, 1), std::invalid_argument);
  }

  TEST_CASE("scenario tables") {
    ShatteredScenario sc = ShatteredScenario::binary(4);
    CHECK(sc.table(0b0101) == std::vector<int>{1, 0, 1, 0});
    sc.f1[2] = 0;
    CHECK_THROWS(sc.validate());
    CHECK_THROWS(ShatteredScenario::binary(0).validate());
  }

  TEST_CASE("memorizer failure is the miss probability") {
    // B = {0}, d = 4, m = 2: fails exactly when point 0 is unseen, (3/4)^2
    ShatteredScenario sc = ShatteredScenario::binary(4);
    UnaryLearner a = unary_memorize(sc, sc.f0, "mem0");
    Rng rng = make_rng(12, 0);
    Frequency f = nfl_failure(a, sc, unary_zero_one(), 0b0001, 2, 0.2, 20000, rng);
    CHECK(std::abs(f.freq - 0.5625) < 5 * std::sqrt(0.5625 * 0.4375 / 20000));
  }

  TEST_CASE("d = 1 is learnable") {
    ShatteredScenario sc = ShatteredScenario::binary(1);
    Rng rng = make_rng(1, 0);
    NflResult r = nfl_worst_F(unary_erm(sc), sc, unary_zero_one(), 1, 0.1, 200, rng);
    CHECK(r.failure.freq == 0);
    CHECK(r.candidates == 2);
  }

  TEST_CASE("ERM and constants meet the bound") {
    ShatteredScenario sc = ShatteredScenario::binary(10);
    double bound = nfl_lower_bound(0.1, 3, 10, 1, 1);
    for (const auto& a : {unary_erm(sc), unary_constant(sc, 0), unary_constant(sc, 1)}) {
      Rng rng = make_rng(2, 0);
      NflResult r = nfl_worst_F(a, sc, unary_zero_one(), 3, 0.1, 300, rng);
      CHECK(r.candidates == 1024);
      CHECK(r.failure.freq >= bound - 3 * r.failure.se);
    }
  }

  TEST_CASE("Ramsey ρ") {
    std::vector<uint64_t> want = {1, 2, 6, 15, 33, 63};
    for (int n = 1; n <= 6; ++n) CHECK(ramsey_rho(n) == want[n - 1]);
  }

  TEST_CASE("clean subsets on random instances") {
    for (int n = 3; n <= 5; ++n) {
      int rho = static_cast<int>(ramsey_rho(n));
      for (uint64_t s = 0; s < 10; ++s) {
        Rng rng = make_rng(s, static_cast<uint64_t>(n));
        std::vector<int> pool(2 * rho);
        for (int i = 0; i < 2 * rho; ++i) pool[i] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> f1(pool.begin(), pool.begin() + rho);
        std::vector<int> f2(static_cast<size_t>(rho) * rho, 0);
        for (int u = 0; u < rho; ++u)
          for (int v = u + 1; v < rho; ++v)
            f2[u * rho + v] = f2[v * rho + u] = std::uniform_int_distribution<int>(0, 2 * rho - 1)(rng);
        auto U = find_clean_subset(f1, f2, n);
        REQUIRE(U.has_value());
        CHECK(static_cast<int>(U->size()) == n);
        CHECK(std::set<int>(U->begin(), U->end()).size() == U->size());
        CHECK(clean(f1, f2, rho, *U));
      }
    }
    CHECK_THROWS_AS(find_clean_subset({1, 1, 2}, std::vector<int>(9, 0), 2), std::invalid_argument);
  }

  TEST_CASE("partition identity on dist:6") {
    FamilySpec f = distance_family(6);
    PartitionAdversary good = make_partition_adversary(*f.partition, 0, {1, 2, 4});
    CHECK(pf_identity_mismatches(good, 2) == 0);
    PartitionAdversary bad = make_partition_adversary(*f.partition, 0, {1, 3, 4});
    CHECK(pf_identity_mismatches(bad, 2) > 0);
    CHECK_THROWS(make_partition_adversary(*f.partition, 1, {1, 2}));
    auto U = partition_clean_set(*f.partition, 0, 3);
    REQUIRE(U.has_value());
    CHECK(pf_identity_mismatches(make_partition_adversary(*f.partition, 0, *U), 2) == 0);
  }

  TEST_CASE("partition adversary pieces") {
    FamilySpec f = distance_family(6);
    PartitionAdversary adv = make_partition_adversary(*f.partition, 0, {1, 2, 4});
    CHECK(adv.chi1(4) == 3);
    CHECK(adv.chi2(1, 4) == 2);
    CHECK(adv.chi2(2, 2) == -1);
    // χ₂(1,2) = 0 = χ₁(1): first match
    CHECK(adv.g(1, 2) == 1);
    CHECK(adv.g(2, 4) == 1);
    CHECK(adv.g(1, 4) == 0);
  }

  TEST_CASE("VCN scenario on a partized bounded-degree class") {
    FamilySpec f = bounded_degree_family(5, 3);
    HypothesisClass p = partize_class(f.cls);
    LossFn l = zero_one_loss(p.L, 2, true);
    VcnScenario v = vcn_nonlearn_scenario(p, 3, l);
    CHECK(v.unary.d == 3);
    for (uint64_t B = 0; B < 8; ++B) CHECK(v.project(p.member(v.member_for(B))) == v.unary.table(B));
    for (int j = 0; j < 3; ++j) CHECK(v.mu.local_mass(v.lift_point(j)) == Rational(1, 3));
    UnaryLearner w = v.wrap(erm_partite(p, l));
    Rng rng = make_rng(3, 0);
    NflResult r = nfl_worst_F(w, v.unary, v.unary_loss, 2, 0.1, 200, rng);
    CHECK(r.failure.freq >= nfl_lower_bound(0.1, 2, 3, v.unary_loss.separation, 1) - 3 * r.failure.se);
    CHECK_THROWS_AS(vcn_nonlearn_scenario(f.cls, 2, zero_one_loss(2, 2, false)), std::invalid_argument);
    CHECK_THROWS_AS(vcn_nonlearn_scenario(p, 5, l), std::runtime_error);
  }
}

#include <doctest.h>

#include "harity/families.hpp"
#include "harity/learners.hpp"
#include "harity/losses.hpp"
#include "harity/reductions.hpp"
#include "harity/sampler.hpp"

using namespace harity;

namespace {

Hypothesis random_table(const Template& t, int L, uint64_t seed) {
  Rng rng = make_rng(seed, 7);
  std::vector<int> tab(t.local_count());
  for (auto& y : tab) y = std::uniform_int_distribution<int>(0, L - 1)(rng);
  return table_hypothesis(t, L, tab);
}

ProbTemplate random_weights(const Template& t, uint64_t seed) {
  Rng rng = make_rng(seed, 8);
  std::vector<std::vector<Rational>> w;
  for (int sz : t.n) {
    std::vector<int> raw(sz);
    int tot = 0;
    for (auto& r : raw) tot += r = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<Rational> v;
    for (int r : raw) v.emplace_back(r, tot);
    w.push_back(v);
  }
  return ProbTemplate(t, w);
}

// pattern of a 2-ary hypothesis at z: identity digit first, swap digit second
int pattern2(const Hypothesis& f, const Local& z) {
  Local s = z;
  s[1u] = z[2u];
  s[2u] = z[1u];
  return f(z) + f.L * f(s);
}

}  // namespace

TEST_SUITE("losses") {
  TEST_CASE("0/1 flags") {
    Template t = Template::nonpartite({3, 2});
    LossFlags f = loss_flags(zero_one_loss(3, 2, false), t);
    CHECK(f.sup_norm == 1);
    CHECK(f.separation == 1);
    CHECK(f.separated);
    CHECK(f.symmetric);
    LossFn half = make_loss("half", 1, true, 2, [](const Local&, int y, int y2) { return Rational(y != y2, 2); });
    LossFlags g = loss_flags(half, Template::partite_from(1, {3}));
    CHECK(g.sup_norm == Rational(1, 2));
    CHECK(g.separation == Rational(1, 2));
    LossFn asym = make_loss("asym", 1, true, 2, [](const Local&, int y, int y2) { return Rational(y > y2 ? 1 : 0); });
    LossFlags a = loss_flags(asym, Template::partite_from(1, {2}));
    CHECK(!a.symmetric);
    CHECK(!a.separated);
  }

  TEST_CASE("non-partite total loss against a pattern oracle") {
    Template t = Template::nonpartite({3, 2});
    LossFn l = zero_one_loss(2, 2, false);
    for (uint64_t s = 0; s < 4; ++s) {
      ProbTemplate mu = random_weights(t, s);
      Hypothesis f = random_table(t, 2, s), h = random_table(t, 2, s + 100);
      Rational want = 0;
      for (uint64_t r = 0; r < t.local_count(); ++r) {
        Local z = t.local_unrank(r);
        if (pattern2(f, z) != pattern2(h, z)) want += mu.local_mass(z);
      }
      CHECK(total_loss(mu, f, l, h) == want);
      CHECK(predict(f, t.local_unrank(5)) == pattern2(f, t.local_unrank(5)));
    }
  }

  TEST_CASE("hidden coordinates enter the total loss") {
    Template t = Template::partite_from(1, {3}), aux = Template::partite_from(1, {2});
    ProbTemplate mu = random_weights(t, 1), mu2 = random_weights(aux, 2);
    Template joint = product(t, aux);
    Hypothesis f = random_table(joint, 2, 3), h = random_table(t, 2, 4);
    LossFn l = zero_one_loss(2, 1, true);
    Rational want = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2; ++b) {
        Local z, w;
        z[1u] = a;
        w[1u] = b;
        if (f(join_local(z, w, aux)) != h(z)) want += mu.weight(0, a) * mu2.weight(0, b);
      }
    CHECK(total_loss(mu, mu2, f, l, h) == want);
    CHECK(total_loss_d(mu, mu2, f, l, h) == doctest::Approx(to_double(want)));
  }

  TEST_CASE("empirical loss of a partite sample") {
    Template t = Template::partite_from(1, {4});
    ProbTemplate mu = ProbTemplate::uniform(t);
    Hypothesis h = random_table(t, 3, 5);
    Rng rng = make_rng(9, 0);
    PConfig x = sample_pconfig(mu, {6}, rng);
    std::vector<int> y(6);
    for (auto& v : y) v = std::uniform_int_distribution<int>(0, 2)(rng);
    int miss = 0;
    for (int i = 0; i < 6; ++i) {
      Local z;
      z[1u] = x.c[i];
      miss += h(z) != y[i];
    }
    CHECK(empirical_loss_partite(x, y, zero_one_loss(3, 1, true), h) == Rational(miss, 6));
  }

  TEST_CASE("empirical loss over k-sets uses one order per set") {
    Template t = Template::nonpartite({3, 2});
    ProbTemplate mu = ProbTemplate::uniform(t);
    Hypothesis f = random_table(t, 2, 11);
    Rng rng = make_rng(3, 1);
    Config x = sample_config(mu, 5, rng);
    auto y = star(f, x);
    LossFn l = zero_one_loss(2, 2, false);
    OrderChoice oc = OrderChoice::canonical(5, 2);
    CHECK(oc.valid());
    CHECK(oc.alpha.size() == binom(5, 2));
    CHECK(empirical_loss_nonpartite(x, y, l, f, oc) == 0);
    // flipping every label of the sample gives loss 1
    for (auto& v : y) v = 1 - v;
    CHECK(empirical_loss_nonpartite(x, y, l, f, oc) == 1);
  }

  TEST_CASE("locality and flexibility for 0/1") {
    FamilySpec fam = matching_family(2);
    AgnosticLossFn a = wrap_agnostic(zero_one_loss(2, 2, false));
    CHECK(check_locality(a, fam.cls));
    CHECK(agnostic_sup_norm(a, fam.cls) == 1);
    CHECK(agnostic_symmetric(a, fam.cls));
    for (bool partite : {false, true})
      for (int k : {1, 2}) {
        FlexibilityWitness w = flexibility_witness_01(2, k, partite);
        Template t = partite ? Template::partite_from(k, std::vector<int>((1 << k) - 1, 2))
                             : Template::nonpartite(std::vector<int>(k, 2));
        CHECK(check_flexibility(w, zero_one_loss(2, k, partite), t));
        // the averaged 0/1 loss is 1 − 1/L^{#entries}
        Local z = t.local_unrank(0);
        int entries = partite ? 1 : static_cast<int>(factorial(k));
        CHECK(w.avg_loss(z) == 1 - Rational(1, static_cast<int>(sat_pow(2, entries))));
      }
  }

  TEST_CASE("N(·,b) has the law of G*") {
    FlexibilityWitness w = flexibility_witness_01(2, 2, false);
    auto n = n_law(w, 3);
    Template t = Template::nonpartite({2, 1});
    Rng rng = make_rng(4, 4);
    Config x = sample_config(ProbTemplate::uniform(t), 3, rng);
    CHECK(n == g_star_law(w, x));
    Rational tot = 0;
    for (auto& [k, p] : n) tot += p;
    CHECK(tot == 1);
  }

  TEST_CASE("neutral symbol extension") {
    LossFn l = zero_one_loss(2, 1, true);
    FlexibilityWitness w = flexibility_witness_01(2, 1, true);
    auto [ext, info] = extend_with_neutral(l, w);
    CHECK(ext.L == 3);
    CHECK(info.bottom == 2);
    Local z;
    CHECK(contains_bottom(2, info, 1, true));
    CHECK(!contains_bottom(1, info, 1, true));
    CHECK(info.bottom_cost(z) == w.avg_loss(z));
    FamilySpec fam = matching_family(2);
    auto [ea, ia] = extend_with_neutral(wrap_agnostic(zero_one_loss(2, 2, false)), flexibility_witness_01(2, 2, false));
    CHECK(check_neutral(ea, ia, extend_codomain(fam.cls, 3)));
  }

  TEST_CASE("pattern rebase keeps entries") {
    int p = pattern_pack({1, 0}, 2);
    CHECK(pattern_unpack(pattern_rebase(p, 2, 3, 2), 3, 2) == std::vector<int>{1, 0});
  }

  TEST_CASE("Bayes predictor beats every table (partite k = 1, hidden part)") {
    Template t = Template::partite_from(1, {3}), aux = Template::partite_from(1, {3});
    for (uint64_t s = 0; s < 5; ++s) {
      ProbTemplate mu = random_weights(t, s), mu2 = random_weights(aux, s + 50);
      Hypothesis f = random_table(product(t, aux), 2, s);
      LossFn l = zero_one_loss(2, 1, true);
      auto b = bayes_predictor(mu, mu2, f, l);
      REQUIRE(b.has_value());
      // oracle: Σ_a μ(a)·(1 − max_y P(y | a))
      Rational want = 0;
      for (int a = 0; a < 3; ++a) {
        Rational p1 = 0;
        for (int c = 0; c < 3; ++c) {
          Local z, w;
          z[1u] = a;
          w[1u] = c;
          if (f(join_local(z, w, aux)) == 1) p1 += mu2.weight(0, c);
        }
        want += mu.weight(0, a) * (p1 > 1 - p1 ? 1 - p1 : p1);
      }
      CHECK(total_loss(mu, mu2, f, l, *b) == want);
    }
  }
}

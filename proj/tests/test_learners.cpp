#include <doctest.h>

#include <cmath>

#include "harity/families.hpp"
#include "harity/learners.hpp"

using namespace harity;

TEST_SUITE("learners") {
  TEST_CASE("closed-form ERM agrees with brute force") {
    FamilySpec f = matching_family(3);
    HypothesisClass brute = f.cls;
    brute.erm01 = nullptr;
    LossFn l = zero_one_loss(2, 2, false);
    ProbTemplate mu = ProbTemplate::uniform(f.cls.tmpl);
    for (uint64_t s = 0; s < 30; ++s) {
      // noisy labels so that ties and disagreements occur
      Rng rng = make_rng(s, 0);
      Config x = sample_config(mu, 6, rng);
      std::vector<int> y = star(f.cls.member(s % f.cls.count), x);
      for (auto& v : y)
        if (std::bernoulli_distribution(0.2)(rng)) v = 1 - v;
      SampleStats st = stats_nonpartite(x, y, 2, 2, OrderChoice::canonical(6, 2));
      uint64_t a = erm_index(f.cls, st, l), b = erm_index(brute, st, l);
      // equal empirical loss; brute force takes the smallest index
      CHECK(empirical_loss_exact(st, l, f.cls.member(a)) == empirical_loss_exact(st, l, brute.member(b)));
      Rational best = 1;
      for (uint64_t i = 0; i < f.cls.count; ++i) best = std::min(best, empirical_loss_exact(st, l, f.cls.member(i)));
      CHECK(empirical_loss_exact(st, l, brute.member(b)) == best);
    }
  }

  TEST_CASE("realizable ERM has zero empirical loss") {
    FamilySpec f = highorder_family(4);
    LossFn l = zero_one_loss(2, 2, true);
    PLearner a = erm_partite(f.cls, l);
    Scenario sc{ProbTemplate::uniform(f.cls.tmpl), std::nullopt, f.cls.member(0b1011)};
    Rng rng = make_rng(3, 3);
    PSample s = labeled_sample_partite(sc, 5, rng);
    CHECK(empirical_loss_partite(s.x, s.y, l, a.run(s, 0)) == 0);
  }

  TEST_CASE("sample-size formulas") {
    CHECK(derand_xi(0.5, 0.5) == doctest::Approx(0.25));
    CHECK(derand_xi(0.1, 0.3) == doctest::Approx(0.05));
    CHECK(concentration_bound(0.5, 8, 2, false, 1) == doctest::Approx(2 * std::exp(-0.25 * 8 / 8)));
    CHECK(concentration_bound(0.5, 8, 2, true, 1) == doctest::Approx(2 * std::exp(-0.25 * 8 / 4)));
    CHECK(highorder_delta_prime(0.19) == doctest::Approx(0.1));
    double a = m_uc(1, 2, 2, 1, 0.2, 0.2), b = m_uc(1, 2, 2, 1, 0.1, 0.2);
    CHECK(a < b);
    CHECK(a <= m_uc_upper(1, 2, 2, 1, 0.2, 0.2));
    CHECK(highorder_m_pac(0.1, 0.1, 1) > highorder_m_pac(0.2, 0.1, 1));
  }

  TEST_CASE("derandomized sample size for a 4-way learner") {
    // 2⌈(n/ε)ln(n/δ)⌉ at ξ = 1/4, n = 3, then ⌈2·4·16·ln 32⌉
    SampleSize m = [](double e, double d) { return 2.0 * std::ceil(3.0 / e * std::log(3.0 / d)); };
    auto R = [](int) { return uint64_t{4}; };
    CHECK(derand_sample_size(m, R, 4, 1, 0.5, 0.5) == 60 + 444);
    DerandSplit sp = derand_split(504, m, R, 4, 1);
    CHECK(sp.s >= 1);
    CHECK(sp.m1 + sp.m2 == 504);
    CHECK(derand_split(10, m, R, 4, 1).s == 0);
  }

  TEST_CASE("derandomization picks the best of R runs") {
    FamilySpec f = matching_family(2);
    LossFn l = zero_one_loss(2, 2, false);
    // learner b returns member b: only one of them is right
    NLearner r;
    r.name = "pick";
    r.R = [](int) { return uint64_t{4}; };
    r.run = [cls = f.cls](const NSample&, uint64_t b) { return cls.member(b); };
    SampleSize m = [](double, double) { return 4.0; };
    Hypothesis fallback = constant_hypothesis(2, false, 2, 0);
    NLearner d = derandomize(r, m, l, 1, fallback);
    Scenario sc{ProbTemplate::uniform(f.cls.tmpl), std::nullopt, f.cls.member(2)};
    Rng rng = make_rng(1, 1);
    NSample s = labeled_sample(sc, 200, rng);
    Hypothesis h = d.run(s, 0);
    CHECK(pointwise_equal(h, f.cls.member(2), f.cls.tmpl));
    NSample tiny = labeled_sample(sc, 3, rng);
    CHECK(pointwise_equal(d.run(tiny, 0), fallback, f.cls.tmpl));
  }

  TEST_CASE("frequencies") {
    Frequency f = make_frequency(30, 100);
    CHECK(f.freq == doctest::Approx(0.3));
    CHECK(f.se == doctest::Approx(std::sqrt(0.3 * 0.7 / 100)));
    CHECK(make_frequency(0, 0).trials == 0);
  }

  TEST_CASE("restriction keeps the first vertices") {
    ProbTemplate mu = ProbTemplate::uniform(Template::nonpartite({5, 2}));
    Rng rng = make_rng(8, 8);
    Config x = sample_config(mu, 5, rng);
    Hypothesis h = matching_family(2).cls.member(3);
    NSample s{x, std::vector<int>(falling(5, 2))};
    for (size_t i = 0; i < s.y.size(); ++i) s.y[i] = static_cast<int>(i % 2);
    NSample r = restrict_sample(s, 2, 1, 3);
    CHECK(r.x.m() == 3);
    CHECK(r.x.at({0}) == x.at({1}));
    CHECK(r.x.at({0, 2}) == x.at({1, 3}));
    int a[2] = {2, 0}, b[2] = {3, 1};
    CHECK(r.y[injection_rank(a, 2, 3)] == s.y[injection_rank(b, 2, 5)]);
  }

  TEST_CASE("higher-order learner") {
    InfVcn inf = infvcn_learner(6);
    CHECK(inf.cls.count == 64);
    CHECK(inf.m_pac(0.1, 0.1) == doctest::Approx(highorder_m_pac(0.1, 0.1, 1)));
    Scenario sc{ProbTemplate::uniform(inf.cls.tmpl), std::nullopt, inf.cls.member(0b110101)};
    LossFn l = zero_one_loss(2, 2, true);
    Frequency lo = estimate_pac_success(inf.learner, sc, l, 2, 0.1, 200, 5);
    Frequency hi = estimate_pac_success(inf.learner, sc, l, 60, 0.1, 200, 5);
    CHECK(hi.freq >= lo.freq);
    CHECK(hi.freq > 0.9);
  }

  TEST_CASE("uniform convergence and deviations are frequencies") {
    FamilySpec f = highorder_family(3);
    Scenario sc{ProbTemplate::uniform(f.cls.tmpl), std::nullopt, f.cls.member(5)};
    LossFn l = zero_one_loss(2, 2, true);
    UcReport r = check_uniform_convergence(sc, f.cls, l, 30, 0.3, 100, 1);
    CHECK(r.representative.trials == 100);
    CHECK(r.erm_violations == 0);
    Frequency d = measure_deviation(sc, l, f.cls.member(2), 16, 0.25, 400, 2);
    CHECK(d.freq <= concentration_bound(0.25, 16, 2, true, 1) + 3 * d.se + 1e-12);
  }
}

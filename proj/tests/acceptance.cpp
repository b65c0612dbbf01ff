// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "harity/adversaries.hpp"
#include "harity/dims.hpp"
#include "harity/families.hpp"
#include "harity/learners.hpp"
#include "harity/losses.hpp"
#include "harity/reductions.hpp"

using namespace harity;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Hypothesis random_table(const Template& t, int L, Rng& rng) {
  std::vector<int> tab(t.local_count());
  for (auto& y : tab) y = std::uniform_int_distribution<int>(0, L - 1)(rng);
  return table_hypothesis(t, L, tab);
}

ProbTemplate random_weights(const Template& t, Rng& rng) {
  std::vector<std::vector<Rational>> w;
  for (int sz : t.n) {
    std::vector<int> raw(sz);
    int tot = 0;
    for (auto& r : raw) tot += r = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<Rational> v;
    for (int r : raw) v.emplace_back(r, tot);
    w.push_back(v);
  }
  return ProbTemplate(t, w);
}

// Splits [0, n) over hardware threads; each index is handled by exactly one thread.
void parallel_for(int n, const std::function<void(int)>& body) {
  int workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome dimension_exactness() {
  auto t0 = std::chrono::steady_clock::now();
  int bad = 0;
  for (int n = 2; n <= 6; ++n) {
    FamilySpec f = matching_family(n);
    DimResult v = vcn_k(f.cls, 8), c = vc_dim(full_family(f.cls), 8);
    bad += v.at_cap || v.value != 1 || c.at_cap || c.value != n;
  }
  for (int n = 1; n <= 5; ++n)
    for (int d = 0; d <= 4; ++d) {
      DimResult v = vcn_k(bounded_degree_family(n, d).cls, 8);
      bad += v.at_cap || v.value != std::min(d, n - 1);
    }
  double s = seconds_since(t0);
  return {bad == 0 && s < 10, std::to_string(bad) + " mismatches, " + fmt(s) + " s"};
}

Outcome growth_bound_check() {
  int bad = 0, checked = 0;
  for (const char* name : {"matching:4", "bdeg:5:2", "dist:6", "maxg:6", "highorder:8"}) {
    FamilySpec f = family_by_name(name);
    HypothesisClass c = f.cls.partite ? f.cls : partize_class(f.cls);
    int vcn = vcn_k(c, 10).value;
    for (int m = 1; m <= 5; ++m) {
      ++checked;
      bad += growth_function(c, m) > growth_bound(vcn, m, c.L).falling_form;
    }
  }
  return {bad == 0, std::to_string(checked) + " (family, m) pairs, " + std::to_string(bad) + " violations"};
}

Outcome ssp_check() {
  int bad = 0;
  for (uint64_t s = 0; s < 50; ++s) {
    Rng rng = make_rng(s, 3);
    FunctionFamily f;
    f.domain = 1 + static_cast<int>(s % 8);
    int count = std::uniform_int_distribution<int>(1, 40)(rng);
    for (int i = 0; i < count; ++i) {
      std::vector<int> g(f.domain);
      for (auto& v : g) v = std::uniform_int_distribution<int>(0, 1)(rng);
      f.add(g);
    }
    f.dedup();
    bad += !ssp_holds(f);
  }
  return {bad == 0, "50 families, " + std::to_string(bad) + " violations"};
}

Outcome uniform_convergence() {
  auto t0 = std::chrono::steady_clock::now();
  FamilySpec f = matching_family(4);
  HypothesisClass c = partize_class(f.cls);
  ProbTemplate mu = partize_template(ProbTemplate::uniform(f.cls.tmpl), 2);
  Scenario sc{mu, std::nullopt, c.member(0b1011)};
  LossFn l = zero_one_loss(c.L, 2, true);
  const double eps = 0.2, delta = 0.2;
  double formula = std::ceil(m_uc(f.vcn, 2, 2, 1, eps, delta));
  int m = static_cast<int>(std::min(formula, 400.0));
  UcReport at = check_uniform_convergence(sc, c, l, m, eps, 1000, 11);
  bool ok = at.representative.freq >= 1 - delta - 3 * at.representative.se;
  std::vector<int> sweep = {10, 20, 40, 80};
  std::vector<double> fr(sweep.size());
  parallel_for(static_cast<int>(sweep.size()), [&](int i) {
    fr[i] = check_uniform_convergence(sc, c, l, sweep[i], eps, 1000, 12).representative.freq;
  });
  bool mono = true;
  for (size_t i = 1; i < fr.size(); ++i) mono = mono && fr[i] >= fr[i - 1];
  double s = seconds_since(t0);
  std::string d = "m_uc=" + fmt(formula) + ", m=" + std::to_string(m) + ", freq=" + fmt(at.representative.freq) +
                  ", sweep=";
  for (double v : fr) d += fmt(v) + " ";
  d += mono ? "(non-decreasing), " : "(not monotone), ";
  return {ok && mono && s < 120, d + fmt(s) + " s"};
}

Outcome concentration() {
  struct Case {
    int k;
    bool partite;
    int m;
    double eps;
  };
  std::vector<Case> cases;
  for (int k : {1, 2})
    for (bool p : {false, true})
      for (int m : {8, 16, 32})
        for (double e : {0.1, 0.25, 0.5}) cases.push_back({k, p, m, e});
  std::vector<int> bad(cases.size(), 0);
  std::vector<double> worst(cases.size(), 0);
  parallel_for(static_cast<int>(cases.size()), [&](int i) {
    const Case& cs = cases[i];
    Rng rng = make_rng(static_cast<uint64_t>(cs.k * 2 + cs.partite), 5);
    Template t = cs.partite ? Template::partite_from(cs.k, std::vector<int>((1 << cs.k) - 1, 3))
                            : Template::nonpartite(std::vector<int>(cs.k, 3));
    ProbTemplate mu = random_weights(t, rng);
    Hypothesis F = random_table(t, 2, rng), H = random_table(t, 2, rng);
    LossFn l = zero_one_loss(2, cs.k, cs.partite);
    Scenario sc{mu, std::nullopt, F};
    Frequency fq = measure_deviation(sc, l, H, cs.m, cs.eps, 10000, 100 + static_cast<uint64_t>(i));
    double bound = concentration_bound(cs.eps, cs.m, cs.k, cs.partite, 1);
    bad[i] = fq.freq > bound + 3 * fq.se;
    worst[i] = fq.freq - bound;
  });
  int nb = 0;
  double w = -1e9;
  for (size_t i = 0; i < cases.size(); ++i) {
    nb += bad[i];
    w = std::max(w, worst[i]);
  }
  return {nb == 0, std::to_string(cases.size()) + " cases, " + std::to_string(nb) + " above bound+3σ, max(freq−bound)=" + fmt(w)};
}

Outcome partization_exactness() {
  auto t0 = std::chrono::steady_clock::now();
  Template t = Template::nonpartite({2, 2});
  bool ok = check_phi_iota(t);
  int bad = 0;
  // every binary 2-ary hypothesis on the 2-point spaces
  for (uint32_t s = 0; s < (1u << t.local_count()); ++s) {
    std::vector<int> tab(t.local_count());
    for (size_t i = 0; i < tab.size(); ++i) tab[i] = s >> i & 1u;
    Hypothesis f = table_hypothesis(t, 2, tab);
    for (int m = 2; m <= 4; ++m) bad += !check_partization_square(f, t, m);
  }
  Rng rng = make_rng(6, 6);
  ProbTemplate mu = random_weights(t, rng);
  for (int m = 2; m <= 4; ++m) bad += phi_pushforward_law(mu, m) != pconfig_law(partize_template(mu, 2), {m / 2, m / 2});
  double sec = seconds_since(t0);
  return {ok && bad == 0 && sec < 1, std::to_string(bad) + " failures, " + fmt(sec) + " s"};
}

Outcome departization_oracle() {
  Template t = Template::partite_from(2, {2, 2, 2}), aux = Template::partite_from(2, {2, 2, 1});
  auto [l_ext, info] = extend_with_neutral(zero_one_loss(2, 2, false), flexibility_witness_01(2, 2, false));
  Template nt = Template::nonpartite({2, 2});
  int bad = 0;
  for (uint64_t s = 0; s < 3; ++s) {
    Rng rng = make_rng(s, 7);
    ProbTemplate mu = random_weights(t, rng), mu2 = random_weights(aux, rng);
    Scenario sc{mu, mu2, random_table(product(t, aux), pattern_count(2, 2), rng)};
    bad += departization_law(sc, 2, 2) != discrete_equivalent_law(sc, 2, 2);
    // the decomposition takes F as the partization of a non-partite map
    Scenario sd{mu, std::nullopt, partize_hypothesis(random_table(nt, 2, rng))};
    DecompositionReport r = loss_decomposition(sd, 2, l_ext, info, random_table(nt, 2, rng));
    bad += !r.holds() || r.p != Rational(1, 16);
  }
  return {bad == 0, "3 weightings, " + std::to_string(bad) + " failures, p=" + to_string(departization_p_exact(2))};
}

Outcome no_free_lunch() {
  ShatteredScenario sc = ShatteredScenario::binary(20);
  Rng rng = make_rng(8, 8);
  NflResult r = nfl_worst_F(unary_erm(sc), sc, unary_zero_one(), 5, 0.1, 10000, rng);
  double bound = nfl_lower_bound(0.1, 5, 20, 1, 1);
  return {r.failure.freq >= bound - 3 * r.failure.se,
          "freq=" + fmt(r.failure.freq) + " vs bound " + fmt(bound) + " over " + std::to_string(r.candidates) + " F"};
}

Outcome ramsey() {
  int bad = 0;
  for (int n = 3; n <= 5; ++n) {
    int rho = static_cast<int>(ramsey_rho(n));
    for (uint64_t s = 0; s < 100; ++s) {
      Rng rng = make_rng(s, 90 + static_cast<uint64_t>(n));
      std::vector<int> pool(3 * rho);
      for (int i = 0; i < 3 * rho; ++i) pool[i] = i;
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<int> f1(pool.begin(), pool.begin() + rho);
      std::vector<int> f2(static_cast<size_t>(rho) * rho, 0);
      for (int u = 0; u < rho; ++u)
        for (int v = u + 1; v < rho; ++v)
          f2[u * rho + v] = f2[v * rho + u] = f1[std::uniform_int_distribution<int>(0, rho - 1)(rng)];
      auto U = find_clean_subset(f1, f2, n);
      if (!U || static_cast<int>(U->size()) != n) {
        ++bad;
        continue;
      }
      std::set<int> img, pts(U->begin(), U->end());
      for (int u : *U) img.insert(f1[u]);
      bool clean = pts.size() == U->size();
      for (int u : *U)
        for (int v : *U) {
          if (u >= v) continue;
          int c = f2[u * rho + v];
          clean = clean && (!img.count(c) || c == f1[u] || c == f1[v]);
        }
      bad += !clean;
    }
  }
  return {bad == 0, "300 instances, " + std::to_string(bad) + " failures"};
}

Outcome higher_order() {
  InfVcn inf = infvcn_learner(8);
  const double eps = 0.2, delta = 0.2;
  double formula = std::ceil(inf.m_pac(eps, delta));
  Scenario sc{ProbTemplate::uniform(inf.cls.tmpl), std::nullopt, inf.cls.member(0b10110101)};
  LossFn l = zero_one_loss(2, 2, true);
  if (formula <= 1000) {
    int m = static_cast<int>(formula);
    Frequency f = estimate_pac_success(inf.learner, sc, l, m, eps, 1000, 13);
    return {f.freq >= 1 - delta - 3 * f.se, "m_pac=" + std::to_string(m) + ", success=" + fmt(f.freq)};
  }
  Frequency lo = estimate_pac_success(inf.learner, sc, l, 100, eps, 1000, 13);
  Frequency hi = estimate_pac_success(inf.learner, sc, l, 1000, eps, 1000, 13);
  return {hi.freq >= lo.freq, "m_pac=" + fmt(formula) + " above cap; " + fmt(lo.freq) + " -> " + fmt(hi.freq)};
}

Outcome bayes() {
  int bad = 0, missing = 0;
  for (uint64_t s = 0; s < 20; ++s) {
    Rng rng = make_rng(s, 11);
    int kind = static_cast<int>(s % 3);
    int k = kind == 1 ? 2 : 1;
    bool partite = kind != 2;
    Template t = partite ? Template::partite_from(k, std::vector<int>((1 << k) - 1, 3)) : Template::nonpartite({4});
    Template aux = partite ? Template::partite_from(k, std::vector<int>((1 << k) - 1, 2)) : Template::nonpartite({3});
    ProbTemplate mu = random_weights(t, rng), mu2 = random_weights(aux, rng);
    Hypothesis F = random_table(product(t, aux), 3, rng);
    LossFn l = zero_one_loss(3, k, partite);
    auto b = bayes_predictor(mu, mu2, F, l);
    if (!b) {
      ++missing;
      continue;
    }
    AgnosticLossFn al = wrap_agnostic(l);
    Rational best = total_loss(mu, mu2, F, al, *b);
    for (int i = 0; i < 16; ++i) bad += total_loss(mu, mu2, F, al, random_table(t, 3, rng)) < best;
  }
  return {bad == 0 && missing == 0,
          "20 scenarios, " + std::to_string(bad) + " members beat it, " + std::to_string(missing) + " without predictor"};
}

Outcome derandomization() {
  FamilySpec f = matching_family(3);
  LossFn l = zero_one_loss(2, 2, false);
  NLearner erm = erm_nonpartite(f.cls, l);
  // three of four draws run ERM, the fourth flips its output
  NLearner r;
  r.name = "coin-erm";
  r.R = [](int) { return uint64_t{4}; };
  r.run = [erm](const NSample& s, uint64_t b) {
    Hypothesis h = erm.run(s, 0);
    if (b < 3) return h;
    Hypothesis g = h;
    g.eval = [h](const Local& z) { return 1 - h(z); };
    return g;
  };
  const double eps = 0.5, delta = 0.5;
  const int n = 3;
  SampleSize own = [n](double e, double d) { return 2.0 * std::ceil(n / e * std::log(n / d)); };
  int m_r = static_cast<int>(own(eps, delta));
  uint64_t m_d = derand_sample_size(own, r.R, 4, 1, eps, delta);
  NLearner d = derandomize(r, own, l, 1, constant_hypothesis(2, false, 2, 0));
  Scenario sc{ProbTemplate::uniform(f.cls.tmpl), std::nullopt, f.cls.member(0b101)};

  // deterministic: the randomness index is ignored
  Rng rng = make_rng(1, 12);
  NSample probe = labeled_sample(sc, static_cast<int>(m_d), rng);
  bool det = d.R(static_cast<int>(m_d)) == 1 && pointwise_equal(d.run(probe, 0), d.run(probe, 3), f.cls.tmpl);

  Frequency fr = estimate_pac_success(r, sc, l, m_r, eps, 1000, 21);
  // the derived size is ~23x larger per sample, so fewer trials; the comparison uses the randomized σ
  std::vector<int> hits(8, 0);
  parallel_for(8, [&](int w) {
    Frequency part = estimate_pac_success(d, sc, l, static_cast<int>(m_d), eps, 50, 1000 + static_cast<uint64_t>(w));
    hits[w] = static_cast<int>(std::lround(part.freq * 50));
  });
  int tot = 0;
  for (int h : hits) tot += h;
  Frequency fd = make_frequency(tot, 400);
  return {det && fd.freq >= fr.freq - 3 * fr.se,
          std::string(det ? "deterministic" : "NOT deterministic") + ", randomized " + fmt(fr.freq) + " at m=" +
              std::to_string(m_r) + ", derandomized " + fmt(fd.freq) + " at m=" + std::to_string(m_d)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {"dimension exactness", dimension_exactness},
      {"growth bound", growth_bound_check},
      {"SSP certification", ssp_check},
      {"uniform convergence", uniform_convergence},
      {"concentration", concentration},
      {"partization exactness", partization_exactness},
      {"departization oracle", departization_oracle},
      {"no-free-lunch", no_free_lunch},
      {"Ramsey lemma", ramsey},
      {"higher-order learnability", higher_order},
      {"Bayes optimality", bayes},
      {"derandomization", derandomization},
  };
  // optional arguments pick criteria by number
  std::set<int> only;
  for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
  int failures = 0, i = 0;
  for (const auto& c : all) {
    ++i;
    if (!only.empty() && !only.count(i)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.ok;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.ok ? "PASS" : "FAIL", i, c.name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures;
}

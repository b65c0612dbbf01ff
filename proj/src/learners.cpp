#include "harity/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include "harity/families.hpp"

namespace harity {

namespace {

// 0 ln 0 = 0
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

SampleStats stats_of(const NSample& s, int k, int L) {
  return stats_nonpartite(s.x, s.y, k, L, OrderChoice::canonical(s.x.m(), k));
}

SampleStats stats_of(const PSample& s, int, int) { return stats_partite(s.x, s.y); }

template <class Sample>
Hypothesis derand_run(const Sample& s, int m, int k, const std::function<Hypothesis(const Sample&, uint64_t)>& run,
                      const std::function<uint64_t(int)>& R, const SampleSize& m_rand, const LossFn& l,
                      double sup_norm, int K, const Hypothesis& fallback) {
  DerandSplit sp = derand_split(m, m_rand, R, K, sup_norm);
  if (sp.s == 0) return fallback;
  Sample s1 = [&] {
    if constexpr (std::is_same_v<Sample, NSample>)
      return restrict_sample(s, k, 0, sp.m1);
    else
      return restrict_sample(s, 0, sp.m1);
  }();
  Sample s2 = [&] {
    if constexpr (std::is_same_v<Sample, NSample>)
      return restrict_sample(s, k, sp.m1, sp.m2);
    else
      return restrict_sample(s, sp.m1, sp.m2);
  }();
  uint64_t r = R(sp.m1);
  if (r > kMaxDerandR) throw std::length_error("randomness set too large to enumerate");
  SampleStats st = stats_of(s2, k, l.L);
  Hypothesis best = fallback;
  double best_loss = std::numeric_limits<double>::infinity();
  for (uint64_t b = 0; b < r; ++b) {
    Hypothesis h = run(s1, b);
    double e = empirical_loss(st, l, h);
    if (e < best_loss) {
      best_loss = e;
      best = std::move(h);
    }
  }
  return best;
}

}  // namespace

uint64_t erm_index(const HypothesisClass& h, const SampleStats& s, const LossFn& l) {
  if (h.count == 0) throw std::invalid_argument("empty class");
  if (l.name == "01" && h.erm01) return h.erm01(s);
  uint64_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  Rational best_exact = -1;
  for (uint64_t i = 0; i < h.count; ++i) {
    Hypothesis c = h.member(i);
    double d = empirical_loss(s, l, c);
    if (d < best_d - 1e-9) {
      best = i;
      best_d = d;
      best_exact = -1;
    } else if (d <= best_d + 1e-9) {
      // near-tie: settle exactly
      if (best_exact < 0) best_exact = empirical_loss_exact(s, l, h.member(best));
      Rational e = empirical_loss_exact(s, l, c);
      if (e < best_exact) {
        best = i;
        best_d = d;
        best_exact = e;
      }
    }
  }
  return best;
}

NLearner erm_nonpartite(const HypothesisClass& h, const LossFn& l) {
  if (h.partite) throw std::invalid_argument("non-partite ERM needs a non-partite class");
  NLearner a;
  a.name = "erm:" + h.name;
  a.run = [h, l](const NSample& s, uint64_t) { return h.member(erm_index(h, stats_of(s, h.k, l.L), l)); };
  return a;
}

PLearner erm_partite(const HypothesisClass& h, const LossFn& l) {
  if (!h.partite) throw std::invalid_argument("partite ERM needs a partite class");
  PLearner a;
  a.name = "erm:" + h.name;
  a.run = [h, l](const PSample& s, uint64_t) { return h.member(erm_index(h, stats_partite(s.x, s.y), l)); };
  return a;
}

double uc_constant_c() {
  return std::sqrt(1.0 - std::log(std::log(2.0)) / std::log(2.0)) + 1.0 / (2.0 * std::sqrt(1.0 - std::exp(-1.0)));
}

double m_uc(int vcn, int k, int L, double sup_norm, double eps, double delta) {
  double c = uc_constant_c();
  double B = std::max(1.0 / (2.0 * std::sqrt(2.0) * c), sup_norm);
  double k4 = std::pow(k, 4.0);
  double lead = 4.0 * c * c * k4 * B * B / (delta * delta * eps * eps);
  double e = std::exp(1.0);
  double inner = 8.0 * c * c * k4 * B * B * vcn / (delta * delta * eps * eps);
  double pairs = static_cast<double>(binom(L, 2));
  return lead * (e / (e - 1.0) * xlogy(vcn, inner) + std::log(2.0) + xlogy(vcn, pairs)) + 0.5;
}

double m_uc_upper(int vcn, int k, int L, double sup_norm, double eps, double delta) {
  double c = uc_constant_c();
  double B = std::max(1.0 / (2.0 * std::sqrt(2.0) * c), sup_norm);
  double q = std::pow(k, 4.0) * B * B / (delta * delta * eps * eps);
  double pairs = static_cast<double>(binom(L, 2));
  return 13.918 * q * (1.582 * xlogy(vcn, 27.836 * q * vcn) + 0.694 + xlogy(vcn, pairs)) + 0.5;
}

Frequency make_frequency(int hits, int trials) {
  Frequency f;
  f.trials = trials;
  if (trials <= 0) return f;
  f.freq = static_cast<double>(hits) / trials;
  f.se = std::sqrt(f.freq * (1.0 - f.freq) / trials);
  return f;
}

UcReport check_uniform_convergence(const Scenario& sc, const HypothesisClass& h, const LossFn& l, int m, double eps,
                                   int trials, uint64_t seed) {
  if (!sc.partite() || !h.partite) throw std::invalid_argument("uniform convergence check runs in the partite setting");
  ProbTemplate aux = sc.aux();
  std::vector<Hypothesis> members;
  std::vector<double> totals;
  for (uint64_t i = 0; i < h.count; ++i) {
    members.push_back(h.member(i));
    totals.push_back(total_loss_d(sc.mu, aux, sc.F, l, members.back()));
  }
  double inf = *std::min_element(totals.begin(), totals.end());
  UcReport rep;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<uint64_t>(t));
    PSample s = labeled_sample_partite(sc, m, rng);
    SampleStats st = stats_partite(s.x, s.y);
    double sup = 0;
    for (size_t i = 0; i < members.size(); ++i)
      sup = std::max(sup, std::abs(empirical_loss(st, l, members[i]) - totals[i]));
    if (sup <= eps) ++hits;
    // an ε/2-representative sample makes every ERM ε-optimal
    if (sup <= eps / 2) {
      ++rep.erm_checked;
      uint64_t i = erm_index(h, st, l);
      if (totals[i] > inf + eps + 1e-12) ++rep.erm_violations;
    }
  }
  rep.representative = make_frequency(hits, trials);
  return rep;
}

double concentration_bound(double eps, int m, int k, bool partite, double sup_norm) {
  double K = partite ? k : static_cast<double>(k) * k;
  return 2.0 * std::exp(-eps * eps * m / (2.0 * K * sup_norm * sup_norm));
}

Frequency measure_deviation(const Scenario& sc, const LossFn& l, const Hypothesis& h, int m, double eps, int trials,
                            uint64_t seed) {
  double total = total_loss_d(sc.mu, sc.aux(), sc.F, l, h);
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<uint64_t>(t));
    double e;
    if (sc.partite()) {
      PSample s = labeled_sample_partite(sc, m, rng);
      e = empirical_loss(stats_partite(s.x, s.y), l, h);
    } else {
      NSample s = labeled_sample(sc, m, rng);
      e = empirical_loss(stats_of(s, sc.k(), sc.F.L), l, h);
    }
    if (std::abs(e - total) >= eps) ++hits;
  }
  return make_frequency(hits, trials);
}

double derand_xi(double eps, double delta) {
  return std::min(1.0 / std::ceil(2.0 / eps), 1.0 / std::ceil(2.0 / delta));
}

uint64_t derand_sample_size(const SampleSize& m_rand, const std::function<uint64_t(int)>& R, int K, double sup_norm,
                            double eps, double delta) {
  double xi = derand_xi(eps, delta);
  double M = std::ceil(m_rand(xi, xi));
  double r = static_cast<double>(R(static_cast<int>(M)));
  double tail = std::ceil(2.0 * K * sup_norm * sup_norm / (xi * xi) * std::log(2.0 * r / xi));
  return static_cast<uint64_t>(M + tail);
}

uint64_t derand_sample_size_simple(const SampleSize& m_rand, const std::function<uint64_t(int)>& R, int K,
                                   double sup_norm, double eps) {
  double q = std::ceil(2.0 / eps);
  double M = std::ceil(m_rand(1.0 / q, 1.0 / q));
  double r = static_cast<double>(R(static_cast<int>(M)));
  return static_cast<uint64_t>(M + std::ceil(2.0 * K * sup_norm * sup_norm * q * q * std::log(2.0 * q * r)));
}

DerandSplit derand_split(int m, const SampleSize& m_rand, const std::function<uint64_t(int)>& R, int K,
                         double sup_norm) {
  DerandSplit out;
  for (int s = 1; s <= 1000000; ++s) {
    double u = 1.0 / (2.0 * s);
    double m1 = std::ceil(m_rand(u, u));
    double r = static_cast<double>(R(static_cast<int>(m1)));
    double m2 = std::ceil(8.0 * K * sup_norm * sup_norm * s * s * std::log(4.0 * s * r));
    if (m1 + m2 > m) break;
    out.s = s;
    out.m1 = static_cast<int>(m1);
  }
  out.m2 = out.s == 0 ? 0 : m - out.m1;
  return out;
}

NLearner derandomize(const NLearner& a, const SampleSize& m_rand, const LossFn& l, double sup_norm,
                     const Hypothesis& fallback) {
  NLearner d;
  d.name = "derand(" + a.name + ")";
  int k = l.k;
  int K = k * k;
  d.run = [a, m_rand, l, sup_norm, fallback, k, K](const NSample& s, uint64_t) {
    return derand_run<NSample>(s, s.x.m(), k, a.run, a.R, m_rand, l, sup_norm, K, fallback);
  };
  return d;
}

PLearner derandomize(const PLearner& a, const SampleSize& m_rand, const LossFn& l, double sup_norm,
                     const Hypothesis& fallback) {
  PLearner d;
  d.name = "derand(" + a.name + ")";
  int k = l.k;
  d.run = [a, m_rand, l, sup_norm, fallback, k](const PSample& s, uint64_t) {
    const auto& sizes = s.x.layout.sizes();
    int m = *std::min_element(sizes.begin(), sizes.end());
    return derand_run<PSample>(s, m, k, a.run, a.R, m_rand, l, sup_norm, k, fallback);
  };
  return d;
}

double highorder_delta_prime(double delta) { return 1.0 - std::sqrt(1.0 - delta); }

double highorder_m_pac(double eps, double delta, double sup_norm) {
  double B = std::max(sup_norm, 1.0);
  double dp = highorder_delta_prime(delta);
  double lg = std::log(2.0 * B / (dp * eps));
  double mp = std::sqrt(std::log(2.0 * B / (eps * dp)) / std::log(2.0 * B / (2.0 * B - eps)));
  return 2.0 * B / eps * (mp + lg + std::sqrt(2.0 * mp * lg + lg * lg));
}

InfVcn infvcn_learner(int n_max) {
  FamilySpec f = highorder_family(n_max);
  LossFn l = zero_one_loss(f.cls.L, f.cls.k, true);
  return {f.cls, erm_partite(f.cls, l), [](double eps, double delta) { return highorder_m_pac(eps, delta, 1.0); }};
}

namespace {

template <class Learner, class Draw>
Frequency pac_success(const Learner& a, const Scenario& sc, const LossFn& l, int m, double eps, int trials,
                      uint64_t seed, double baseline, Draw draw) {
  ProbTemplate aux = sc.aux();
  uint64_t r = a.R(m);
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<uint64_t>(t));
    auto s = draw(rng);
    uint64_t b = r <= 1 ? 0 : std::uniform_int_distribution<uint64_t>(0, r - 1)(rng);
    Hypothesis h = a.run(s, b);
    if (total_loss_d(sc.mu, aux, sc.F, l, h) <= baseline + eps + 1e-12) ++hits;
  }
  return make_frequency(hits, trials);
}

}  // namespace

Frequency estimate_pac_success(const NLearner& a, const Scenario& sc, const LossFn& l, int m, double eps, int trials,
                               uint64_t seed, double baseline) {
  return pac_success(a, sc, l, m, eps, trials, seed, baseline, [&](Rng& rng) { return labeled_sample(sc, m, rng); });
}

Frequency estimate_pac_success(const PLearner& a, const Scenario& sc, const LossFn& l, int m, double eps, int trials,
                               uint64_t seed, double baseline) {
  return pac_success(a, sc, l, m, eps, trials, seed, baseline,
                     [&](Rng& rng) { return labeled_sample_partite(sc, m, rng); });
}

NSample restrict_sample(const NSample& s, int k, int first, int len) {
  int m = s.x.m();
  if (first < 0 || len < 0 || first + len > m) throw std::out_of_range("restriction exceeds the sample");
  Injection alpha(len);
  for (int i = 0; i < len; ++i) alpha[i] = first + i;
  NSample out;
  out.x = pullback_config(s.x, alpha);
  out.y.assign(falling(len, k), 0);
  int beta[kMaxArity];
  for (const auto& inj : enumerate_injections(k, len)) {
    for (int i = 0; i < k; ++i) beta[i] = first + inj[i];
    out.y[injection_rank(inj.data(), k, len)] = s.y[injection_rank(beta, k, m)];
  }
  return out;
}

PSample restrict_sample(const PSample& s, int first, int len) {
  const auto& sizes = s.x.layout.sizes();
  int k = s.x.k();
  for (int v : sizes)
    if (first < 0 || len < 0 || first + len > v) throw std::out_of_range("restriction exceeds the sample");
  PSample out;
  out.x = PConfig(k, std::vector<int>(k, len));
  size_t idx = 0;
  int vals[kMaxArity];
  for (unsigned mask : canonical_masks(k)) {
    int w = popcount(mask);
    int cur[kMaxArity] = {0};
    if (len == 0) continue;
    while (true) {
      for (int i = 0; i < w; ++i) vals[i] = first + cur[i];
      out.x.c[idx++] = s.x.c[s.x.layout.index(mask, vals)];
      int i = w - 1;
      while (i >= 0 && ++cur[i] == len) cur[i--] = 0;
      if (i < 0) break;
    }
  }
  std::vector<int> small(k, len);
  uint64_t total = sat_pow(static_cast<uint64_t>(len), static_cast<uint64_t>(k));
  out.y.assign(total, 0);
  int a[kMaxArity];
  for (uint64_t r = 0; r < total; ++r) {
    tuple_unrank(r, small, a);
    for (int i = 0; i < k; ++i) a[i] += first;
    out.y[r] = s.y[tuple_rank(a, sizes)];
  }
  return out;
}

}  // namespace harity

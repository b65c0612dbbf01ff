#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "harity/hypotheses.hpp"
#include "harity/losses.hpp"
#include "harity/sampler.hpp"

namespace harity {

// Randomized learners take a randomness index b ∈ [R(m)]; R ≡ 1 means deterministic.
struct NLearner {
  std::string name;
  std::function<Hypothesis(const NSample&, uint64_t)> run;
  std::function<uint64_t(int)> R = [](int) { return uint64_t{1}; };
};

struct PLearner {
  std::string name;
  std::function<Hypothesis(const PSample&, uint64_t)> run;
  std::function<uint64_t(int)> R = [](int) { return uint64_t{1}; };
};

// Sample-size function (ε, δ) ↦ m.
using SampleSize = std::function<double(double, double)>;

// Exact empirical-risk minimizer over the summarized sample; the class's closed-form oracle is used
// for the 0/1 loss, brute force over members otherwise.  Ties go to the smallest index.
uint64_t erm_index(const HypothesisClass& h, const SampleStats& s, const LossFn& l);
NLearner erm_nonpartite(const HypothesisClass& h, const LossFn& l);
PLearner erm_partite(const HypothesisClass& h, const LossFn& l);

double uc_constant_c();
double m_uc(int vcn, int k, int L, double sup_norm, double eps, double delta);
// The rounded-coefficient upper form (13.918, 1.582, 27.836, 0.694).
double m_uc_upper(int vcn, int k, int L, double sup_norm, double eps, double delta);

struct Frequency {
  double freq = 0;
  double se = 0;  // binomial standard error
  int trials = 0;
};
Frequency make_frequency(int hits, int trials);

struct UcReport {
  Frequency representative;
  int erm_checked = 0;   // trials that were ε/2-representative
  int erm_violations = 0;  // of those, ERM total loss above inf + ε
};

// Partite scenario; fraction of samples with sup_H |L_emp(H) − L(H)| ≤ ε.
UcReport check_uniform_convergence(const Scenario& sc, const HypothesisClass& h, const LossFn& l, int m, double eps,
                                   int trials, uint64_t seed);

// 2·exp(−ε²m/(2K‖ℓ‖²)), K = k² (non-partite) or k (partite).
double concentration_bound(double eps, int m, int k, bool partite, double sup_norm);
// P[|L_emp(H) − L(H)| ≥ ε] for a fixed H.
Frequency measure_deviation(const Scenario& sc, const LossFn& l, const Hypothesis& h, int m, double eps, int trials,
                            uint64_t seed);

// ξ(ε,δ) = min{1/⌈2/ε⌉, 1/⌈2/δ⌉}
double derand_xi(double eps, double delta);
uint64_t derand_sample_size(const SampleSize& m_rand, const std::function<uint64_t(int)>& R, int K, double sup_norm,
                            double eps, double delta);
uint64_t derand_sample_size_simple(const SampleSize& m_rand, const std::function<uint64_t(int)>& R, int K,
                                   double sup_norm, double eps);

struct DerandSplit {
  int s = 0;  // 0 encodes s(m) = −∞
  int m1 = 0;
  int m2 = 0;
};
DerandSplit derand_split(int m, const SampleSize& m_rand, const std::function<uint64_t(int)>& R, int K,
                         double sup_norm);

constexpr uint64_t kMaxDerandR = uint64_t{1} << 20;

NLearner derandomize(const NLearner& a, const SampleSize& m_rand, const LossFn& l, double sup_norm,
                     const Hypothesis& fallback);
PLearner derandomize(const PLearner& a, const SampleSize& m_rand, const LossFn& l, double sup_norm,
                     const Hypothesis& fallback);

// Higher-order class: δ′(δ) = 1 − √(1−δ) and the closed-form m^PAC.
double highorder_delta_prime(double delta);
double highorder_m_pac(double eps, double delta, double sup_norm);

// The higher-order class at truncation n with its ERM and closed-form sample size.
struct InfVcn {
  HypothesisClass cls;
  PLearner learner;
  SampleSize m_pac;
};
InfVcn infvcn_learner(int n_max);

// Fraction of trials with L(A(sample, b)) ≤ baseline + ε; b uniform in [R(m)].
Frequency estimate_pac_success(const NLearner& a, const Scenario& sc, const LossFn& l, int m, double eps, int trials,
                               uint64_t seed, double baseline = 0.0);
Frequency estimate_pac_success(const PLearner& a, const Scenario& sc, const LossFn& l, int m, double eps, int trials,
                               uint64_t seed, double baseline = 0.0);

// Restriction of a sample to the vertices first..first+len−1.
NSample restrict_sample(const NSample& s, int k, int first, int len);
PSample restrict_sample(const PSample& s, int first, int len);

}  // namespace harity

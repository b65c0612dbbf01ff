#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harity/dims.hpp"
#include "harity/families.hpp"
#include "harity/learners.hpp"
#include "harity/losses.hpp"
#include "harity/sampler.hpp"

namespace harity {

// ---- no free lunch ----

// Shattered set X′ = {0,…,d−1} under the uniform measure; F_B(a) = f_{1[a∈B]}(a) with B a bitmask.
struct ShatteredScenario {
  int d = 0;
  int L = 2;
  std::vector<int> f0;
  std::vector<int> f1;

  static ShatteredScenario binary(int d);  // f0 ≡ 0, f1 ≡ 1
  int F(uint64_t B, int a) const { return (B >> a & 1u) ? f1[a] : f0[a]; }
  std::vector<int> table(uint64_t B) const;
  void validate() const;
};

// Unary loss ℓ(a, y, y′) on X′ with its separation s(ℓ) and a bound B_ℓ ≥ ‖ℓ‖∞.
struct UnaryLoss {
  std::string name;
  std::function<double(int, int, int)> value;
  double separation = 1;
  double bound = 1;
};
UnaryLoss unary_zero_one();

// Any learner may output any function X′ → [L], improper ones included.
struct UnaryLearner {
  std::string name;
  std::function<std::vector<int>(const std::vector<int>& xs, const std::vector<int>& ys)> run;
};

// ERM over {F_B}: copies observed labels and plays f0 elsewhere.
UnaryLearner unary_erm(const ShatteredScenario& sc);
// Ignores the data.
UnaryLearner unary_constant(const ShatteredScenario& sc, int side);
// Copies observed labels and fills the rest from `fill`.
UnaryLearner unary_memorize(const ShatteredScenario& sc, std::vector<int> fill, std::string name);

double unary_total_loss(const ShatteredScenario& sc, const UnaryLoss& l, uint64_t B, const std::vector<int>& h);

// (1/(B−ε))·((s/2)(1−m/d) − ε); may be ≤ 0.
double nfl_lower_bound(double eps, int m, int d, double s, double B);

// P[L(A(x, F_B(x))) > ε] over x uniform in (X′)^m.
Frequency nfl_failure(const UnaryLearner& a, const ShatteredScenario& sc, const UnaryLoss& l, uint64_t B, int m,
                      double eps, int trials, Rng& rng);

struct NflResult {
  uint64_t B = 0;
  Frequency failure;
  int candidates = 0;
};
// Exhaustive over B for d ≤ 12; otherwise 64 uniform B plus ∅ and X′.
NflResult nfl_worst_F(const UnaryLearner& a, const ShatteredScenario& sc, const UnaryLoss& l, int m, double eps,
                      int trials, Rng& rng);

// ---- VCN_k ⇒ non-learnability ----

// min{ℓ, 1}
LossFn capped_loss(const LossFn& l);

// A slice with Nat ≥ d and the measure built from it: Dirac at the fixed coordinates z⁰ (and at a
// chosen z^C elsewhere), uniform on the shattered set X̂ ⊆ Ω_{{a}}.
struct VcnScenario {
  HypothesisClass cls;
  LossFn loss;                           // capped
  int a = 0;                             // free part, 0-based
  Local base;                            // z⁰ and z^C; the {a} slot is overwritten per point
  std::vector<ShatterWitness> shattered;
  ShatteredScenario unary;
  UnaryLoss unary_loss;                  // ℓ′(w, u, u′) = ℓ(ŵ, u, u′)
  ProbTemplate mu;

  Local lift_point(int j) const;
  // (ŵ, û) over ([m],…,[m]).
  PSample lift_sample(const std::vector<int>& xs, const std::vector<int>& ys) const;
  // H(z⁰, ·)′ on X̂.
  std::vector<int> project(const Hypothesis& g) const;
  // Smallest member index whose slice restricts to F̂_B.
  uint64_t member_for(uint64_t B) const;
  Scenario scenario(uint64_t B) const;
  UnaryLearner wrap(const PLearner& a) const;
};

VcnScenario vcn_nonlearn_scenario(const HypothesisClass& h, int d, const LossFn& ell);

// ---- Ramsey-type subset ----

// n for n ≤ 2, (n)₃/2 + 3 otherwise.
uint64_t ramsey_rho(int n);

// f1 injective on [ρ]; f2 symmetric ρ×ρ (diagonal ignored).  Returns U of size n with, for every
// pair, f2({u,v}) ∉ f1(U) or f2({u,v}) ∈ {f1(u), f1(v)}.  Below ρ(n) points a miss is possible and
// returns nullopt; at or above it a miss throws.
std::optional<std::vector<int>> find_clean_subset(const std::vector<int>& f1, const std::vector<int>& f2, int n);

// ---- partition-family adversary ----

// Ingredients over a shattered set V′ seen from z*.  Labels of F are aligned with V′; classes are
// the partition ids, ⊥ is −1 (for χ) or 0 (for g).
struct PartitionAdversary {
  PartitionData pf;
  int z = 0;
  std::vector<int> V;

  int chi1(int x) const { return x == z ? -1 : pf.at(z, x); }
  int chi2(int x1, int x2) const { return x1 == x2 ? -1 : pf.at(x1, x2); }
  int g(int x1, int x2) const;  // 1 or 2 (first match), 0 for ⊥
  uint64_t B_F(const std::vector<int>& F) const;
  int F_at(const std::vector<int>& F, int x) const;

  std::vector<int> x_b(const std::vector<int>& x, const std::vector<int>& b) const;
  // Entries over binom([m], 2) in lex order.
  std::vector<int> y_bx(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& b) const;
  std::vector<int> G_star(uint64_t B, const std::vector<int>& pts) const;
  // (ℓ((z*,x), ȳ, ȳ′) + ℓ((x,z*), ȳ, ȳ′))/4 with ȳ the constant pattern.
  double loss_prime(const LossFn& l, int x, int y, int y2) const;
};

// Throws unless z* ∉ V′ and χ₁ is injective on V′.
PartitionAdversary make_partition_adversary(const PartitionData& pf, int z, std::vector<int> V);
// One vertex per class seen from z*, then the Ramsey search for n of them.
std::optional<std::vector<int>> partition_clean_set(const PartitionData& pf, int z, int n);
// Exhaustive over F ∈ {0,1}^{V′}, x ∈ (V′)^m, b ∈ {0,1}^m: count of F*(x)^{b,x} ≠ (G_{B_F})*(x^b).
uint64_t pf_identity_mismatches(const PartitionAdversary& adv, int m);

}  // namespace harity

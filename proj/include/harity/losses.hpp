#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harity/hypotheses.hpp"
#include "harity/templates.hpp"

namespace harity {

// ℓ(x, y, y′).  Non-partite arguments are packed patterns in Λ^{S_k}; partite ones are plain labels.
struct LossFn {
  std::string name;
  int k = 1;
  bool partite = false;
  int L = 2;  // base label count
  std::function<Rational(const Local&, int, int)> exact;
  std::function<double(const Local&, int, int)> value;

  int arg_count() const { return partite ? L : pattern_count(L, k); }
};

struct LossFlags {
  Rational sup_norm = 0;
  Rational separation = 0;  // s(ℓ): infimum over y ≠ y′
  bool separated = false;
  bool symmetric = false;
};

LossFn zero_one_loss(int L, int k, bool partite);
// Generic rule; value() is derived from exact().
LossFn make_loss(std::string name, int k, bool partite, int L, std::function<Rational(const Local&, int, int)> rule);
// Exhaustive over the local points of t and all label arguments.
LossFlags loss_flags(const LossFn& l, const Template& t);

// ℓ(H, x, y) with an optional locality decomposition ℓ(H,x,y) = ℓ_r(x, H*(x), y) + r(H).
struct AgnosticLossFn {
  std::string name;
  int k = 1;
  bool partite = false;
  int L = 2;
  std::function<Rational(const Hypothesis&, const Local&, int)> exact;
  std::optional<LossFn> local_part;
  std::function<Rational(const Hypothesis&)> regularizer;
};

AgnosticLossFn wrap_agnostic(const LossFn& l);
// Checks the decomposition on every (member, local point, label) triple.
bool check_locality(const AgnosticLossFn& l, const HypothesisClass& h);
Rational agnostic_sup_norm(const AgnosticLossFn& l, const HypothesisClass& h);
bool agnostic_symmetric(const AgnosticLossFn& l, const HypothesisClass& h);

// H*_k(z) in the loss's argument space.
int predict(const Hypothesis& h, const Local& z);

// Exact expectations over μ^k (or (μ⊗μ′)^k when F lives on the product template).
Rational total_loss(const ProbTemplate& mu, const Hypothesis& f, const LossFn& l, const Hypothesis& h);
Rational total_loss(const ProbTemplate& mu, const ProbTemplate& mu2, const Hypothesis& f, const LossFn& l,
                    const Hypothesis& h);
Rational total_loss(const ProbTemplate& mu, const ProbTemplate& mu2, const Hypothesis& f, const AgnosticLossFn& l,
                    const Hypothesis& h);
double total_loss_d(const ProbTemplate& mu, const ProbTemplate& mu2, const Hypothesis& f, const LossFn& l,
                    const Hypothesis& h);

// Order choice: one injection α_U with image U per U ∈ binom([m],k), in lex order of U.
struct OrderChoice {
  int m = 0;
  int k = 0;
  std::vector<Injection> alpha;

  static OrderChoice canonical(int m, int k);
  bool valid() const;
};

// Empirical statistics: (α*(x), y_α) over α ∈ [m]^k, or (α_U*(x), b_α(y)_U) over U.
SampleStats stats_partite(const PConfig& x, const std::vector<int>& y);
SampleStats stats_nonpartite(const Config& x, const std::vector<int>& y, int k, int L, const OrderChoice& oc);

double empirical_loss(const SampleStats& s, const LossFn& l, const Hypothesis& h);
Rational empirical_loss_exact(const SampleStats& s, const LossFn& l, const Hypothesis& h);
double empirical_loss(const SampleStats& s, const AgnosticLossFn& l, const Hypothesis& h);

Rational empirical_loss_partite(const PConfig& x, const std::vector<int>& y, const LossFn& l, const Hypothesis& h);
Rational empirical_loss_nonpartite(const Config& x, const std::vector<int>& y, const LossFn& l, const Hypothesis& h,
                                   const OrderChoice& oc);

// Witness of flexibility, kept as the induced discrete law of G*_k(x,·) rather than (Σ, ν, G).
struct FlexibilityWitness {
  int k = 1;
  bool partite = false;
  int L = 2;
  std::function<std::vector<Rational>(const Local&)> pattern_law;  // over the loss argument space
  std::function<Rational(const Local&)> avg_loss;                   // ℓ^{Σ,ν,G}(x)
  std::function<uint64_t(int m)> R_N;
  std::function<std::vector<int>(int m, uint64_t b)> N;             // label tensor
};

FlexibilityWitness flexibility_witness_01(int L, int k, bool partite);
// The averaged loss E_g ℓ(x, y, g) does not depend on y and equals avg_loss(x).
bool check_flexibility(const FlexibilityWitness& w, const LossFn& l, const Template& t);
bool check_flexibility(const FlexibilityWitness& w, const AgnosticLossFn& l, const HypothesisClass& h);
// Exact law of N(·,b) under uniform b, and the law of G*_m(x,·) assembled from the per-U
// pattern laws (independent across U, or across tuples in the partite case).
std::map<std::vector<int>, Rational> n_law(const FlexibilityWitness& w, int m);
std::map<std::vector<int>, Rational> g_star_law(const FlexibilityWitness& w, const Config& x);
std::map<std::vector<int>, Rational> g_star_law(const FlexibilityWitness& w, const PConfig& x);

struct NeutralSymbolInfo {
  int bottom = 0;
  std::function<Rational(const Local&)> bottom_cost;
};

// Label space grows to Λ ∪ {⊥} with ⊥ = L.
std::pair<AgnosticLossFn, NeutralSymbolInfo> extend_with_neutral(const AgnosticLossFn& l, const FlexibilityWitness& w);
std::pair<LossFn, NeutralSymbolInfo> extend_with_neutral(const LossFn& l, const FlexibilityWitness& w);
bool contains_bottom(int y, const NeutralSymbolInfo& n, int k, bool partite);
bool check_neutral(const AgnosticLossFn& l, const NeutralSymbolInfo& n, const HypothesisClass& h);
// Pattern re-encoding between label bases.
int pattern_rebase(int pattern, int from_L, int to_L, int k);

// Argmin of the conditional expected loss with canonical tie-breaking.  Non-partite predictors
// must be consistent on each S_k-orbit; when no optimal pattern is, there is none.
std::optional<Hypothesis> bayes_predictor(const ProbTemplate& mu, const ProbTemplate& mu2, const Hypothesis& f,
                                          const LossFn& l);

}  // namespace harity

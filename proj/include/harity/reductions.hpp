#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "harity/learners.hpp"
#include "harity/losses.hpp"
#include "harity/sampler.hpp"

namespace harity {

using Law = std::map<std::vector<int>, Rational>;

// ---- partization ----

// φ_m: a point over [m] becomes a k-partite point over ([q],…,[q]), q = ⌊m/k⌋, with
// φ_m(x)_f = x_{{(i−1)q + f(i) : i ∈ dom f}}.
PConfig phi_config(const Config& x, int k);
// Φ_m: non-partite labels over ([m])_k become partite pattern labels over [q]^k,
// (Φ_m(y)_α)_τ = y_{β_α∘τ} with β_α(i) = (i−1)q + α(i).
std::vector<int> Phi_labels(const std::vector<int>& y, int m, int k, int L);

// Exact laws of μ^m on configurations over [m] and of a partite μ on ([m_1],…,[m_k]).
Law config_law(const ProbTemplate& mu, int m);
Law pconfig_law(const ProbTemplate& mu, const std::vector<int>& sizes);
// Law of φ_m(x) under x ∼ μ^m.
Law phi_pushforward_law(const ProbTemplate& mu, int m);

// Φ_m(F*_m(x)) = (F^kpart)*_q(φ_m(x)) for every configuration over the template.
bool check_partization_square(const Hypothesis& f, const Template& t, int m);
// φ_k∘ι_kpart = id on every local point of the partized template.
bool check_phi_iota(const Template& t);

// Non-partite learner from a partite learner for the partized class: run on (φ_m(x), Φ_m(y)) and
// read off the identity entry.  Needs m ≥ k; uses q = ⌊m/k⌋ vertices per part.
NLearner nonpartite_from_partite(const PLearner& a, int k, int base_L);

// ---- departization ----

// B^i_j: the j-th i-subset of [k] in lex order, as a mask.
const std::vector<unsigned>& k_subsets(int k, int i);
int k_subset_index(int k, unsigned mask);

// Discrete disintegration: η_i(w)(j) = ν_i(w, j)/μ̂_i(w) for ν_i(w, j) = binom(k,i)⁻¹·μ_{B^i_j}(w).
struct Disintegration {
  std::vector<std::vector<Rational>> mu_hat;                  // [i−1][w]
  std::vector<std::vector<std::vector<Rational>>> eta;        // [i−1][w][j]
  std::vector<std::vector<std::vector<Rational>>> nu;         // [i−1][w][j]
};
Disintegration disintegrate_finite(const ProbTemplate& partite_mu);

// (σ, U, U′) with U_C, U′_C ∈ binom([k], |C|) stored as lex indices over the layout of r(m,k).
struct DepartizationRandomness {
  Injection sigma;
  std::vector<int> U;
  std::vector<int> U2;
};

uint64_t departization_R(int m, int k);  // m!·∏ binom(k,i)^{2·binom(m,i)}, saturating
DepartizationRandomness decode_departization(uint64_t b, int m, int k);
DepartizationRandomness draw_departization(int m, int k, Rng& rng);
Injection unrank_permutation(uint64_t r, int m);
uint64_t rank_permutation(const Injection& p);

// σ_α ∈ S_k: the unique τ with σ⁻¹∘α∘τ increasing.
Injection sigma_alpha(const Injection& sigma_inv, const int* alpha, int k);

// x^{σ,U} over [m] from a partite point over ([m],…,[m]).
Config departize_point(const PConfig& x, const Injection& sigma, const std::vector<int>& U);
// y^{σ,U,U′}: entries of the partite pattern labels, or ⊥ = base_L off 𝒢(σ,U,U′).
std::vector<int> departize_labels(const std::vector<int>& y, int m, int k, int base_L,
                                  const DepartizationRandomness& r);
NSample departize_sample(const PSample& s, int base_L, const DepartizationRandomness& r);

double departization_p(int k);
Rational departization_p_exact(int k);

// Exact laws at tiny sizes; keys are (x coords, x′ coords, σ rank, U, U′, labels).  F must be a
// partite hypothesis on μ⊗μ′ with pattern labels in base base_L.
Law departization_law(const Scenario& sc, int m, int base_L);
Law discrete_equivalent_law(const Scenario& sc, int m, int base_L);

struct DecompositionReport {
  Rational lhs;       // total loss of H against the departized adversary
  Rational p;         // probability that the k-set is fully observed
  Rational C;         // E[ℓ_⊥ | not observed]
  Rational partite;   // L^kpart(H^kpart)
  bool holds() const { return lhs == (1 - p) * C + p * partite; }
};
// l_ext: the ⊥-extended non-partite loss in base base_L+1.
DecompositionReport loss_decomposition(const Scenario& sc, int base_L, const LossFn& l_ext,
                                       const NeutralSymbolInfo& n, const Hypothesis& H);

// Partite learner for H^kpart from a non-partite learner for H over labels Λ ∪ {⊥}.  Randomness
// index order: b_A least significant, then σ, U, U′.  When the total exceeds 64 bits the index
// seeds a draw of (σ, U, U′) instead.
PLearner departize_learner(const NLearner& a, int k, int base_L);

// Replaces every k-set touched by ⊥ with labels drawn from the flexibility witness.
NLearner neutral_symbol_learner(const NLearner& a, const FlexibilityWitness& w, int base_L);
std::vector<int> sample_g_star(const FlexibilityWitness& w, const Config& x, Rng& rng);

// Zeroes every coordinate of arity above k before running A, so the result ignores them.
NSample strip_dummy_sample(const NSample& s, int k);
NLearner strip_dummy(const NLearner& a, int k);

Hypothesis extend_codomain(const Hypothesis& h, int new_L);
HypothesisClass extend_codomain(const HypothesisClass& c, int new_L);
Hypothesis strip_codomain(const Hypothesis& h, int base_L);

// Sample-size transfers.
double delta_tilde(double eps, double delta, double sup_norm);
double delta_hat(double eps, double delta, double sup_norm, double p);
SampleSize departized_sample_size(const SampleSize& m_a, int k, double sup_norm);
SampleSize composed_sample_size(const SampleSize& m_a, int k, double sup_norm);
SampleSize neutral_sample_size(const SampleSize& m_a, double sup_norm);

}  // namespace harity

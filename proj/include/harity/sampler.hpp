#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "harity/hypotheses.hpp"
#include "harity/templates.hpp"

namespace harity {

// Adversary (μ, μ′, F).  Without μ′ the auxiliary template is trivial and F lives on Ω.
struct Scenario {
  ProbTemplate mu;
  std::optional<ProbTemplate> mu2;
  Hypothesis F;

  bool partite() const { return mu.tmpl().partite; }
  int k() const { return mu.tmpl().k; }
  // μ⊗μ′ (or μ); F's template.
  ProbTemplate joint() const;
  // Trivial μ′ of the right shape when none was given.
  ProbTemplate aux() const;
};

struct NSample {
  Config x;
  std::vector<int> y;  // indexed by injection_rank over ([m])_k
};

struct PSample {
  PConfig x;
  std::vector<int> y;  // indexed by tuple_rank over [m_1]×…×[m_k]
};

// One independent draw per coordinate (|A| ≤ k, or per f ∈ r_k).
Config sample_config(const ProbTemplate& mu, int m, Rng& rng);
PConfig sample_pconfig(const ProbTemplate& mu, const std::vector<int>& sizes, Rng& rng);

// (x, F*_m(x, x′)) with x′ hidden.
NSample labeled_sample(const Scenario& sc, int m, Rng& rng);
PSample labeled_sample_partite(const Scenario& sc, int m, Rng& rng);

// Visible coordinates of a joint point.
Config visible_part(const Config& joint, const Template& aux);
PConfig visible_part(const PConfig& joint, const Template& aux);

// Exact law of (x coordinates, labels); throws above 10^6 joint configurations.
using SampleLaw = std::map<std::pair<std::vector<int>, std::vector<int>>, Rational>;
SampleLaw exact_sample_law(const Scenario& sc, int m);

}  // namespace harity

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "harity/index.hpp"

namespace harity {

using Rational = boost::multiprecision::cpp_rational;
using Rng = std::mt19937_64;

// Independent stream per (seed, trial); identical inputs give identical draws.
Rng make_rng(uint64_t seed, uint64_t stream);
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

// Finite ground spaces.  Non-partite: one slot per arity i ≤ k (slot i−1), arities above k
// are singletons.  Partite: one slot per non-empty A ⊆ [k] (slot mask−1).
struct Template {
  bool partite = false;
  int k = 1;
  std::vector<int> n;

  static Template nonpartite(std::vector<int> sizes_by_arity);
  static Template partite_from(int k, std::vector<int> sizes_by_mask);

  int slots() const { return static_cast<int>(n.size()); }
  int slot(unsigned mask) const { return partite ? static_cast<int>(mask) - 1 : popcount(mask) - 1; }
  int size_at(unsigned mask) const { return n[slot(mask)]; }

  // Local points: configurations over [k] (or ([1],…,[1])), mixed radix in canonical mask order.
  uint64_t local_count() const;
  Local local_unrank(uint64_t r) const;
  uint64_t local_rank(const Local& z) const;
  bool contains(const Local& z) const;

  bool operator==(const Template&) const = default;
};

class ProbTemplate {
 public:
  ProbTemplate() = default;
  // Throws std::invalid_argument unless every vector is non-negative and sums to exactly 1.
  ProbTemplate(Template t, std::vector<std::vector<Rational>> weights);
  static ProbTemplate uniform(const Template& t);

  const Template& tmpl() const { return t_; }
  const std::vector<std::vector<Rational>>& weights() const { return w_; }
  const Rational& weight(int slot, int id) const { return w_[slot][id]; }
  double weight_d(int slot, int id) const { return wd_[slot][id]; }

  // μ^k of a single local point (product over coordinates).
  Rational local_mass(const Local& z) const;
  double local_mass_d(const Local& z) const;
  int draw(int slot, Rng& rng) const;

  bool operator==(const ProbTemplate& o) const { return t_ == o.t_ && w_ == o.w_; }

 private:
  Template t_;
  std::vector<std::vector<Rational>> w_;
  std::vector<std::vector<double>> wd_;
  std::vector<std::vector<double>> cdf_;
};

// Ω⊗Ω′: point ids are joined as a·n′ + b.
inline int join_point(int a, int b, int nb) { return a * nb + b; }
inline std::pair<int, int> split_point(int id, int nb) { return {id / nb, id % nb}; }

Template product(const Template& a, const Template& b);
ProbTemplate product(const ProbTemplate& a, const ProbTemplate& b);
Local join_local(const Local& a, const Local& b, const Template& tb);
std::pair<Local, Local> split_local(const Local& z, const Template& tb);

// Ω^kpart_A := Ω_{|A|}, same for weights.
Template partize_template(const Template& t, int k);
ProbTemplate partize_template(const ProbTemplate& mu, int k);

nlohmann::json to_json(const ProbTemplate& mu);
ProbTemplate prob_template_from_json(const nlohmann::json& j);

}  // namespace harity

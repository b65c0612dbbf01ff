#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harity/index.hpp"
#include "harity/templates.hpp"

namespace harity {

// A k-ary (or k-partite) hypothesis: a total function on local points.  For partized
// hypotheses the label is a packed pattern in Λ^{S_k}.
struct Hypothesis {
  int k = 1;
  bool partite = false;
  int L = 2;
  int rank = 1;  // declared
  std::string tag;
  std::function<int(const Local&)> eval;

  int operator()(const Local& z) const { return eval(z); }
};

Hypothesis constant_hypothesis(int k, bool partite, int L, int label);
// Explicit table over t.local_rank order.
Hypothesis table_hypothesis(const Template& t, int L, std::vector<int> table, std::string tag = "table");
std::vector<int> tabulate(const Hypothesis& h, const Template& t);
bool pointwise_equal(const Hypothesis& a, const Hypothesis& b, const Template& t);

// F*_k(z) as a pattern: entry at τ ∈ S_k is F(τ*(z)).
int star_pattern(const Hypothesis& f, const Local& z);
// F*_V(x) for V = [m]: non-partite tensors are indexed by injection_rank over ([m])_k,
// partite tensors by tuple_rank over [m_1]×…×[m_k].
std::vector<int> star(const Hypothesis& f, const Config& x);
std::vector<int> star(const Hypothesis& f, const PConfig& x);

// Smallest r such that F ignores every coordinate of arity (or |dom f|) above r.
int rank_of(const Hypothesis& f, const Template& t);

// F^kpart(z) := F*_k(ι_kpart(z)); ι_kpart is the identity on Local storage.
Hypothesis partize_hypothesis(const Hypothesis& f);
// Inverse through φ_k: the identity entry of the pattern.
Hypothesis departize_hypothesis(const Hypothesis& fp, int base_L);

// Observed (local point, label) counts of a sample; ERM oracles and empirical losses work on this.
struct SampleStats {
  std::map<std::pair<Local, int>, uint64_t> counts;
  uint64_t total = 0;
  void add(const Local& z, int y, uint64_t c = 1) {
    counts[{z, y}] += c;
    total += c;
  }
};

// Explicit member list or a structured family with an index-addressable membership and an
// optional closed-form ERM (valid for the 0/1 loss).
struct HypothesisClass {
  std::string name;
  Template tmpl;
  int k = 1;
  bool partite = false;
  int L = 2;
  uint64_t count = 0;
  std::function<Hypothesis(uint64_t)> member;
  std::function<uint64_t(const SampleStats&)> erm01;  // optional
  std::function<bool(const Hypothesis&)> contains;    // optional

  Hypothesis operator[](uint64_t i) const { return member(i); }
};

// Duplicate-free under pointwise equality (full-domain enumeration).
HypothesisClass explicit_class(std::string name, const Template& t, std::vector<Hypothesis> hs);
// Elementwise; index i of the result is the partization of member i.
HypothesisClass partize_class(const HypothesisClass& h);

nlohmann::json hypothesis_to_json(const Hypothesis& h, const Template& t);

}  // namespace harity

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harity/hypotheses.hpp"

namespace harity {

// Total maps [domain] → [L], kept duplicate-free.
struct FunctionFamily {
  int domain = 0;
  int L = 2;
  std::vector<std::vector<int>> functions;

  void add(std::vector<int> f);
  void dedup();
  FunctionFamily restrict_to(const std::vector<int>& points) const;
};

// A dimension that may have hit the search cap; at_cap means "≥ value".
struct DimResult {
  int value = 0;
  bool at_cap = false;

  std::string str() const { return at_cap ? ">=" + std::to_string(value) : std::to_string(value); }
  bool operator==(const DimResult&) const = default;
};

constexpr int kDefaultDimCap = 6;
constexpr int kDefaultDomainCap = 64;

// Largest Natarajan-shattered set (witness pairs taken from the values realized at each point).
DimResult natarajan_dim(const FunctionFamily& fam, int cap = kDefaultDimCap);
// A Natarajan-shattered set of exactly `size` points with its witness pair at each point.
struct ShatterWitness {
  int point;
  int c0;
  int c1;
};
std::optional<std::vector<ShatterWitness>> find_shattered(const FunctionFamily& fam, int size);

// Binary families only.
DimResult vc_dim(const FunctionFamily& fam, int cap = kDefaultDimCap);

// The class viewed as one family over all local points.
FunctionFamily full_family(const HypothesisClass& h);
// Slice families H(x): all coordinates not touching the free vertex (non-partite: vertex k;
// partite: every choice of free part) are fixed to x.
std::vector<FunctionFamily> slice_families(const HypothesisClass& h);
DimResult vcn_k(const HypothesisClass& h, int cap = kDefaultDimCap);

// τ^k(m) of a partite class: the largest number of distinct restrictions to an m-point subset of a
// slice domain.  When a slice domain has fewer than m points the whole domain is used.
uint64_t growth_function(const HypothesisClass& h, int m);

struct GrowthBound {
  uint64_t falling_form = 0;  // (m+1)_{min{VCN, m+1}} · binom(L,2)^VCN
  uint64_t power_form = 0;    // (m+1)^VCN · binom(L,2)^VCN
};
GrowthBound growth_bound(int vcn, int m, int L);

// |F_V| ≤ (|V|+1)^{Nat(F_V)} · binom(L,2)^{Nat(F_V)} for every V ⊆ domain.
bool ssp_holds(const FunctionFamily& fam);

}  // namespace harity

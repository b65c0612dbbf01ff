#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harity/dims.hpp"
#include "harity/hypotheses.hpp"

namespace harity {

// χ₂ for a partition family on vertices [n]: class id of each unordered pair, −1 on the diagonal.
struct PartitionData {
  int n = 0;
  int classes = 0;
  std::vector<int> chi2;  // n×n, symmetric

  int at(int u, int v) const { return chi2[static_cast<size_t>(u) * n + v]; }
};

struct FamilySpec {
  std::string name;
  HypothesisClass cls;
  int truncation = 0;
  int vcn = 0;               // at the declared truncation
  std::optional<int> vc;     // when recorded
  bool vcn_unbounded = false;  // the untruncated family has infinite VCN_k
  std::optional<PartitionData> partition;
};

// Graph families are 2-ary with Ω_1 = vertices and a singleton Ω_2.
FamilySpec matching_family(int n_pairs);
FamilySpec bounded_degree_family(int n, int d);
FamilySpec distance_family(int n);
FamilySpec max_family(int n);
FamilySpec partition_family(const PartitionData& p, std::string name = "partition");
PartitionData partition_from_json_file(const std::string& path);
// 2-partite, Ω_{1} singleton, Ω_{2} = Ω_{1,2} = [n]; H_V(x) = 1[x_{2} = x_{1,2} ∈ V].
FamilySpec highorder_family(int n);

// "matching:4", "bdeg:5:2", "dist:8", "maxg:8", "partition:<file>", "highorder:8".
FamilySpec family_by_name(const std::string& spec);

// Re-derives the declared dimension with the dims module.
bool verify_metadata(const FamilySpec& f);

}  // namespace harity

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace harity {

// Arity is kept small everywhere; local points hold one slot per non-empty A ⊆ [k].
constexpr int kMaxArity = 4;
constexpr int kMaxMasks = (1 << kMaxArity) - 1;

uint64_t binom(int n, int r);
uint64_t falling(int n, int r);  // (n)_r
uint64_t factorial(int n);

// Saturating helpers for randomness counts that may blow past 64 bits.
uint64_t sat_mul(uint64_t a, uint64_t b);
uint64_t sat_pow(uint64_t a, uint64_t e);

// Non-empty A ⊆ [m], 1-based and strictly increasing.
struct SubsetIndex {
  std::vector<int> members;

  std::string encode() const;  // "{1,3}"
  static SubsetIndex decode(const std::string& s);
  unsigned mask() const;  // only meaningful when members ⊆ [32]
  bool operator==(const SubsetIndex&) const = default;
};

// f ∈ r_k(V_1,…,V_k) as (part, vertex) pairs, both 1-based, sorted by part.
struct PartIndex {
  std::vector<std::pair<int, int>> assignment;

  std::string encode() const;  // "1↦2,3↦1"
  static PartIndex decode(const std::string& s);
  unsigned domain_mask() const;
  bool operator==(const PartIndex&) const = default;
};

// All non-empty A ⊆ [m] with |A| ≤ arity_cap, size-then-lex.
std::vector<SubsetIndex> enumerate_subsets(int m, int arity_cap);
std::vector<PartIndex> enumerate_part_indices(int m, int k);
std::vector<PartIndex> enumerate_part_indices(const std::vector<int>& sizes);

// Bitmasks of the non-empty subsets of [k] in size-then-lex order.
const std::vector<unsigned>& canonical_masks(int k);
int popcount(unsigned mask);
std::vector<int> mask_members(unsigned mask);  // 0-based, increasing

// Injections [k'] → [m] are image lists (0-based); permutations are the k' = m case.
using Injection = std::vector<int>;

std::vector<Injection> enumerate_injections(int k, int m);  // lex order
const std::vector<Injection>& permutations(int k);          // lex order, cached
uint64_t injection_rank(const int* a, int k, int m);
int permutation_rank(const Injection& p);
Injection compose(const Injection& a, const Injection& b);  // (a∘b)(i) = a(b(i))
Injection inverse(const Injection& p);
Injection identity(int k);
bool is_injection(const Injection& a, int m);

// Image of a mask of [k'] under an injection (bit j set iff j ∈ α(A)); requires m ≤ 32.
unsigned image_mask(const Injection& a, unsigned mask);

// A configuration point over [k] (or over ([1],…,[1]) in the partite setting): one
// coordinate per non-empty A ⊆ [k], addressed by bitmask.  Both settings share the
// layout, which makes ι_kpart the identity on storage.
struct Local {
  std::array<int, kMaxMasks> v{};

  int& operator[](unsigned mask) { return v[mask - 1]; }
  int operator[](unsigned mask) const { return v[mask - 1]; }
  auto operator<=>(const Local&) const = default;
  bool operator==(const Local&) const = default;
};

// Non-partite pullback on local points: α*(x)_A = x_{α(A)}, α: [k'] → [k].
Local pullback_local(const Injection& alpha, const Local& x);
// Covariant S_k action on partite local points: σ_*(x)_f = x_{f∘σ|σ^{-1}(dom f)}.
Local sigma_act_partite(const Injection& sigma, const Local& x);

// Coordinates of a point over [m] with |A| ≤ cap, stored in canonical order.
class SubsetLayout {
 public:
  SubsetLayout() = default;
  SubsetLayout(int m, int cap);

  int m() const { return m_; }
  int cap() const { return cap_; }
  size_t size() const { return size_; }
  // sorted: 0-based increasing members, s = |A| ≤ cap
  size_t index(const int* sorted, int s) const;
  SubsetIndex subset(size_t idx) const;

 private:
  int m_ = 0;
  int cap_ = 0;
  size_t size_ = 0;
  std::vector<size_t> offset_;  // offset_[s] = first index of size s
  std::vector<size_t> bin_;     // C(n, r) for n ≤ m, r ≤ cap+1
};

struct Config {
  SubsetLayout layout;
  std::vector<int> c;

  Config() = default;
  Config(int m, int cap) : layout(m, cap), c(layout.size(), 0) {}
  int m() const { return layout.m(); }
  int at(const std::vector<int>& sorted) const {
    return c[layout.index(sorted.data(), static_cast<int>(sorted.size()))];
  }
  bool operator==(const Config& o) const { return layout.m() == o.layout.m() && c == o.c; }
};

// α*(x) for α: [k'] → [m]; coordinates above the cap are the singleton point 0.
Local pullback(const Config& x, const int* alpha, int kk);
// Full pullback to another ambient size, α: [m'] → [m].
Config pullback_config(const Config& x, const Injection& alpha);

// Partite point over (V_1,…,V_k): one coordinate per f ∈ r_k(V_1,…,V_k).
class PartLayout {
 public:
  PartLayout() = default;
  PartLayout(int k, std::vector<int> sizes);

  int k() const { return k_; }
  const std::vector<int>& sizes() const { return sizes_; }
  size_t size() const { return size_; }
  // vals: the vertex of each part in dom(f), increasing part order (0-based)
  size_t index(unsigned mask, const int* vals) const;
  PartIndex part_index(size_t idx) const;

 private:
  int k_ = 0;
  std::vector<int> sizes_;
  std::array<size_t, kMaxMasks> offset_{};
  size_t size_ = 0;
};

struct PConfig {
  PartLayout layout;
  std::vector<int> c;

  PConfig() = default;
  PConfig(int k, std::vector<int> sizes) : layout(k, std::move(sizes)), c(layout.size(), 0) {}
  int k() const { return layout.k(); }
  bool operator==(const PConfig& o) const { return layout.sizes() == o.layout.sizes() && c == o.c; }
};

// α*(x)_f = x_{α|dom f} for α ∈ ∏ V_i.
Local pullback_partite(const PConfig& x, const int* alpha);

// Label tensors.  Non-partite: indexed by ([m])_k via injection_rank.  Partite:
// indexed by [m_1]×…×[m_k], mixed radix with part 1 most significant.
uint64_t tuple_rank(const int* a, const std::vector<int>& sizes);
void tuple_unrank(uint64_t r, const std::vector<int>& sizes, int* out);

// Patterns y ∈ Λ^{S_k} packed into one integer (entry for the r-th permutation in
// lex order is digit r, base L).
int pattern_count(int L, int k);  // L^{k!}
int pattern_get(int pattern, int L, int perm_rank);
int pattern_pack(const std::vector<int>& entries, int L);
std::vector<int> pattern_unpack(int pattern, int L, int k);
// τ*(y)_β = y_{τ∘β}
int pattern_pullback(int pattern, int L, int k, const Injection& tau);

}  // namespace harity

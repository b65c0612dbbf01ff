#include "harity/index.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <bit>

namespace harity {

namespace {

constexpr uint64_t kSat = std::numeric_limits<uint64_t>::max();
const std::string kMapsTo = "\xE2\x86\xA6";  // ↦

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

uint64_t binom(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
    if (acc > kSat) return kSat;
  }
  return static_cast<uint64_t>(acc);
}

uint64_t falling(int n, int r) {
  if (r < 0) return 0;
  if (r > n) return 0;
  uint64_t acc = 1;
  for (int i = 0; i < r; ++i) acc = sat_mul(acc, static_cast<uint64_t>(n - i));
  return acc;
}

uint64_t factorial(int n) { return falling(n, n); }

uint64_t sat_mul(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

uint64_t sat_pow(uint64_t a, uint64_t e) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) {
    r = sat_mul(r, a);
    if (r == kSat || r == 0) break;
  }
  return r;
}

std::string SubsetIndex::encode() const {
  std::string s = "{";
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(members[i]);
  }
  return s + "}";
}

SubsetIndex SubsetIndex::decode(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw std::invalid_argument("subset index must look like {1,3}: " + raw);
  SubsetIndex out;
  std::string body = s.substr(1, s.size() - 2);
  size_t start = 0;
  while (start <= body.size() && !body.empty()) {
    size_t comma = body.find(',', start);
    std::string tok = trim(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    int v = parse_int(tok);
    if (v < 1) throw std::invalid_argument("subset members are 1-based: " + raw);
    out.members.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.members.empty()) throw std::invalid_argument("empty subset index: " + raw);
  if (!std::is_sorted(out.members.begin(), out.members.end()) ||
      std::adjacent_find(out.members.begin(), out.members.end()) != out.members.end())
    throw std::invalid_argument("subset members must be strictly increasing: " + raw);
  return out;
}

unsigned SubsetIndex::mask() const {
  unsigned m = 0;
  for (int v : members) m |= 1u << (v - 1);
  return m;
}

std::string PartIndex::encode() const {
  std::string s;
  for (size_t i = 0; i < assignment.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(assignment[i].first) + kMapsTo + std::to_string(assignment[i].second);
  }
  return s;
}

PartIndex PartIndex::decode(const std::string& raw) {
  PartIndex out;
  size_t start = 0;
  std::string s = trim(raw);
  while (true) {
    size_t comma = s.find(',', start);
    std::string tok = trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    size_t arrow = tok.find(kMapsTo);
    size_t skip = kMapsTo.size();
    if (arrow == std::string::npos) {
      arrow = tok.find("->");
      skip = 2;
    }
    if (arrow == std::string::npos) throw std::invalid_argument("part index entries look like 1↦2: " + raw);
    int part = parse_int(trim(tok.substr(0, arrow)));
    int vert = parse_int(trim(tok.substr(arrow + skip)));
    if (part < 1 || vert < 1) throw std::invalid_argument("part indices are 1-based: " + raw);
    out.assignment.emplace_back(part, vert);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (size_t i = 1; i < out.assignment.size(); ++i)
    if (out.assignment[i].first <= out.assignment[i - 1].first)
      throw std::invalid_argument("parts must be strictly increasing: " + raw);
  return out;
}

unsigned PartIndex::domain_mask() const {
  unsigned m = 0;
  for (auto& [p, v] : assignment) m |= 1u << (p - 1);
  return m;
}

std::vector<SubsetIndex> enumerate_subsets(int m, int arity_cap) {
  std::vector<SubsetIndex> out;
  int top = std::min(m, arity_cap);
  for (int s = 1; s <= top; ++s) {
    std::vector<int> cur(s);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
      SubsetIndex si;
      for (int v : cur) si.members.push_back(v + 1);
      out.push_back(std::move(si));
      int i = s - 1;
      while (i >= 0 && cur[i] == m - s + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < s; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
  return out;
}

std::vector<PartIndex> enumerate_part_indices(int m, int k) {
  return enumerate_part_indices(std::vector<int>(k, m));
}

std::vector<PartIndex> enumerate_part_indices(const std::vector<int>& sizes) {
  int k = static_cast<int>(sizes.size());
  PartLayout lay(k, sizes);
  std::vector<PartIndex> out;
  out.reserve(lay.size());
  for (size_t i = 0; i < lay.size(); ++i) out.push_back(lay.part_index(i));
  return out;
}

const std::vector<unsigned>& canonical_masks(int k) {
  static std::array<std::vector<unsigned>, kMaxArity + 1> cache = [] {
    std::array<std::vector<unsigned>, kMaxArity + 1> c;
    for (int kk = 0; kk <= kMaxArity; ++kk)
      for (auto& s : enumerate_subsets(kk, kk)) c[kk].push_back(s.mask());
    return c;
  }();
  if (k < 0 || k > kMaxArity) throw std::out_of_range("arity out of range");
  return cache[k];
}

int popcount(unsigned mask) { return std::popcount(mask); }

std::vector<int> mask_members(unsigned mask) {
  std::vector<int> out;
  for (int i = 0; mask >> i; ++i)
    if (mask >> i & 1u) out.push_back(i);
  return out;
}

std::vector<Injection> enumerate_injections(int k, int m) {
  std::vector<Injection> out;
  if (k > m) return out;
  Injection cur(k);
  std::vector<char> used(m, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == k) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v < m; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      cur[pos] = v;
      self(self, pos + 1);
      used[v] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

const std::vector<Injection>& permutations(int k) {
  static std::mutex mu;
  static std::map<int, std::vector<Injection>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, enumerate_injections(k, k)).first;
  return it->second;
}

uint64_t injection_rank(const int* a, int k, int m) {
  uint64_t r = 0;
  if (m <= 64) {
    uint64_t used = 0;
    for (int i = 0; i < k; ++i) {
      uint64_t below = std::popcount(~used & ((uint64_t{1} << a[i]) - 1));
      r += below * falling(m - i - 1, k - i - 1);
      used |= uint64_t{1} << a[i];
    }
    return r;
  }
  for (int i = 0; i < k; ++i) {
    int below = a[i];
    for (int j = 0; j < i; ++j)
      if (a[j] < a[i]) --below;
    r += static_cast<uint64_t>(below) * falling(m - i - 1, k - i - 1);
  }
  return r;
}

int permutation_rank(const Injection& p) {
  int k = static_cast<int>(p.size());
  return static_cast<int>(injection_rank(p.data(), k, k));
}

Injection compose(const Injection& a, const Injection& b) {
  Injection out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

Injection inverse(const Injection& p) {
  Injection out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

Injection identity(int k) {
  Injection out(k);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

bool is_injection(const Injection& a, int m) {
  std::vector<char> seen(m, 0);
  for (int v : a) {
    if (v < 0 || v >= m || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

unsigned image_mask(const Injection& a, unsigned mask) {
  unsigned out = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (mask >> i & 1u) out |= 1u << a[i];
  return out;
}

Local pullback_local(const Injection& alpha, const Local& x) {
  Local out;
  int kk = static_cast<int>(alpha.size());
  for (unsigned mask : canonical_masks(kk)) out[mask] = x[image_mask(alpha, mask)];
  return out;
}

Local sigma_act_partite(const Injection& sigma, const Local& x) {
  Local out;
  int k = static_cast<int>(sigma.size());
  for (unsigned mask : canonical_masks(k)) {
    unsigned pre = 0;  // σ^{-1}(A)
    for (int i = 0; i < k; ++i)
      if (mask >> sigma[i] & 1u) pre |= 1u << i;
    out[mask] = x[pre];
  }
  return out;
}

SubsetLayout::SubsetLayout(int m, int cap) : m_(m), cap_(cap) {
  int top = std::min(m, cap);
  offset_.assign(cap + 2, 0);
  size_t acc = 0;
  for (int s = 1; s <= cap + 1; ++s) {
    offset_[s] = acc;
    if (s <= top) acc += binom(m, s);
  }
  size_ = acc;
  bin_.assign(static_cast<size_t>(m + 1) * (cap + 2), 0);
  for (int n = 0; n <= m; ++n)
    for (int r = 0; r <= cap + 1; ++r) bin_[n * (cap + 2) + r] = binom(n, r);
}

size_t SubsetLayout::index(const int* a, int s) const {
  // lex rank among s-subsets: Σ_i [C(m-p_i, r+1) - C(m-a_i, r+1)], r = s-1-i, p_i = a_{i-1}+1
  size_t r = 0;
  int prev = 0;
  for (int i = 0; i < s; ++i) {
    int rr = s - 1 - i;
    r += bin_[(m_ - prev) * (cap_ + 2) + rr + 1] - bin_[(m_ - a[i]) * (cap_ + 2) + rr + 1];
    prev = a[i] + 1;
  }
  return offset_[s] + r;
}

SubsetIndex SubsetLayout::subset(size_t idx) const {
  int s = 1;
  while (s < std::min(m_, cap_) && idx >= offset_[s + 1]) ++s;
  size_t r = idx - offset_[s];
  SubsetIndex out;
  int v = 0;
  for (int i = 0; i < s; ++i) {
    int rr = s - 1 - i;
    while (true) {
      size_t block = binom(m_ - v - 1, rr);
      if (r < block) break;
      r -= block;
      ++v;
    }
    out.members.push_back(v + 1);
    ++v;
  }
  return out;
}

Local pullback(const Config& x, const int* alpha, int kk) {
  Local out;
  int cap = x.layout.cap();
  int buf[kMaxArity];
  for (unsigned mask : canonical_masks(kk)) {
    int s = 0;
    for (int i = 0; i < kk; ++i)
      if (mask >> i & 1u) buf[s++] = alpha[i];
    if (s > cap) {
      out[mask] = 0;
      continue;
    }
    std::sort(buf, buf + s);
    out[mask] = x.c[x.layout.index(buf, s)];
  }
  return out;
}

Config pullback_config(const Config& x, const Injection& alpha) {
  int mm = static_cast<int>(alpha.size());
  Config out(mm, x.layout.cap());
  std::vector<int> buf;
  for (size_t i = 0; i < out.c.size(); ++i) {
    SubsetIndex a = out.layout.subset(i);
    buf.clear();
    for (int v : a.members) buf.push_back(alpha[v - 1]);
    std::sort(buf.begin(), buf.end());
    out.c[i] = x.c[x.layout.index(buf.data(), static_cast<int>(buf.size()))];
  }
  return out;
}

PartLayout::PartLayout(int k, std::vector<int> sizes) : k_(k), sizes_(std::move(sizes)) {
  if (static_cast<int>(sizes_.size()) != k) throw std::invalid_argument("one size per part");
  size_t acc = 0;
  for (unsigned mask : canonical_masks(k)) {
    offset_[mask - 1] = acc;
    size_t block = 1;
    for (int i : mask_members(mask)) block *= static_cast<size_t>(sizes_[i]);
    acc += block;
  }
  size_ = acc;
}

size_t PartLayout::index(unsigned mask, const int* vals) const {
  size_t r = 0;
  int j = 0;
  for (int i = 0; i < k_; ++i)
    if (mask >> i & 1u) r = r * static_cast<size_t>(sizes_[i]) + static_cast<size_t>(vals[j++]);
  return offset_[mask - 1] + r;
}

PartIndex PartLayout::part_index(size_t idx) const {
  const auto& masks = canonical_masks(k_);
  unsigned mask = masks.front();
  for (unsigned m : masks)
    if (offset_[m - 1] <= idx) mask = m;  // offsets increase along canonical order
  size_t r = idx - offset_[mask - 1];
  auto mem = mask_members(mask);
  PartIndex out;
  out.assignment.resize(mem.size());
  for (int j = static_cast<int>(mem.size()) - 1; j >= 0; --j) {
    int sz = sizes_[mem[j]];
    out.assignment[j] = {mem[j] + 1, static_cast<int>(r % sz) + 1};
    r /= sz;
  }
  return out;
}

Local pullback_partite(const PConfig& x, const int* alpha) {
  Local out;
  int k = x.k();
  int buf[kMaxArity];
  for (unsigned mask : canonical_masks(k)) {
    int s = 0;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1u) buf[s++] = alpha[i];
    out[mask] = x.c[x.layout.index(mask, buf)];
  }
  return out;
}

uint64_t tuple_rank(const int* a, const std::vector<int>& sizes) {
  uint64_t r = 0;
  for (size_t i = 0; i < sizes.size(); ++i) r = r * static_cast<uint64_t>(sizes[i]) + static_cast<uint64_t>(a[i]);
  return r;
}

void tuple_unrank(uint64_t r, const std::vector<int>& sizes, int* out) {
  for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<int>(r % static_cast<uint64_t>(sizes[i]));
    r /= static_cast<uint64_t>(sizes[i]);
  }
}

int pattern_count(int L, int k) {
  uint64_t c = sat_pow(static_cast<uint64_t>(L), factorial(k));
  if (c > static_cast<uint64_t>(std::numeric_limits<int>::max())) throw std::overflow_error("pattern space too large");
  return static_cast<int>(c);
}

int pattern_get(int pattern, int L, int perm_rank) {
  for (int i = 0; i < perm_rank; ++i) pattern /= L;
  return pattern % L;
}

int pattern_pack(const std::vector<int>& entries, int L) {
  int p = 0;
  for (int i = static_cast<int>(entries.size()) - 1; i >= 0; --i) p = p * L + entries[i];
  return p;
}

std::vector<int> pattern_unpack(int pattern, int L, int k) {
  int n = static_cast<int>(factorial(k));
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = pattern % L;
    pattern /= L;
  }
  return out;
}

int pattern_pullback(int pattern, int L, int k, const Injection& tau) {
  auto y = pattern_unpack(pattern, L, k);
  const auto& perms = permutations(k);
  std::vector<int> out(y.size());
  for (size_t r = 0; r < perms.size(); ++r) out[r] = y[permutation_rank(compose(tau, perms[r]))];
  return pattern_pack(out, L);
}

}  // namespace harity

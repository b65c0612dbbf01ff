#include "harity/templates.hpp"

#include <algorithm>
#include <stdexcept>

namespace harity {

Rng make_rng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational: " + s);
  }
}

std::string to_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Template Template::nonpartite(std::vector<int> sizes_by_arity) {
  Template t;
  t.partite = false;
  t.k = static_cast<int>(sizes_by_arity.size());
  t.n = std::move(sizes_by_arity);
  for (int v : t.n)
    if (v < 1) throw std::invalid_argument("space sizes must be ≥ 1");
  return t;
}

Template Template::partite_from(int k, std::vector<int> sizes_by_mask) {
  if (static_cast<int>(sizes_by_mask.size()) != (1 << k) - 1) throw std::invalid_argument("one size per non-empty A ⊆ [k]");
  Template t;
  t.partite = true;
  t.k = k;
  t.n = std::move(sizes_by_mask);
  for (int v : t.n)
    if (v < 1) throw std::invalid_argument("space sizes must be ≥ 1");
  return t;
}

uint64_t Template::local_count() const {
  uint64_t c = 1;
  for (unsigned mask : canonical_masks(k)) c = sat_mul(c, static_cast<uint64_t>(size_at(mask)));
  return c;
}

Local Template::local_unrank(uint64_t r) const {
  Local z;
  const auto& masks = canonical_masks(k);
  for (int i = static_cast<int>(masks.size()) - 1; i >= 0; --i) {
    uint64_t sz = static_cast<uint64_t>(size_at(masks[i]));
    z[masks[i]] = static_cast<int>(r % sz);
    r /= sz;
  }
  return z;
}

uint64_t Template::local_rank(const Local& z) const {
  uint64_t r = 0;
  for (unsigned mask : canonical_masks(k)) r = r * static_cast<uint64_t>(size_at(mask)) + static_cast<uint64_t>(z[mask]);
  return r;
}

bool Template::contains(const Local& z) const {
  for (unsigned mask : canonical_masks(k))
    if (z[mask] < 0 || z[mask] >= size_at(mask)) return false;
  return true;
}

ProbTemplate::ProbTemplate(Template t, std::vector<std::vector<Rational>> weights) : t_(std::move(t)), w_(std::move(weights)) {
  if (static_cast<int>(w_.size()) != t_.slots()) throw std::invalid_argument("one weight vector per slot");
  for (int s = 0; s < t_.slots(); ++s) {
    if (static_cast<int>(w_[s].size()) != t_.n[s]) throw std::invalid_argument("weight vector length must match space size");
    Rational sum = 0;
    for (auto& w : w_[s]) {
      if (w < 0) throw std::invalid_argument("negative probability");
      sum += w;
    }
    if (sum != 1) throw std::invalid_argument("weights must sum to exactly 1 (slot " + std::to_string(s) + ")");
    std::vector<double> d, c;
    double acc = 0;
    for (auto& w : w_[s]) {
      d.push_back(to_double(w));
      acc += d.back();
      c.push_back(acc);
    }
    c.back() = 1.0;
    wd_.push_back(std::move(d));
    cdf_.push_back(std::move(c));
  }
}

ProbTemplate ProbTemplate::uniform(const Template& t) {
  std::vector<std::vector<Rational>> w;
  for (int sz : t.n) w.emplace_back(sz, Rational(1, sz));
  return ProbTemplate(t, std::move(w));
}

Rational ProbTemplate::local_mass(const Local& z) const {
  Rational p = 1;
  for (unsigned mask : canonical_masks(t_.k)) p *= w_[t_.slot(mask)][z[mask]];
  return p;
}

double ProbTemplate::local_mass_d(const Local& z) const {
  double p = 1;
  for (unsigned mask : canonical_masks(t_.k)) p *= wd_[t_.slot(mask)][z[mask]];
  return p;
}

int ProbTemplate::draw(int slot, Rng& rng) const {
  const auto& c = cdf_[slot];
  if (c.size() == 1) return 0;
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::upper_bound(c.begin(), c.end(), u);
  int id = static_cast<int>(it - c.begin());
  id = std::min(id, static_cast<int>(c.size()) - 1);
  while (wd_[slot][id] == 0.0 && id > 0) --id;  // never land on a zero-mass point
  return id;
}

namespace {

Template pad(const Template& t, int k) {
  if (t.k >= k || t.partite) return t;
  Template out = t;
  out.k = k;
  out.n.resize(k, 1);
  return out;
}

}  // namespace

Template product(const Template& a0, const Template& b0) {
  if (a0.partite != b0.partite) throw std::invalid_argument("cannot mix partite and non-partite templates");
  if (a0.partite && a0.k != b0.k) throw std::invalid_argument("partite product needs equal k");
  int k = std::max(a0.k, b0.k);
  Template a = pad(a0, k), b = pad(b0, k);
  Template out = a;
  for (int s = 0; s < out.slots(); ++s) out.n[s] = a.n[s] * b.n[s];
  return out;
}

ProbTemplate product(const ProbTemplate& a, const ProbTemplate& b) {
  Template t = product(a.tmpl(), b.tmpl());
  std::vector<std::vector<Rational>> w(t.slots());
  for (int s = 0; s < t.slots(); ++s) {
    int na = s < a.tmpl().slots() ? a.tmpl().n[s] : 1;
    int nb = s < b.tmpl().slots() ? b.tmpl().n[s] : 1;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) {
        Rational wa = s < a.tmpl().slots() ? a.weight(s, i) : Rational(1);
        Rational wb = s < b.tmpl().slots() ? b.weight(s, j) : Rational(1);
        w[s].push_back(wa * wb);
      }
  }
  return ProbTemplate(t, std::move(w));
}

Local join_local(const Local& a, const Local& b, const Template& tb) {
  Local z;
  for (unsigned mask : canonical_masks(tb.k)) z[mask] = join_point(a[mask], b[mask], tb.size_at(mask));
  return z;
}

std::pair<Local, Local> split_local(const Local& z, const Template& tb) {
  Local a, b;
  for (unsigned mask : canonical_masks(tb.k)) {
    auto [x, y] = split_point(z[mask], tb.size_at(mask));
    a[mask] = x;
    b[mask] = y;
  }
  return {a, b};
}

Template partize_template(const Template& t, int k) {
  if (t.partite) throw std::invalid_argument("template is already partite");
  if (k > t.k) throw std::invalid_argument("k exceeds the arity cap");
  std::vector<int> sizes((1 << k) - 1);
  for (unsigned mask = 1; mask < (1u << k); ++mask) sizes[mask - 1] = t.n[popcount(mask) - 1];
  return Template::partite_from(k, std::move(sizes));
}

ProbTemplate partize_template(const ProbTemplate& mu, int k) {
  Template t = partize_template(mu.tmpl(), k);
  std::vector<std::vector<Rational>> w((1 << k) - 1);
  for (unsigned mask = 1; mask < (1u << k); ++mask) w[mask - 1] = mu.weights()[popcount(mask) - 1];
  return ProbTemplate(t, std::move(w));
}

namespace {

std::string slot_key(const Template& t, int s) {
  if (!t.partite) return std::to_string(s + 1);
  SubsetIndex a;
  for (int i : mask_members(static_cast<unsigned>(s + 1))) a.members.push_back(i + 1);
  return a.encode();
}

int key_slot(const std::string& key, bool partite) {
  if (!partite) return std::stoi(key) - 1;
  return static_cast<int>(SubsetIndex::decode(key).mask()) - 1;
}

}  // namespace

nlohmann::json to_json(const ProbTemplate& mu) {
  const Template& t = mu.tmpl();
  nlohmann::json j;
  j["k"] = t.k;
  if (t.partite) j["partite"] = true;
  for (int s = 0; s < t.slots(); ++s) {
    std::string key = slot_key(t, s);
    j["sizes"][key] = t.n[s];
    auto arr = nlohmann::json::array();
    for (auto& w : mu.weights()[s]) arr.push_back(to_string(w));
    j["weights"][key] = arr;
  }
  return j;
}

ProbTemplate prob_template_from_json(const nlohmann::json& j) {
  int k = j.at("k").get<int>();
  if (k < 1 || k > kMaxArity) throw std::invalid_argument("k out of range");
  bool partite = j.value("partite", false);
  for (auto& [key, v] : j.at("sizes").items())
    if (key.find('{') != std::string::npos) partite = true;
  int slots = partite ? (1 << k) - 1 : k;
  std::vector<int> sizes(slots, 1);
  for (auto& [key, v] : j.at("sizes").items()) {
    int s = key_slot(key, partite);
    if (s < 0 || s >= slots) throw std::invalid_argument("size key out of range: " + key);
    sizes[s] = v.get<int>();
  }
  Template t = partite ? Template::partite_from(k, sizes) : Template::nonpartite(sizes);
  std::vector<std::vector<Rational>> w(slots);
  for (int s = 0; s < slots; ++s) w[s].assign(sizes[s], Rational(1, sizes[s]));
  if (j.contains("weights"))
    for (auto& [key, arr] : j.at("weights").items()) {
      int s = key_slot(key, partite);
      if (s < 0 || s >= slots) throw std::invalid_argument("weight key out of range: " + key);
      w[s].clear();
      for (auto& e : arr) w[s].push_back(e.is_string() ? parse_rational(e.get<std::string>()) : Rational(e.get<int>()));
    }
  return ProbTemplate(t, std::move(w));
}

}  // namespace harity

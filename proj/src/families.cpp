#include "harity/families.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace harity {

namespace {

constexpr int kBothOn = 3;  // pattern (1,1) over S_2, base 2

Template graph_template(int n) { return Template::nonpartite({n, 1}); }

// Majority per group: include g iff strictly more (1,1) than (0,0) observations.  Per-group
// decisions are independent under the 0/1 loss, so this is an exact ERM; ties exclude.
uint64_t majority_erm(const SampleStats& s, int groups, const std::function<int(const Local&)>& group_of, int pos,
                      int neg) {
  std::vector<int64_t> score(groups, 0);
  for (const auto& [key, c] : s.counts) {
    int g = group_of(key.first);
    if (g < 0) continue;
    if (key.second == pos) score[g] += static_cast<int64_t>(c);
    if (key.second == neg) score[g] -= static_cast<int64_t>(c);
  }
  uint64_t idx = 0;
  for (int g = 0; g < groups; ++g)
    if (score[g] > 0) idx |= uint64_t{1} << g;
  return idx;
}

HypothesisClass graph_class(std::string name, int n, uint64_t count,
                            std::function<bool(uint64_t, int, int)> edge) {
  HypothesisClass c;
  c.name = std::move(name);
  c.tmpl = graph_template(n);
  c.k = 2;
  c.partite = false;
  c.L = 2;
  c.count = count;
  c.member = [edge, name = c.name](uint64_t i) {
    Hypothesis h;
    h.k = 2;
    h.partite = false;
    h.L = 2;
    h.rank = 1;
    h.tag = name + "#" + std::to_string(i);
    h.eval = [edge, i](const Local& z) {
      int u = z[1u], v = z[2u];
      return u != v && edge(i, u, v) ? 1 : 0;
    };
    return h;
  };
  return c;
}

}  // namespace

FamilySpec matching_family(int n_pairs) {
  if (n_pairs < 1 || n_pairs > 30) throw std::invalid_argument("matching family needs 1 ≤ pairs ≤ 30");
  FamilySpec f;
  f.name = "matching:" + std::to_string(n_pairs);
  f.truncation = n_pairs;
  f.cls = graph_class(f.name, 2 * n_pairs, uint64_t{1} << n_pairs,
                      [](uint64_t a, int u, int v) { return u / 2 == v / 2 && (a >> (u / 2) & 1u); });
  f.cls.erm01 = [n_pairs](const SampleStats& s) {
    return majority_erm(
        s, n_pairs,
        [](const Local& z) {
          int u = z[1u], v = z[2u];
          return (u != v && u / 2 == v / 2) ? u / 2 : -1;
        },
        kBothOn, 0);
  };
  f.cls.contains = [cls = f.cls](const Hypothesis& h) {
    for (uint64_t i = 0; i < cls.count; ++i)
      if (pointwise_equal(cls.member(i), h, cls.tmpl)) return true;
    return false;
  };
  f.vcn = 1;
  f.vc = n_pairs;
  return f;
}

FamilySpec bounded_degree_family(int n, int d) {
  if (n < 1 || n > 6) throw std::invalid_argument("bounded-degree family enumerated for 1 ≤ n ≤ 6");
  if (d < 0) throw std::invalid_argument("degree bound must be ≥ 0");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  auto graphs = std::make_shared<std::vector<std::vector<uint8_t>>>();
  for (uint32_t s = 0; s < (1u << edges.size()); ++s) {
    std::vector<int> deg(n, 0);
    std::vector<uint8_t> adj(static_cast<size_t>(n) * n, 0);
    bool ok = true;
    for (size_t e = 0; e < edges.size() && ok; ++e)
      if (s >> e & 1u) {
        auto [u, v] = edges[e];
        ok = ++deg[u] <= d && ++deg[v] <= d;
        adj[u * n + v] = adj[v * n + u] = 1;
      }
    if (ok) graphs->push_back(std::move(adj));
  }
  FamilySpec f;
  f.name = "bdeg:" + std::to_string(n) + ":" + std::to_string(d);
  f.truncation = n;
  f.cls = graph_class(f.name, n, graphs->size(),
                      [graphs, n](uint64_t i, int u, int v) { return (*graphs)[i][u * n + v] != 0; });
  f.vcn = std::min(d, n - 1);
  return f;
}

FamilySpec partition_family(const PartitionData& p, std::string name) {
  if (p.classes < 1 || p.classes > 30) throw std::invalid_argument("partition family needs 1..30 classes");
  for (int u = 0; u < p.n; ++u)
    for (int v = 0; v < p.n; ++v) {
      int c = p.at(u, v);
      if (u == v) continue;
      if (c < 0 || c >= p.classes || c != p.at(v, u)) throw std::invalid_argument("partition must be total and symmetric");
    }
  FamilySpec f;
  f.name = std::move(name);
  f.truncation = p.n;
  auto data = std::make_shared<PartitionData>(p);
  f.cls = graph_class(f.name, p.n, uint64_t{1} << p.classes,
                      [data](uint64_t b, int u, int v) { return (b >> data->at(u, v) & 1u) != 0; });
  f.cls.erm01 = [data](const SampleStats& s) {
    return majority_erm(
        s, data->classes,
        [data](const Local& z) {
          int u = z[1u], v = z[2u];
          return u == v ? -1 : data->at(u, v);
        },
        kBothOn, 0);
  };
  f.partition = p;
  // a slice at x shatters one point per class seen from x
  int best = 0;
  for (int x = 0; x < p.n; ++x) {
    std::vector<char> seen(p.classes, 0);
    int cnt = 0;
    for (int y = 0; y < p.n; ++y)
      if (y != x && !seen[p.at(x, y)]) {
        seen[p.at(x, y)] = 1;
        ++cnt;
      }
    best = std::max(best, cnt);
  }
  f.vcn = best;
  return f;
}

FamilySpec distance_family(int n) {
  if (n < 2) throw std::invalid_argument("distance family needs n ≥ 2");
  PartitionData p;
  p.n = n;
  p.classes = n - 1;
  p.chi2.assign(static_cast<size_t>(n) * n, -1);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) p.chi2[u * n + v] = std::abs(u - v) - 1;
  FamilySpec f = partition_family(p, "dist:" + std::to_string(n));
  f.vcn_unbounded = true;
  return f;
}

FamilySpec max_family(int n) {
  if (n < 2) throw std::invalid_argument("max family needs n ≥ 2");
  PartitionData p;
  p.n = n;
  p.classes = n - 1;
  p.chi2.assign(static_cast<size_t>(n) * n, -1);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) p.chi2[u * n + v] = std::max(u, v) - 1;
  FamilySpec f = partition_family(p, "maxg:" + std::to_string(n));
  f.vcn_unbounded = true;
  return f;
}

PartitionData partition_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open partition file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  PartitionData p;
  p.n = j.at("n").get<int>();
  if (p.n < 2) throw std::invalid_argument("partition needs n ≥ 2");
  p.chi2.assign(static_cast<size_t>(p.n) * p.n, -1);
  int top = -1;
  for (const auto& e : j.at("pairs")) {
    int u = e.at(0).get<int>(), v = e.at(1).get<int>(), c = e.at(2).get<int>();
    if (u < 0 || v < 0 || u >= p.n || v >= p.n || u == v) throw std::invalid_argument("bad pair in partition file");
    p.chi2[u * p.n + v] = p.chi2[v * p.n + u] = c;
    top = std::max(top, c);
  }
  p.classes = top + 1;
  for (int u = 0; u < p.n; ++u)
    for (int v = 0; v < p.n; ++v)
      if (u != v && p.at(u, v) < 0) throw std::invalid_argument("partition file does not cover every pair");
  return p;
}

FamilySpec highorder_family(int n) {
  if (n < 1 || n > 30) throw std::invalid_argument("higher-order family needs 1 ≤ n ≤ 30");
  FamilySpec f;
  f.name = "highorder:" + std::to_string(n);
  f.truncation = n;
  HypothesisClass& c = f.cls;
  c.name = f.name;
  c.tmpl = Template::partite_from(2, {1, n, n});
  c.k = 2;
  c.partite = true;
  c.L = 2;
  c.count = uint64_t{1} << n;
  c.member = [name = f.name](uint64_t v) {
    Hypothesis h;
    h.k = 2;
    h.partite = true;
    h.L = 2;
    h.rank = 2;
    h.tag = name + "#" + std::to_string(v);
    h.eval = [v](const Local& z) { return (z[2u] == z[3u] && (v >> z[2u] & 1u)) ? 1 : 0; };
    return h;
  };
  c.erm01 = [n](const SampleStats& s) {
    return majority_erm(
        s, n, [](const Local& z) { return z[2u] == z[3u] ? z[2u] : -1; }, 1, 0);
  };
  f.vcn = n;
  f.vcn_unbounded = true;
  return f;
}

FamilySpec family_by_name(const std::string& spec) {
  std::vector<std::string> parts;
  std::string head = spec, rest;
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    head = spec.substr(0, colon);
    rest = spec.substr(colon + 1);
  }
  if (head == "partition") {
    if (rest.empty()) throw std::invalid_argument("partition family needs a file: partition:<file>");
    return partition_family(partition_from_json_file(rest), spec);
  }
  std::stringstream ss(rest);
  std::string tok;
  std::vector<int> args;
  while (std::getline(ss, tok, ':'))
    if (!tok.empty()) args.push_back(std::stoi(tok));
  auto arg = [&](size_t i, int dflt) { return i < args.size() ? args[i] : dflt; };
  if (head == "matching") return matching_family(arg(0, 4));
  if (head == "bdeg") return bounded_degree_family(arg(0, 5), arg(1, 2));
  if (head == "dist") return distance_family(arg(0, 6));
  if (head == "maxg") return max_family(arg(0, 6));
  if (head == "highorder") return highorder_family(arg(0, 8));
  throw std::invalid_argument("unknown family: " + spec);
}

bool verify_metadata(const FamilySpec& f) {
  int cap = std::max(kDefaultDimCap, f.vcn + 1);
  DimResult d = vcn_k(f.cls, cap);
  if (d.at_cap || d.value != f.vcn) return false;
  if (f.vc) {
    DimResult v = vc_dim(full_family(f.cls), std::max(kDefaultDimCap, *f.vc + 1));
    if (v.at_cap || v.value != *f.vc) return false;
  }
  return true;
}

}  // namespace harity

// harity: experiment runner over the library modules.
//
// Every subcommand writes a CSV (header row, one row per sweep point or aggregate) and, with
// --summary, a JSON document echoing the configuration.  Exit codes: 0 ok, 2 bad configuration,
// 3 instance too large for the exact or exhaustive routines.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "harity/adversaries.hpp"
#include "harity/dims.hpp"
#include "harity/families.hpp"
#include "harity/learners.hpp"
#include "harity/losses.hpp"
#include "harity/reductions.hpp"

#ifndef HARITY_GIT_DESCRIBE
#define HARITY_GIT_DESCRIBE "unknown"
#endif

using namespace harity;
using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string command;
  std::vector<std::string> families;
  std::string loss = "01";
  double eps = 0.2;
  double delta = 0.2;
  std::vector<int> m;
  int trials = 1000;
  uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  int member = -1;
  int d = 20;
  int n = 4;
  int k = 2;
  std::string learner = "erm";
  std::string direction = "partize";
  bool partite = true;
  std::string out;
  std::string summary;
  std::string config;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rows are kept as strings so that output is identical regardless of the worker count.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

template <class T>
std::string str(T v) {
  return std::to_string(v);
}

void write_csv(const Table& t, std::ostream& os) {
  for (size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

// Runs f(i) for i in [0, n) on up to `workers` threads; results land in slot i.
template <class F>
void parallel_for(int n, int workers, F&& f) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<std::string> default_families() { return {"matching:4", "bdeg:5:2", "dist:6", "maxg:6", "highorder:8"}; }

const FamilySpec& only_family(const std::vector<FamilySpec>& fs) {
  if (fs.size() != 1) throw ConfigError("this subcommand takes exactly one --family");
  return fs.front();
}

// The family as a partite problem: partite families stay, graph families are partized.
struct PartiteView {
  HypothesisClass cls;
  ProbTemplate mu;
};

PartiteView partite_view(const FamilySpec& f) {
  if (f.cls.partite) return {f.cls, ProbTemplate::uniform(f.cls.tmpl)};
  return {partize_class(f.cls), partize_template(ProbTemplate::uniform(f.cls.tmpl), f.cls.k)};
}

uint64_t pick_member(const HypothesisClass& c, int member, uint64_t seed) {
  if (member >= 0) {
    if (static_cast<uint64_t>(member) >= c.count) throw ConfigError("--member out of range");
    return static_cast<uint64_t>(member);
  }
  Rng rng = make_rng(seed, 0xfeedu);
  return std::uniform_int_distribution<uint64_t>(0, c.count - 1)(rng);
}

LossFn loss_for(const std::string& name, const HypothesisClass& c) {
  if (name == "01") return zero_one_loss(c.L, c.k, c.partite);
  throw ConfigError("unknown loss: " + name + " (available: 01)");
}

Table cmd_dims(const Options& o, const std::vector<FamilySpec>& fs, json& extra) {
  Table t{{"family", "members", "vcn", "declared_vcn", "vc", "declared_vc", "match"}, {}};
  t.rows.resize(fs.size());
  parallel_for(static_cast<int>(fs.size()), o.workers, [&](int i) {
    const auto& f = fs[i];
    DimResult v = vcn_k(f.cls, std::max(kDefaultDimCap, f.vcn + 1));
    std::string vc = "", dvc = "";
    bool ok = !v.at_cap && v.value == f.vcn;
    if (f.vc) {
      DimResult c = vc_dim(full_family(f.cls), std::max(kDefaultDimCap, *f.vc + 1));
      vc = c.str();
      dvc = str(*f.vc);
      ok = ok && !c.at_cap && c.value == *f.vc;
    }
    t.rows[i] = {f.name, str(f.cls.count), v.str(), str(f.vcn), vc, dvc, ok ? "1" : "0"};
  });
  int bad = 0;
  for (const auto& r : t.rows) bad += r.back() == "0";
  extra["mismatches"] = bad;
  return t;
}

Table cmd_sample(const Options& o, const std::vector<FamilySpec>& fs, json& extra) {
  const auto& f = only_family(fs);
  if (o.m.size() != 1) throw ConfigError("sample takes a single --m");
  uint64_t idx = pick_member(f.cls, o.member, o.seed);
  Scenario sc{ProbTemplate::uniform(f.cls.tmpl), std::nullopt, f.cls.member(idx)};
  Rng rng = make_rng(o.seed, 1);
  Table t{{"kind", "index", "value"}, {}};
  if (f.cls.partite) {
    PSample s = labeled_sample_partite(sc, o.m[0], rng);
    for (size_t i = 0; i < s.x.c.size(); ++i) t.rows.push_back({"x", s.x.layout.part_index(i).encode(), str(s.x.c[i])});
    for (size_t i = 0; i < s.y.size(); ++i) t.rows.push_back({"y", str(i), str(s.y[i])});
  } else {
    NSample s = labeled_sample(sc, o.m[0], rng);
    for (size_t i = 0; i < s.x.c.size(); ++i) t.rows.push_back({"x", s.x.layout.subset(i).encode(), str(s.x.c[i])});
    for (size_t i = 0; i < s.y.size(); ++i) t.rows.push_back({"y", str(i), str(s.y[i])});
  }
  extra["member"] = idx;
  return t;
}

Table cmd_learn(const Options& o, const std::vector<FamilySpec>& fs, json& extra) {
  const auto& f = only_family(fs);
  uint64_t idx = pick_member(f.cls, o.member, o.seed);
  LossFn l = loss_for(o.loss, f.cls);
  Scenario sc{ProbTemplate::uniform(f.cls.tmpl), std::nullopt, f.cls.member(idx)};
  Table t{{"m", "eps", "trials", "success", "se", "target"}, {}};
  t.rows.resize(o.m.size());
  parallel_for(static_cast<int>(o.m.size()), o.workers, [&](int i) {
    Frequency fr = f.cls.partite
                       ? estimate_pac_success(erm_partite(f.cls, l), sc, l, o.m[i], o.eps, o.trials, o.seed + i)
                       : estimate_pac_success(erm_nonpartite(f.cls, l), sc, l, o.m[i], o.eps, o.trials, o.seed + i);
    t.rows[i] = {str(o.m[i]), fmt(o.eps), str(o.trials), fmt(fr.freq), fmt(fr.se), fmt(1 - o.delta)};
  });
  extra["member"] = idx;
  return t;
}

Table cmd_verify_uc(const Options& o, const std::vector<FamilySpec>& fs, json& extra) {
  const auto& f = only_family(fs);
  PartiteView pv = partite_view(f);
  uint64_t idx = pick_member(pv.cls, o.member, o.seed);
  LossFn l = loss_for(o.loss, pv.cls);
  Scenario sc{pv.mu, std::nullopt, pv.cls.member(idx)};
  double bound = m_uc(f.vcn, pv.cls.k, pv.cls.L, 1.0, o.eps, o.delta);
  Table t{{"m", "eps", "trials", "representative", "se", "erm_violations", "m_uc", "target"}, {}};
  t.rows.resize(o.m.size());
  parallel_for(static_cast<int>(o.m.size()), o.workers, [&](int i) {
    UcReport r = check_uniform_convergence(sc, pv.cls, l, o.m[i], o.eps, o.trials, o.seed + i);
    t.rows[i] = {str(o.m[i]),        fmt(o.eps), str(o.trials),       fmt(r.representative.freq), fmt(r.representative.se),
                 str(r.erm_violations), fmt(bound), fmt(1 - o.delta)};
  });
  extra["member"] = idx;
  extra["m_uc"] = bound;
  return t;
}

Table cmd_nofreelunch(const Options& o, json& extra) {
  if (o.d < 1 || o.d > 63) throw ConfigError("--d must lie in [1, 63]");
  ShatteredScenario sc = ShatteredScenario::binary(o.d);
  UnaryLearner a = o.learner == "erm"      ? unary_erm(sc)
                   : o.learner == "const0" ? unary_constant(sc, 0)
                   : o.learner == "const1" ? unary_constant(sc, 1)
                                           : throw ConfigError("unknown --learner (erm, const0, const1)");
  UnaryLoss l = unary_zero_one();
  Table t{{"d", "m", "eps", "bound", "measured", "slack", "se"}, {}};
  t.rows.resize(o.m.size());
  std::vector<uint64_t> worst(o.m.size());
  parallel_for(static_cast<int>(o.m.size()), o.workers, [&](int i) {
    Rng rng = make_rng(o.seed, i);
    NflResult r = nfl_worst_F(a, sc, l, o.m[i], o.eps, o.trials, rng);
    double b = nfl_lower_bound(o.eps, o.m[i], o.d, l.separation, l.bound);
    worst[i] = r.B;
    t.rows[i] = {str(o.d), str(o.m[i]), fmt(o.eps), fmt(b), fmt(r.failure.freq), fmt(r.failure.freq - b),
                 fmt(r.failure.se)};
  });
  extra["learner"] = a.name;
  extra["worst_B"] = worst;
  return t;
}

Table cmd_ramsey(const Options& o, json& extra) {
  if (o.n < 1 || o.n > 6) throw ConfigError("--n must lie in [1, 6]");
  int rho = static_cast<int>(ramsey_rho(o.n));
  Table t{{"n", "rho", "trial", "found", "subset"}, {}};
  t.rows.resize(o.trials);
  parallel_for(o.trials, o.workers, [&](int tr) {
    Rng rng = make_rng(o.seed, tr);
    // f1 is a random injection into [2ρ]; f2 draws from the same range so collisions happen
    std::vector<int> pool(2 * rho);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> f1(pool.begin(), pool.begin() + rho);
    std::vector<int> f2(static_cast<size_t>(rho) * rho, -1);
    std::uniform_int_distribution<int> any(0, 2 * rho - 1);
    for (int u = 0; u < rho; ++u)
      for (int v = u + 1; v < rho; ++v) f2[u * rho + v] = f2[v * rho + u] = any(rng);
    auto U = find_clean_subset(f1, f2, o.n);
    std::string s;
    if (U)
      for (size_t i = 0; i < U->size(); ++i) s += (i ? " " : "") + str((*U)[i]);
    t.rows[tr] = {str(o.n), str(rho), str(tr), U ? "1" : "0", s};
  });
  extra["rho"] = rho;
  return t;
}

Table cmd_reduce(const Options& o, const std::vector<FamilySpec>& fs, json& extra) {
  Table t{{"check", "family", "result"}, {}};
  if (o.direction == "partize") {
    for (const auto& f : fs) {
      if (f.cls.partite) continue;
      if (f.cls.tmpl.local_count() > 64) {
        t.rows.push_back({"skipped", f.name, "template too large"});
        continue;
      }
      Hypothesis h = f.cls.member(pick_member(f.cls, o.member, o.seed));
      t.rows.push_back({"phi_iota", f.name, check_phi_iota(f.cls.tmpl) ? "1" : "0"});
      for (int m : o.m) {
        std::string res;
        try {
          res = check_partization_square(h, f.cls.tmpl, m) ? "1" : "0";
        } catch (const std::length_error&) {
          res = "skipped";
        }
        t.rows.push_back({"square_m" + str(m), f.name, res});
      }
    }
    // pushforward on a 2-point space at k = 2
    Template tt = Template::nonpartite({2, 2});
    ProbTemplate mu(tt, {{Rational(1, 3), Rational(2, 3)}, {Rational(1, 4), Rational(3, 4)}});
    std::vector<int> sizes(2, 1);
    Law lhs = phi_pushforward_law(mu, 2);
    Law rhs = pconfig_law(partize_template(mu, 2), sizes);
    t.rows.push_back({"pushforward", "2-point", lhs == rhs ? "1" : "0"});
  } else if (o.direction == "departize") {
    Rng rng = make_rng(o.seed, 0);
    auto w = [&](int n) {
      std::vector<Rational> v(n);
      Rational s = 0;
      for (auto& x : v) s += (x = Rational(std::uniform_int_distribution<int>(1, 6)(rng)));
      for (auto& x : v) x /= s;
      return v;
    };
    Template tp = Template::partite_from(2, {2, 2, 1});
    Template t2 = Template::partite_from(2, {2, 2, 2});
    ProbTemplate mu(tp, {w(2), w(2), w(1)});
    ProbTemplate mu2(t2, {w(2), w(2), w(2)});
    Template joint = product(tp, t2);
    int L = 2;
    std::vector<int> table(joint.local_count());
    for (auto& y : table) y = std::uniform_int_distribution<int>(0, L - 1)(rng);
    Scenario sc{mu, mu2, table_hypothesis(joint, L, table)};
    bool laws = departization_law(sc, 2, L) == discrete_equivalent_law(sc, 2, L);
    auto witness = flexibility_witness_01(L, 2, false);
    auto [lext, info] = extend_with_neutral(zero_one_loss(L, 2, false), witness);
    std::vector<int> htab(Template::nonpartite({2, 1}).local_count());
    for (auto& y : htab) y = std::uniform_int_distribution<int>(0, L - 1)(rng);
    Hypothesis H = table_hypothesis(Template::nonpartite({2, 1}), L, htab);
    DecompositionReport rep = loss_decomposition(sc, L, lext, info, H);
    t.rows.push_back({"law_equality", "random k=m=2", laws ? "1" : "0"});
    t.rows.push_back({"decomposition", "random k=m=2", rep.holds() ? "1" : "0"});
    extra["p"] = to_string(rep.p);
    extra["lhs"] = to_string(rep.lhs);
  } else {
    throw ConfigError("--direction must be partize or departize");
  }
  return t;
}

std::vector<Rational> random_weights(int n, Rng& rng) {
  std::vector<Rational> v(n);
  Rational s = 0;
  for (auto& x : v) s += (x = Rational(std::uniform_int_distribution<int>(1, 9)(rng)));
  for (auto& x : v) x /= s;
  return v;
}

Table cmd_bayes(const Options& o, json& extra) {
  if (o.k < 1 || o.k > 2) throw ConfigError("--k must be 1 or 2");
  if (!o.partite && o.k != 1) throw ConfigError("non-partite Bayes runs are limited to k = 1");
  Table t{{"trial", "bayes_loss", "best_member_loss", "ok"}, {}};
  t.rows.resize(o.trials);
  parallel_for(o.trials, o.workers, [&](int tr) {
    Rng rng = make_rng(o.seed, tr);
    int L = 2;
    Template tv = o.partite ? Template::partite_from(o.k, std::vector<int>((1 << o.k) - 1, 2)) : Template::nonpartite({3});
    Template ta = o.partite ? Template::partite_from(o.k, std::vector<int>((1 << o.k) - 1, 2)) : Template::nonpartite({2});
    std::vector<std::vector<Rational>> wv, wa;
    for (int s = 0; s < tv.slots(); ++s) wv.push_back(random_weights(tv.n[s], rng));
    for (int s = 0; s < ta.slots(); ++s) wa.push_back(random_weights(ta.n[s], rng));
    ProbTemplate mu(tv, wv), mu2(ta, wa);
    Template joint = product(tv, ta);
    std::vector<int> ft(joint.local_count());
    for (auto& y : ft) y = std::uniform_int_distribution<int>(0, L - 1)(rng);
    Hypothesis F = table_hypothesis(joint, L, ft);
    LossFn l = zero_one_loss(L, o.k, o.partite);
    auto B = bayes_predictor(mu, mu2, F, l);
    if (!B) throw std::runtime_error("no symmetric Bayes predictor");
    Rational lb = total_loss(mu, mu2, F, l, *B);
    Rational best = -1;
    bool ok = true;
    for (int i = 0; i < 16; ++i) {
      std::vector<int> ht(tv.local_count());
      for (auto& y : ht) y = std::uniform_int_distribution<int>(0, L - 1)(rng);
      Rational lh = total_loss(mu, mu2, F, l, table_hypothesis(tv, L, ht));
      if (best < 0 || lh < best) best = lh;
      ok = ok && lb <= lh;
    }
    t.rows[tr] = {str(tr), to_string(lb), to_string(best), ok ? "1" : "0"};
  });
  int bad = 0;
  for (const auto& r : t.rows) bad += r.back() == "0";
  extra["violations"] = bad;
  return t;
}

// JSON config keys fill whatever was not given on the command line.
void apply_config(Options& o, const CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config JSON: ") + e.what());
  }
  // keys for options this subcommand lacks are rejected rather than silently dropped
  auto unset = [&](const char* name) {
    if (!j.contains(name)) return false;
    const CLI::Option* opt = sub.get_option_no_throw(std::string("--") + name);
    if (!opt) throw ConfigError(std::string("config key not valid for ") + sub.get_name() + ": " + name);
    return opt->count() == 0;
  };
  try {
    if (unset("family")) o.families = j["family"].is_array() ? j["family"].get<std::vector<std::string>>()
                                                             : std::vector<std::string>{j["family"].get<std::string>()};
    if (unset("loss")) o.loss = j["loss"].get<std::string>();
    if (unset("eps")) o.eps = j["eps"].get<double>();
    if (unset("delta")) o.delta = j["delta"].get<double>();
    if (unset("m")) o.m = j["m"].is_array() ? j["m"].get<std::vector<int>>() : std::vector<int>{j["m"].get<int>()};
    if (unset("trials")) o.trials = j["trials"].get<int>();
    if (unset("seed")) {
      o.seed = j["seed"].get<uint64_t>();
      o.seed_given = true;
    }
    if (unset("workers")) o.workers = j["workers"].get<int>();
    if (unset("member")) o.member = j["member"].get<int>();
    if (unset("out")) o.out = j["out"].get<std::string>();
    if (unset("summary")) o.summary = j["summary"].get<std::string>();
    if (unset("d")) o.d = j["d"].get<int>();
    if (unset("learner")) o.learner = j["learner"].get<std::string>();
    if (unset("n")) o.n = j["n"].get<int>();
    if (unset("direction")) o.direction = j["direction"].get<std::string>();
    if (unset("k")) o.k = j["k"].get<int>();
    if (unset("partite")) o.partite = j["partite"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

void validate(const Options& o) {
  if (!(o.eps > 0 && o.eps < 1)) throw ConfigError("--eps must lie in (0,1)");
  if (!(o.delta > 0 && o.delta < 1)) throw ConfigError("--delta must lie in (0,1)");
  if (o.trials < 1) throw ConfigError("--trials must be ≥ 1");
  if (o.workers < 1) throw ConfigError("--workers must be ≥ 1");
  for (int m : o.m)
    if (m < 0) throw ConfigError("--m values must be ≥ 0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harity: experiments on higher-arity PAC learning"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--family", o.families, "family spec, e.g. matching:4, bdeg:5:2, dist:6, highorder:8");
    s->add_option("--loss", o.loss, "loss name");
    s->add_option("--eps", o.eps, "accuracy ε");
    s->add_option("--delta", o.delta, "confidence δ");
    s->add_option("--m", o.m, "sample sizes (sweep)")->delimiter(',');
    s->add_option("--trials", o.trials, "Monte Carlo trials");
    s->add_option("--seed", o.seed, "seed (falls back to HARITY_SEED)");
    s->add_option("--workers", o.workers, "worker threads over sweep points");
    s->add_option("--member", o.member, "target member index (default: seeded draw)");
    s->add_option("--out", o.out, "CSV path (default stdout)");
    s->add_option("--summary", o.summary, "JSON summary path");
    s->add_option("--config", o.config, "JSON config; flags win over its keys");
  };
  std::map<std::string, CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"dims", "VCN_k and VC dimension of each family against its declared values"},
      {"sample", "draw labeled samples from a realizable scenario"},
      {"learn", "PAC success frequency of ERM over a sweep of m"},
      {"verify-uc", "representativeness frequency of the partized class"},
      {"nofreelunch", "failure frequency on a shattered set against the lower bound"},
      {"reduce", "exact checks of the partization and departization reductions"},
      {"ramsey", "clean-subset search on random instances"},
      {"bayes", "Bayes predictor against random tables"},
  };
  for (auto [name, help] : commands) {
    subs[name] = app.add_subcommand(name, help);
    common(subs[name]);
  }
  subs["nofreelunch"]->add_option("--d", o.d, "shattered set size");
  subs["nofreelunch"]->add_option("--learner", o.learner, "erm, const0 or const1");
  subs["ramsey"]->add_option("--n", o.n, "subset size");
  subs["reduce"]->add_option("--direction", o.direction, "partize or departize");
  subs["bayes"]->add_option("--k", o.k, "arity (1 or 2)");
  subs["bayes"]->add_option("--partite", o.partite, "partite setting (true/false)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  CLI::App* sub = nullptr;
  for (auto& [name, s] : subs)
    if (s->parsed()) {
      o.command = name;
      sub = s;
    }
  try {
    o.seed_given = sub->get_option("--seed")->count() > 0;
    if (!o.config.empty()) apply_config(o, *sub, o.config);
    if (!o.seed_given) {
      if (const char* env = std::getenv("HARITY_SEED")) {
        try {
          o.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw ConfigError("HARITY_SEED is not an unsigned integer");
        }
      }
    }
    if (o.m.empty())
      o.m = o.command == "nofreelunch" ? std::vector<int>{5}
            : o.command == "reduce"    ? std::vector<int>{2, 3}
                                       : std::vector<int>{10, 20, 40, 80};
    if (o.command == "sample" && sub->get_option("--m")->count() == 0) o.m = {4};
    validate(o);

    std::vector<FamilySpec> fs;
    auto names = o.families.empty() ? default_families() : o.families;
    if (o.command != "nofreelunch" && o.command != "ramsey" && o.command != "bayes")
      for (const auto& n : names) fs.push_back(family_by_name(n));

    json extra = json::object();
    Table t;
    if (o.command == "dims") t = cmd_dims(o, fs, extra);
    if (o.command == "sample") t = cmd_sample(o, fs, extra);
    if (o.command == "learn") t = cmd_learn(o, fs, extra);
    if (o.command == "verify-uc") t = cmd_verify_uc(o, fs, extra);
    if (o.command == "nofreelunch") t = cmd_nofreelunch(o, extra);
    if (o.command == "reduce") t = cmd_reduce(o, fs, extra);
    if (o.command == "ramsey") t = cmd_ramsey(o, extra);
    if (o.command == "bayes") t = cmd_bayes(o, extra);

    if (o.out.empty()) {
      write_csv(t, std::cout);
    } else {
      std::ofstream os(o.out);
      if (!os) throw ConfigError("cannot write " + o.out);
      write_csv(t, os);
    }
    if (!o.summary.empty()) {
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      json j = {{"schema_version", kSchemaVersion},
                {"command", o.command},
                {"git_describe", HARITY_GIT_DESCRIBE},
                {"wall_time_s", wall},
                {"rows", t.rows.size()},
                {"config",
                 {{"family", names},
                  {"loss", o.loss},
                  {"eps", o.eps},
                  {"delta", o.delta},
                  {"m", o.m},
                  {"trials", o.trials},
                  {"seed", o.seed},
                  {"workers", o.workers}}},
                {"results", extra}};
      std::ofstream os(o.summary);
      if (!os) throw ConfigError("cannot write " + o.summary);
      os << j.dump(2) << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

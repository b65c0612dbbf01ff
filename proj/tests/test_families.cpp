#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "harity/dims.hpp"
#include "harity/families.hpp"

using namespace harity;

namespace {

int edge(const HypothesisClass& c, uint64_t i, int u, int v) {
  Local z;
  z[1u] = u;
  z[2u] = v;
  return c.member(i)(z);
}

}  // namespace

TEST_SUITE("families") {
  TEST_CASE("declared dimensions re-derive") {
    for (const char* name : {"matching:3", "bdeg:4:2", "dist:5", "maxg:5", "highorder:4"}) {
      CAPTURE(name);
      CHECK(verify_metadata(family_by_name(name)));
    }
  }

  TEST_CASE("bounded-degree VCN is min{d, n−1}") {
    for (int n = 2; n <= 4; ++n)
      for (int d = 0; d <= 3; ++d) CHECK(vcn_k(bounded_degree_family(n, d).cls, 6).value == std::min(d, n - 1));
  }

  TEST_CASE("bounded-degree members respect the bound") {
    FamilySpec f = bounded_degree_family(4, 1);
    // perfect matchings and partial ones on 4 vertices: 1 + 6 + 3
    CHECK(f.cls.count == 10);
    for (uint64_t i = 0; i < f.cls.count; ++i)
      for (int u = 0; u < 4; ++u) {
        int deg = 0;
        for (int v = 0; v < 4; ++v) deg += edge(f.cls, i, u, v);
        CHECK(deg <= 1);
      }
  }

  TEST_CASE("graphs are symmetric and loopless") {
    for (const char* name : {"matching:2", "dist:4", "maxg:4"}) {
      HypothesisClass c = family_by_name(name).cls;
      for (uint64_t i = 0; i < c.count; ++i)
        for (int u = 0; u < c.tmpl.n[0]; ++u) {
          CHECK(edge(c, i, u, u) == 0);
          for (int v = 0; v < c.tmpl.n[0]; ++v) CHECK(edge(c, i, u, v) == edge(c, i, v, u));
        }
    }
  }

  TEST_CASE("distance and max classes") {
    FamilySpec d = distance_family(5);
    CHECK(d.partition->at(0, 3) == 2);
    CHECK(edge(d.cls, 0b100, 1, 4) == 1);
    CHECK(edge(d.cls, 0b100, 1, 3) == 0);
    FamilySpec m = max_family(5);
    CHECK(m.partition->at(1, 4) == 3);
    CHECK(m.vcn_unbounded);
  }

  TEST_CASE("higher-order members") {
    FamilySpec h = highorder_family(3);
    Local z;
    z[2u] = 1;
    z[3u] = 1;
    CHECK(h.cls.member(0b010)(z) == 1);
    CHECK(h.cls.member(0b101)(z) == 0);
    z[3u] = 2;
    CHECK(h.cls.member(0b111)(z) == 0);
  }

  TEST_CASE("partition file") {
    std::string path = "harity_partition_test.json";
    {
      std::ofstream out(path);
      out << R"({"n": 3, "pairs": [[0,1,0],[0,2,1],[1,2,0]]})";
    }
    FamilySpec f = family_by_name("partition:" + path);
    CHECK(f.partition->classes == 2);
    CHECK(f.vcn == 2);
    CHECK(verify_metadata(f));
    {
      std::ofstream out(path);
      out << R"({"n": 3, "pairs": [[0,1,0]]})";
    }
    CHECK_THROWS_AS(family_by_name("partition:" + path), std::invalid_argument);
    std::remove(path.c_str());
  }

  TEST_CASE("bad names") {
    CHECK_THROWS_AS(family_by_name("nope:3"), std::invalid_argument);
    CHECK_THROWS_AS(family_by_name("matching:0"), std::invalid_argument);
    CHECK_THROWS_AS(family_by_name("bdeg:9:2"), std::invalid_argument);
  }
}

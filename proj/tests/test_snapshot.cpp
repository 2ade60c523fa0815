#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "helpers.hpp"

using namespace costab;
using namespace costab::testing;

TEST_CASE("kA2 snapshot: ids, hom table, K0") {
  const Snapshot& s = ka2().snapshot;
  CHECK(s.all_ids().size() == 15);
  CHECK(s.orbits.size() == 3);
  CHECK(s.k0_rank() == 2);
  IndecId x = id_of(s, "P1@0"), y = id_of(s, "P2@0"), z = id_of(s, "M1@0");
  CHECK(s.hom_dim(x, y) == 1);
  CHECK(s.hom_dim(y, x) == 0);
  CHECK(s.hom_dim(z, x.suspended()) == 1);
  CHECK(s.hom_dim(y, x.suspended()) == 0);
  CHECK(s.hom_dim(z, z) == 1);
  // K0 classes: [z] = [y] - [x]
  auto cz = s.k0_class(FormalObject(z));
  auto cx = s.k0_class(FormalObject(x));
  auto cy = s.k0_class(FormalObject(y));
  for (int i = 0; i < 2; ++i) CHECK(cz[i] == cy[i] - cx[i]);
  // suspension flips the class
  auto csx = s.k0_class(FormalObject(x.suspended()));
  for (int i = 0; i < 2; ++i) CHECK(csx[i] == -cx[i]);
}

TEST_CASE("trivial algebra: one orbit with hom(c, Sigma^k c) = delta") {
  AlgebraPresentation p;
  p.name = "k";
  p.vertex_names = {"1"};
  BuildOptions bo;
  bo.width_bound = 1;
  Category cat = build_category(p, bo);
  CHECK(cat.snapshot.orbits.size() == 1);
  IndecId c = id_of(cat.snapshot, "P1@0");
  for (int k = -2; k <= 2; ++k)
    CHECK(cat.snapshot.hom_dim(c, c.suspended(k)) == (k == 0 ? 1 : 0));
}

TEST_CASE("dual numbers snapshot contains the stalk orbit with End dim 2") {
  BuildOptions bo;
  bo.width_bound = 2;
  Category cat = build_category(make_dual_numbers(), bo);
  IndecId c = id_of(cat.snapshot, "P1@0");
  CHECK(cat.snapshot.hom_dim(c, c) == 2);
  CHECK(cat.snapshot.k0_rank() == 1);
}

TEST_CASE("hom lookups outside the window: slide, disjoint-support zero, or throw") {
  const Snapshot& s = ka2().snapshot;
  IndecId x = id_of(s, "P1@0");
  // slid back by equivariance
  CHECK(s.hom_dim(IndecId{x.orbit, 3}, IndecId{s.parse_id("P2@0").orbit, 3}) == 1);
  // far apart: supports disjoint, exactly zero
  CHECK(s.hom_dim(IndecId{x.orbit, -40}, IndecId{x.orbit, 40}) == 0);
  CHECK_THROWS_AS(s.hom_dim(IndecId{99, 0}, x), std::invalid_argument);
}

TEST_CASE("snapshot save/load round trip") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_test_snapshot.snap";
  save_snapshot(s, path);
  Snapshot t = load_snapshot(path);
  CHECK(t.algebra_name == s.algebra_name);
  CHECK(t.window_lo == s.window_lo);
  CHECK(t.hom == s.hom);
  CHECK(t.catalog.size() == s.catalog.size());
  CHECK(t.k0_basis == s.k0_basis);
  CHECK(t.catalog_closed == s.catalog_closed);
  std::remove(path.c_str());
}

TEST_CASE("loading a Sigma-inequivariant hom table fails") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_test_snapshot_bad.snap";
  save_snapshot(s, path);
  // tamper: change hom(P1@0 ; P2@0) from 1 to 2
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  in.close();
  auto pos = content.find("P1@0 ; P2@0 ; 1");
  REQUIRE(pos != std::string::npos);
  content.replace(pos, 15, "P1@0 ; P2@0 ; 2");
  std::ofstream out(path);
  out << content;
  out.close();
  CHECK_THROWS_WITH_AS(load_snapshot(path), doctest::Contains("equivariant"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("loading a file with a missing suspended triangle flags the catalog") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_test_snapshot_gap.snap";
  save_snapshot(s, path);
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  in.close();
  // drop one interior triangle line whose suspension partner stays
  auto pos = content.find("P1@0 | P2@0 | M1@0");
  REQUIRE(pos != std::string::npos);
  auto eol = content.find('\n', pos);
  content.erase(pos, eol - pos + 1);
  std::ofstream out(path);
  out << content;
  out.close();
  Snapshot t = load_snapshot(path);
  CHECK(!t.catalog_closed);
  std::remove(path.c_str());
}

TEST_CASE("catalog triangles satisfy K0 additivity") {
  const Snapshot& s = ka2().snapshot;
  for (const auto& tri : s.catalog) {
    auto ca = s.k0_class(tri.a), cb = s.k0_class(tri.b), cc = s.k0_class(tri.c);
    for (std::size_t i = 0; i < cb.size(); ++i) CHECK(cb[i] == ca[i] + cc[i]);
  }
  CHECK(!s.catalog.empty());
}

TEST_CASE("formal object parsing round trips") {
  const Snapshot& s = ka2().snapshot;
  FormalObject t = fo(s, "2*P1@0 + P2@-1");
  CHECK(s.parse_formal(s.formal_name(t)) == t);
  CHECK(s.parse_formal("0").is_zero());
  CHECK_THROWS(s.parse_formal("Q9@0"));
}

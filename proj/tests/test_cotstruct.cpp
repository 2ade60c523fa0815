#include <doctest.h>

#include "helpers.hpp"

using namespace costab;
using namespace costab::testing;

namespace {

/// The bounded co-t-structure of the worked kA2 example: the aisle is the
/// zigzag up to y (x, y and everything at lower shifts), the co-aisle starts
/// one suspension later, and the two-term orbit sits in between.
CoTStructure ka2_worked_example(const Snapshot& s) {
  CoTStructure p;
  IndecId x = id_of(s, "P1@0"), y = id_of(s, "P2@0"), z = id_of(s, "M1@0");
  for (const auto& id : s.all_ids()) {
    if (id.shift < 0) p.aisle.insert(id);
    if (id.shift >= 1) p.coaisle.insert(id);
  }
  p.aisle.insert(x);
  p.aisle.insert(y);
  (void)z;
  return p;
}

}  // namespace

TEST_CASE("worked-example co-t-structure passes with co-heart add(x, y)") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoTStructure p = ka2_worked_example(s);
  AxiomReport rep = check_cotstructure(*cat.engine, p);
  CHECK(rep.all_passed());
  std::set<IndecId> c = p.coheart();
  CHECK(c == std::set<IndecId>{id_of(s, "P1@0"), id_of(s, "P2@0")});
}

TEST_CASE("the trivial co-t-structure passes") {
  const Category& cat = ka2();
  CoTStructure p;
  for (const auto& id : cat.snapshot.all_ids()) p.aisle.insert(id);
  AxiomReport rep = check_cotstructure(*cat.engine, p);
  // boundedness needs B too; with B empty the check must fail honestly
  CHECK(!rep.all_passed());
  // aisle = everything, co-aisle = suspensions: the genuine trivial case is
  // A = T, B = 0 only in the unbounded sense; in-window we realize it as
  // a degenerate pair and only (i)/(ii)/(iii) are expected to hold
  bool i_ok = false, ii_ok = false, iii_ok = false;
  for (const auto& [name, v] : rep.checks) {
    if (name.rfind("(i)", 0) == 0) i_ok = v.passed();
    if (name.rfind("(ii)", 0) == 0) ii_ok = v.passed();
    if (name.rfind("(iii)", 0) == 0) iii_ok = v.passed();
  }
  CHECK(i_ok);
  CHECK(ii_ok);
  CHECK(iii_ok);
}

TEST_CASE("aisle of x-shifts with zero co-aisle fails the approximation axiom") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoTStructure p;
  for (int k = s.window_lo; k <= s.window_hi; ++k)
    p.aisle.insert({id_of(s, "P1@0").orbit, k});
  AxiomReport rep = check_cotstructure(*cat.engine, p);
  bool iii_fail = false;
  std::string why;
  for (const auto& [name, v] : rep.checks)
    if (name.rfind("(iii)", 0) == 0) {
      iii_fail = v.state == Verdict::State::Fail;
      why = v.detail;
    }
  CHECK(iii_fail);
  // the exhaustive search reports a definite none for the missing stalk
  CHECK(why.find("P2@") != std::string::npos);
}

TEST_CASE("heart filtrations: single factor, extension, pure suspension") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoTStructure p = ka2_worked_example(s);

  Tower t1 = heart_filtration(*cat.engine, p, fo(s, "P1@0 + P2@0"));
  REQUIRE(t1.size() == 1);
  CHECK(t1.factors[0] == fo(s, "P1@0 + P2@0"));
  CHECK(t1.tags[0] == 0.0);

  Tower t2 = heart_filtration(*cat.engine, p, fo(s, "M1@0"));
  REQUIRE(t2.size() == 2);
  CHECK(t2.factors[0] == fo(s, "P2@0"));
  CHECK(t2.tags[0] == 0.0);
  CHECK(t2.factors[1] == fo(s, "P1@1"));
  CHECK(t2.tags[1] == 1.0);

  Tower t3 = heart_filtration(*cat.engine, p, fo(s, "P2@2"));
  REQUIRE(t3.size() == 1);
  CHECK(t3.tags[0] == 2.0);

  // same orbit at two suspensions: the search discovers the factors in the
  // wrong order, so the reordering step of the construction must fire
  Tower t4 = heart_filtration(*cat.engine, p, fo(s, "P1@0 + P1@2"));
  REQUIRE(t4.size() == 2);
  CHECK(t4.tags[0] == 0.0);
  CHECK(t4.tags[1] == 2.0);
  CHECK(t4.factors[0] == fo(s, "P1@0"));
  CHECK(t4.factors[1] == fo(s, "P1@2"));

  CHECK_THROWS(heart_filtration(*cat.engine, p, FormalObject{}));
}

TEST_CASE("split K0 class: signed vector and Euler image") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoTStructure p = ka2_worked_example(s);
  IndecId x = id_of(s, "P1@0"), y = id_of(s, "P2@0"), z = id_of(s, "M1@0");

  SplitK0Class cls = split_k0_class(*cat.engine, p, FormalObject(z));
  // factors y at 0 and x at 1: vector [y] - [x], image class(y) - class(x)
  REQUIRE(cls.factors.size() == 2);
  CHECK(cls.vector.at(y) == 1);
  CHECK(cls.vector.at(x) == -1);
  CHECK(cls.k0_image == s.k0_class(FormalObject(z)));

  SplitK0Class cx = split_k0_class(*cat.engine, p, FormalObject(x));
  CHECK(cx.vector.at(x) == 1);
  CHECK(cx.factors.size() == 1);

  // well-definedness: randomized search orders give the same answer
  for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
    SplitK0Class again = split_k0_class(*cat.engine, p, FormalObject(z), seed);
    CHECK(again.vector == cls.vector);
    CHECK(again.k0_image == cls.k0_image);
  }
}

TEST_CASE("co-heart enumeration: kA2 includes add(x, y); empty rejected") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoheartEnumeration ce = enumerate_cohearts(s);
  CHECK(ce.complete);
  CHECK(!ce.items.empty());
  bool has_xy = false;
  for (const auto& item : ce.items) {
    CHECK(!item.coheart.empty());
    if (item.coheart == std::set<IndecId>{id_of(s, "P1@0"), id_of(s, "P2@0")}) {
      has_xy = true;
      // its generated co-t-structure agrees with the worked example
      CoTStructure expected = ka2_worked_example(s);
      CHECK(item.cotstructure.aisle == expected.aisle);
    }
  }
  CHECK(has_xy);
}

TEST_CASE("co-heart enumeration on the dual numbers: only shifts of one orbit") {
  const Category& cat = dual3();
  const Snapshot& s = cat.snapshot;
  CoheartEnumeration ce = enumerate_cohearts(s);
  CHECK(ce.complete);
  REQUIRE(ce.items.size() == static_cast<std::size_t>(s.window_hi - s.window_lo + 1));
  for (const auto& item : ce.items) {
    REQUIRE(item.coheart.size() == 1);
    CHECK(s.orbits[item.coheart.begin()->orbit].label == "P1");
  }
}

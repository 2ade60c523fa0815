#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "helpers.hpp"

using namespace costab;
using namespace costab::testing;

TEST_CASE("co-slicing file round trip, rational and float phases") {
  const Snapshot& s = ka2().snapshot;
  CoSlicing q;
  q.orbit_phase[id_of(s, "P2@0").orbit] = Phase::exact(Rat(1, 4));
  q.orbit_phase[id_of(s, "P1@0").orbit] = Phase::approx(0.7512345678901);
  std::string path = "/tmp/costab_test.coslicing";
  save_coslicing(s, q, path);
  CoSlicing r = load_coslicing(s, path);
  CHECK(r.equals(q));
  CHECK(r.orbit_phase.at(id_of(s, "P2@0").orbit).is_exact());
  CHECK(!r.orbit_phase.at(id_of(s, "P1@0").orbit).is_exact());
  std::remove(path.c_str());
}

TEST_CASE("co-slicing file with a malformed phase fails with position info") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_bad.coslicing";
  {
    std::ofstream out(path);
    out << "coslicing-version: 1\nslice: 1.5.2 | P1@0\n";
  }
  CHECK_THROWS(load_coslicing(s, path));
  std::remove(path.c_str());
}

TEST_CASE("co-slicing file with base phase 0 is rejected (phases live in (0,1])") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_zero.coslicing";
  {
    std::ofstream out(path);
    out << "coslicing-version: 1\nslice: 0 | P1@0\n";
  }
  CHECK_THROWS_WITH_AS(load_coslicing(s, path), doctest::Contains("outside (0,1]"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("co-slicing file assigning one orbit twice is rejected") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_dup.coslicing";
  {
    std::ofstream out(path);
    out << "coslicing-version: 1\nslice: 1/4 | P1@0\nslice: 3/4 | P1@1\n";
  }
  CHECK_THROWS_WITH_AS(load_coslicing(s, path), doctest::Contains("two slices"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("co-t-structure file: aisle only, co-aisle derived as the perp") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoTStructure p;
  for (const auto& id : s.all_ids())
    if (id.shift < 0 || (id.shift == 0 && s.orbits[id.orbit].label != "M1"))
      p.aisle.insert(id);
  p.coaisle = perp_of(s, p.aisle);
  std::string path = "/tmp/costab_test.cotstruct";
  save_cotstructure(s, p, path);
  CoTStructure q = load_cotstructure(s, path);
  CHECK(q.aisle == p.aisle);
  CHECK(q.coaisle == p.coaisle);
  // drop the coaisle line: it is derived
  {
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), {});
    in.close();
    auto pos = content.find("coaisle:");
    content.erase(pos);
    std::ofstream out(path);
    out << content;
  }
  CoTStructure q2 = load_cotstructure(s, path);
  CHECK(q2.coaisle == p.coaisle);
  std::remove(path.c_str());
}

TEST_CASE("condition file round trip with referenced co-slicing") {
  const Snapshot& s = ka2().snapshot;
  CoStabilityCondition c = ka2_condition_separated(s);
  std::string path = "/tmp/costab_test.condition";
  save_condition(s, c, path, "costab_test_q.coslicing");
  CoStabilityCondition back = load_condition(s, path);
  CHECK(back.q.equals(c.q));
  for (int i = 0; i < s.k0_rank(); ++i)
    CHECK(std::abs(back.z.on_basis[i] - c.z.on_basis[i]) < 1e-15);
  std::remove(path.c_str());
  std::remove("/tmp/costab_test_q.coslicing");
}

TEST_CASE("charge file: missing basis entry is an error") {
  const Snapshot& s = ka2().snapshot;
  std::string path = "/tmp/costab_bad.charge";
  {
    std::ofstream out(path);
    out << "charge-version: 1\ncharge [P1]: 0.0 1.0\n";
  }
  CHECK_THROWS_WITH_AS(load_charge(s, path), doctest::Contains("missing charge"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("report: verdict lines and failure counting") {
  Report rep("unit");
  rep.field("alpha", 1L);
  rep.check("ok-check", true, "fine");
  rep.check("bad-check", false, "broken");
  CHECK(!rep.all_passed());
  CHECK(rep.failures() == 1);
  std::string text = rep.text();
  CHECK(text.find("report-version: 1") == 0);
  CHECK(text.find("check ok-check: pass | fine") != std::string::npos);
  CHECK(text.find("check bad-check: fail | broken") != std::string::npos);
}

TEST_CASE("demo scenario reports pass end to end (small samples)") {
  TheoremBOptions thb;
  thb.samples = 6;
  Report rb = demo_theorem_b(thb);
  INFO(rb.text());
  CHECK(rb.all_passed());

  CounterexampleOptions cex;
  cex.eps = 0.25;
  Report rc = demo_counterexample(cex);
  INFO(rc.text());
  CHECK(rc.all_passed());
}

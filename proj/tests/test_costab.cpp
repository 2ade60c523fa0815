#include <doctest.h>

#include "helpers.hpp"

using namespace costab;
using namespace costab::testing;

TEST_CASE("phase and mass: boundary and rejection") {
  PhaseMass pm = phase_and_mass({0.0, 1.0});
  CHECK(pm.phase == doctest::Approx(0.5));
  CHECK(pm.mass == doctest::Approx(1.0));
  PhaseMass neg = phase_and_mass({-1.0, 0.0});
  CHECK(neg.phase == doctest::Approx(1.0));  // the boundary phase 1 is included
  CHECK_THROWS_AS(phase_and_mass({0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(phase_and_mass({0.0, -1.0}), std::domain_error);
  CHECK_THROWS_AS(phase_and_mass({1.0, 0.0}), std::domain_error);
  double eps = 0.125;
  PhaseMass moved = phase_and_mass(std::polar(std::cos(M_PI * eps), M_PI * (0.5 + eps)));
  CHECK(moved.phase == doctest::Approx(0.5 + eps));
  CHECK(moved.mass == doctest::Approx(std::cos(M_PI * eps)));
}

TEST_CASE("semistability is a single-phase test on summands") {
  const Snapshot& s = ka2().snapshot;
  CoStabilityFunction f;
  IndecId x = id_of(s, "P1@0"), y = id_of(s, "P2@0");
  f.coheart = {x, y};
  SUBCASE("equal phases: the sum is semistable") {
    f.values[x] = {0.0, 1.0};
    f.values[y] = {0.0, 1.0};
    CHECK(is_semistable(s, f, fo(s, "P1@0 + P2@0")));
  }
  SUBCASE("distinct phases: the sum is not") {
    f.values[x] = std::polar(1.0, 3 * M_PI / 4);
    f.values[y] = std::polar(1.0, M_PI / 4);
    CHECK(is_semistable(s, f, fo(s, "P1@0")));
    CHECK(!is_semistable(s, f, fo(s, "P1@0 + P2@0")));
    CHECK_THROWS(is_semistable(s, f, FormalObject{}));
  }
}

TEST_CASE("split HN: passes when hom points up the phases, witness otherwise") {
  const Snapshot& s = ka2().snapshot;
  IndecId x = id_of(s, "P1@0"), y = id_of(s, "P2@0");
  CoStabilityFunction f;
  f.coheart = {x, y};
  f.values[x] = std::polar(1.0, 3 * M_PI / 4);  // phase 3/4
  f.values[y] = std::polar(1.0, M_PI / 4);      // phase 1/4
  CHECK(check_split_HN(s, f).holds);            // hom(y, x) = 0

  CoStabilityFunction g = f;
  g.values[x] = std::polar(1.0, M_PI / 4);
  g.values[y] = std::polar(1.0, 3 * M_PI / 4);
  SplitHNReport rep = check_split_HN(s, g);
  CHECK(!rep.holds);
  REQUIRE(rep.witness);
  CHECK(rep.witness->first == x);
  CHECK(rep.witness->second == y);

  auto groups = hn_decompose(s, f, fo(s, "P1@0 + P2@0"));
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].first == doctest::Approx(0.25));
  CHECK(groups[0].second == fo(s, "P2@0"));
  CHECK(groups[1].second == fo(s, "P1@0"));
}

TEST_CASE("pack builds the clustered condition from the worked example data") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition c = ka2_condition_clustered(s);
  auto [p, f] = unpack(*cat.engine, c);
  CHECK(f.coheart.size() == 2);
  CoStabilityCondition again = pack(s, p, f);
  CHECK(again.q.equals(c.q));
  for (int i = 0; i < s.k0_rank(); ++i)
    CHECK(std::abs(again.z.on_basis[i] - c.z.on_basis[i]) < 1e-12);
}

TEST_CASE("pack refuses without the split HN property") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition good = ka2_condition_separated(s);
  auto [p, f] = unpack(*cat.engine, good);
  CoStabilityFunction bad = f;
  // swap the two phases: now hom points down
  IndecId x = id_of(s, "P1@0"), y = id_of(s, "P2@0");
  std::swap(bad.values.at(x), bad.values.at(y));
  CHECK_THROWS_AS(pack(s, p, bad), PackRefused);
}

TEST_CASE("pack/unpack round trips on generated valid inputs") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  Rng rng(5);
  int done = 0;
  for (int trial = 0; trial < 30 && done < 12; ++trial) {
    // random charge on the separated slicing pattern
    double py = rng.uniform(0.05, 0.45), px = rng.uniform(py + 0.05, 0.95);
    CoStabilityCondition c;
    c.q.orbit_phase[id_of(s, "P2@0").orbit] = Phase::approx(py);
    c.q.orbit_phase[id_of(s, "P1@0").orbit] = Phase::approx(px);
    c.z.on_basis.assign(2, {0, 0});
    c.z.on_basis[id_of(s, "P1@0").orbit] = std::polar(std::exp(rng.uniform(-1, 1)), M_PI * px);
    c.z.on_basis[id_of(s, "P2@0").orbit] = std::polar(std::exp(rng.uniform(-1, 1)), M_PI * py);
    REQUIRE(validate_condition(s, c).passed());
    auto [p, f] = unpack(*cat.engine, c);
    CoStabilityCondition back = pack(s, p, f);
    CHECK(back.q.equals(c.q));
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(back.z.on_basis[i] - c.z.on_basis[i]) < 1e-12);
    // and the other direction: pack then unpack returns the same pair
    auto [p2, f2] = unpack(*cat.engine, back);
    CHECK(p2.aisle == p.aisle);
    CHECK(f2.coheart == f.coheart);
    ++done;
  }
  CHECK(done == 12);
}

TEST_CASE("separation: equal charges below distance 1/2 coincide") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition c = ka2_condition_separated(s);
  SeparationResult self = separation_check(s, c, c);
  CHECK(self.applicable);
  CHECK(self.separated);
  // moving one slice with the charge fixed produces an invalid condition,
  // so no violation can be formed this way
  CoStabilityCondition moved = c;
  moved.q.orbit_phase[id_of(s, "P1@0").orbit] = Phase::exact(Rat(4, 5));
  CHECK(!validate_condition(s, moved).passed());
}

TEST_CASE("deform: the worked small deformation and the zero deformation") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition c = ka2_condition_separated(s);
  double eps0 = epsilon0(c.q);
  double delta = 0.05;

  CentralCharge w = c.z;
  w.on_basis[id_of(s, "P1@0").orbit] = std::polar(1.0, M_PI * (0.75 + delta));
  DeformOutcome out = deform(*cat.engine, c, w, eps0 / 2);
  CHECK(!out.refused);
  CHECK(out.distance == doctest::Approx(delta));
  CHECK(out.axioms_ok);
  CHECK(out.condition_s_ok);
  CHECK(out.validity_ok);
  CHECK(out.result.q.phase_of(id_of(s, "P1@0"))->value() == doctest::Approx(0.75 + delta));

  DeformOutcome same = deform(*cat.engine, c, c.z, eps0 / 2);
  CHECK(!same.refused);
  CHECK(same.distance == 0.0);
  CHECK(same.result.q.equals(c.q));

  // eps beyond eps0 is refused up front
  DeformOutcome toobig = deform(*cat.engine, c, w, eps0 * 1.5);
  CHECK(toobig.refused);

  // charge violating the bound is refused with a witness
  CentralCharge far = c.z;
  far.on_basis[id_of(s, "P1@0").orbit] = std::polar(1.0, M_PI * 0.97);
  DeformOutcome viol = deform(*cat.engine, c, far, eps0 / 2);
  CHECK(viol.refused);
}

TEST_CASE("deform refuses the clustered condition for lack of condition (S)") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition c = ka2_condition_clustered(s);
  DeformOutcome out = deform(*cat.engine, c, ka2_deformation_charge(s, 0.1), 0.2);
  CHECK(out.refused);
  CHECK(out.refusal.find("condition (S)") != std::string::npos);
}

TEST_CASE("group actions: suspension, identity, dual-numbers formula") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition c = ka2_condition_separated(s);

  CoStabilityCondition sh = act_shift(s, 1, c);
  CHECK(sh.z.on_basis[0] == -c.z.on_basis[0]);
  // slices move with the ids: phase of the shift-0 representative drops by 1
  CHECK(sh.q.orbit_phase.begin()->second.value() ==
        doctest::Approx(c.q.orbit_phase.begin()->second.value() - 1.0));

  GElement idg(std::complex<double>(1.0, 0.0), 0.0);
  CoStabilityCondition same = act_g(s, c, idg);
  CHECK(same.q.equals(c.q));
  CHECK(same.z.on_basis == c.z.on_basis);

  CHECK_THROWS_AS(GElement({1.0, 0.0}, 0.5), std::invalid_argument);

  // dual numbers: (z0, phi0) . (T, f) = (z0 / lambda, phi0 - a)
  const Category& dc = dual3();
  CoStabilityCondition d0 = dual_condition(dc.snapshot, std::polar(2.0, M_PI * 0.3));
  GElement g(std::polar(0.5, M_PI * 0.7), 0.7);
  CoStabilityCondition d1 = act_g(dc.snapshot, d0, g);
  CHECK(std::abs(d1.z.on_basis[0] - d0.z.on_basis[0] / g.lambda) < 1e-12);
  CHECK(d1.q.orbit_phase.begin()->second.value() == doctest::Approx(0.3 - 0.7));

  // left and right actions commute
  CoStabilityCondition lr = act_g(s, act_shift(s, 1, c), g);
  CoStabilityCondition rl = act_shift(s, 1, act_g(s, c, g));
  CHECK(lr.q.equals(rl.q));
  for (int i = 0; i < 2; ++i) CHECK(std::abs(lr.z.on_basis[i] - rl.z.on_basis[i]) < 1e-12);
}

TEST_CASE("chart sampling: dimension, success, injectivity; radius clipping") {
  const Category& cat = dual3();
  CoStabilityCondition c = dual_condition(cat.snapshot, {0.3, 1.2});
  Rng rng(11);
  ChartReport rep = chart_sample(*cat.engine, c, 10.0, 12, rng);
  CHECK(rep.k0_rank == 1);
  CHECK(rep.dimension == 2);
  CHECK(rep.clipped);  // requested radius above the deformation bound
  CHECK(rep.all_ok);
  CHECK(rep.injective);
  CHECK(rep.samples.size() == 12);
  std::string csv = rep.csv();
  CHECK(csv.find("re_W0") != std::string::npos);

  // zero radius: every sample returns the original slicing
  Rng rng2(12);
  ChartReport zero = chart_sample(*cat.engine, c, 0.0, 5, rng2);
  for (const auto& smp : zero.samples) {
    CHECK(smp.ok);
    CHECK(smp.distance == 0.0);
  }
}

TEST_CASE("counterexample scan agrees with deform on the separated condition") {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  CoStabilityCondition c = ka2_condition_separated(s);
  CentralCharge w = c.z;
  w.on_basis[id_of(s, "P1@0").orbit] = std::polar(1.0, M_PI * 0.78);
  ScanResult scan = counterexample_scan(*cat.engine, c, w);
  CHECK(scan.exists);
  DeformOutcome d = deform(*cat.engine, c, w, epsilon0(c.q) / 2);
  REQUIRE(!d.refused);
  CHECK(scan.found->q.equals(d.result.q));
}

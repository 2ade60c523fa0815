// Acceptance suite: every criterion runs at its stated tolerance and prints
// one pass/fail line. The process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "costab/demos.hpp"
#include "costab/rng.hpp"

using namespace costab;

namespace {

struct Gate {
  int failures = 0;

  void run(const char* name, double budget_s, const std::function<bool(std::string&)>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = budget_s <= 0 || secs < budget_s;
    if (!in_budget) detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    bool pass = ok && in_budget;
    std::printf("%-4s %-38s %-4s (%6.2f s)%s%s\n", pass ? "PASS" : "FAIL", name,
                pass ? "ok" : "!!", secs, detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

const Category& ka2() {
  static Category cat = build_category(make_ka2(), {});
  return cat;
}
const Category& dual3() {
  static Category cat = [] {
    BuildOptions bo;
    bo.width_bound = 3;
    return build_category(make_dual_numbers(), bo);
  }();
  return cat;
}

CoSlicing random_ka2_coslicing(const Snapshot& s, Rng& rng) {
  // valid iff the P2 phase does not exceed the P1 phase; a common integer
  // translation keeps validity
  CoSlicing q;
  int off = rng.range(-1, 1);
  Rat py(rng.range(1, 60), 61);
  Rat px = py + Rat(rng.range(0, 59), 61);
  q.orbit_phase[s.parse_id("P2@0").orbit] = Phase::exact(py + off);
  q.orbit_phase[s.parse_id("P1@0").orbit] = Phase::exact(px + off);
  // occasionally a single-orbit slicing
  if (rng.range(0, 9) == 0) q.orbit_phase.erase(s.parse_id("P2@0").orbit);
  return q;
}

CoSlicing random_dual_coslicing(const Snapshot& s, Rng& rng) {
  CoSlicing q;
  q.orbit_phase[s.parse_id("P1@0").orbit] =
      Phase::exact(Rat(rng.range(1, 60), 61) + rng.range(-1, 1));
  return q;
}

CoStabilityCondition random_ka2_condition(const Snapshot& s, Rng& rng) {
  double py = rng.uniform(0.05, 0.45), px = rng.uniform(py, 0.95);
  CoStabilityCondition c;
  c.q.orbit_phase[s.parse_id("P2@0").orbit] = Phase::approx(py);
  c.q.orbit_phase[s.parse_id("P1@0").orbit] = Phase::approx(px);
  c.z.on_basis.assign(2, {0, 0});
  c.z.on_basis[s.parse_id("P1@0").orbit] =
      std::polar(std::exp(rng.uniform(-1, 1)), M_PI * px);
  c.z.on_basis[s.parse_id("P2@0").orbit] =
      std::polar(std::exp(rng.uniform(-1, 1)), M_PI * py);
  return c;
}

bool criterion_hom_oracle(std::string& detail) {
  const Snapshot& s = ka2().snapshot;
  IndecId x = s.parse_id("P1@0"), y = s.parse_id("P2@0"), z = s.parse_id("M1@0");
  if (s.hom_dim(x, y) != 1) { detail = "hom(x,y) != 1"; return false; }
  if (s.hom_dim(y, x) != 0) { detail = "hom(y,x) != 0"; return false; }
  if (s.hom_dim(z, x.suspended()) != 1) { detail = "hom(z,Sx) != 1"; return false; }
  if (s.hom_dim(x, x.suspended()) != 0) { detail = "hom(x,Sx) != 0"; return false; }
  int pairs = 0;
  for (const auto& a : s.all_ids())
    for (const auto& b : s.all_ids()) {
      IndecId sa = a.suspended(), sb = b.suspended();
      if (!s.in_window(sa) || !s.in_window(sb)) continue;
      if (s.hom_dim(a, b) != s.hom_dim(sa, sb)) {
        detail = "equivariance fails at " + s.id_name(a) + " -> " + s.id_name(b);
        return false;
      }
      ++pairs;
    }
  detail = "4 pinned values + equivariance on " + std::to_string(pairs) + " pairs";
  return true;
}

bool criterion_metric_axioms(std::string& detail) {
  Rng rng(101);
  int triples = 0;
  for (const Category* cat : {&ka2(), &dual3()}) {
    const Snapshot& s = cat->snapshot;
    for (int t = 0; t < 55; ++t) {
      CoSlicing a, b, c;
      if (s.k0_rank() == 2) {
        a = random_ka2_coslicing(s, rng);
        b = random_ka2_coslicing(s, rng);
        c = random_ka2_coslicing(s, rng);
      } else {
        a = random_dual_coslicing(s, rng);
        b = random_dual_coslicing(s, rng);
        c = random_dual_coslicing(s, rng);
      }
      MetricResult ab = metric(s, a, b), ba = metric(s, b, a);
      if (ab.value != ba.value || ab.exact != ba.exact) {
        detail = "symmetry violated";
        return false;
      }
      MetricResult ac = metric(s, a, c), cb = metric(s, c, b);
      if (ab.exact && ac.exact && cb.exact &&
          !(ab.value <= ac.value + cb.value + 1e-9)) {
        detail = "triangle inequality violated";
        return false;
      }
      if (metric(s, a, a).value != 0.0) { detail = "d(a,a) != 0"; return false; }
      if (ab.exact && ab.value == 0.0 && !a.equals(b)) {
        detail = "d = 0 but slicings differ";
        return false;
      }
      if (a.equals(b) && !(metric(s, a, b).value == 0.0)) {
        detail = "equal slicings at positive distance";
        return false;
      }
      ++triples;
    }
  }
  detail = std::to_string(triples) + " generated triples on both snapshots";
  return triples >= 100;
}

bool criterion_orthogonality(std::string& detail) {
  const Category& cat = ka2();
  Rng rng(202);
  std::vector<CoSlicing> qs;
  for (int i = 0; i < 4; ++i) qs.push_back(random_ka2_coslicing(cat.snapshot, rng));
  qs.push_back(ka2_condition_clustered(cat.snapshot).q);
  qs.push_back(ka2_condition_separated(cat.snapshot).q);
  int instances = 0;
  for (const auto& q : qs)
    for (auto [a, b] : std::vector<std::pair<double, double>>{
             {0.0, 0.5}, {0.25, 0.75}, {0.5, 1.5}, {-0.5, 0.5}}) {
      OrthogonalityReport rep = orthogonality_identity(*cat.engine, q, a, b);
      if (!rep.holds) {
        detail = "discrepancy: " + rep.discrepancies.front();
        return false;
      }
      ++instances;
    }
  detail = std::to_string(instances) + " (Q, a, b) instances, zero discrepancies";
  return instances >= 20;
}

bool criterion_pack_unpack(std::string& detail) {
  Rng rng(303);
  int done = 0;
  for (int t = 0; t < 35; ++t) {
    const Category& cat = ka2();
    CoStabilityCondition c = random_ka2_condition(cat.snapshot, rng);
    if (!validate_condition(cat.snapshot, c).passed()) continue;
    auto [p, f] = unpack(*cat.engine, c);
    CoStabilityCondition back = pack(cat.snapshot, p, f);
    if (!back.q.equals(c.q)) { detail = "slicing changed by the round trip"; return false; }
    for (std::size_t i = 0; i < c.z.on_basis.size(); ++i)
      if (std::abs(back.z.on_basis[i] - c.z.on_basis[i]) > 1e-12) {
        detail = "charge drifted beyond 1e-12";
        return false;
      }
    auto [p2, f2] = unpack(*cat.engine, back);
    if (p2.aisle != p.aisle || p2.coaisle != p.coaisle || f2.coheart != f.coheart) {
      detail = "co-t-structure changed by the round trip";
      return false;
    }
    for (const auto& id : f.coheart)
      if (std::abs(f2.values.at(id) - f.values.at(id)) > 1e-12) {
        detail = "co-heart charge drifted beyond 1e-12";
        return false;
      }
    ++done;
  }
  for (int t = 0; t < 20; ++t) {
    const Category& cat = dual3();
    CoStabilityCondition c =
        dual_condition(cat.snapshot, std::polar(std::exp(rng.uniform(-1, 1)),
                                                M_PI * rng.uniform(0.05, 0.95)));
    auto [p, f] = unpack(*cat.engine, c);
    CoStabilityCondition back = pack(cat.snapshot, p, f);
    if (!back.q.equals(c.q) || std::abs(back.z.on_basis[0] - c.z.on_basis[0]) > 1e-12) {
      detail = "dual-numbers round trip failed";
      return false;
    }
    ++done;
  }
  detail = std::to_string(done) + " generated valid inputs";
  return done >= 50;
}

bool criterion_deformation(std::string& detail) {
  int total = 0;
  int swaps = 0, coalesces = 0;
  for (const Category* cat : {&ka2(), &dual3()}) {
    const Snapshot& s = cat->snapshot;
    CoStabilityCondition c = (s.k0_rank() == 2) ? ka2_condition_separated(s)
                                                : dual_condition(s, {0.25, 1.3});
    double eps0 = epsilon0(c.q);
    double eps = eps0 / 2.0;
    Rng rng(404 + s.k0_rank());
    for (int t = 0; t < 100; ++t) {
      CentralCharge w = c.z;
      for (auto& z : w.on_basis) {
        double rho = 0.95 * std::sin(M_PI * eps) * rng.unit();
        double th = 2.0 * M_PI * rng.unit();
        z *= std::complex<double>(1.0 + rho * std::cos(th), rho * std::sin(th));
      }
      DeformOutcome out = deform(*cat->engine, c, w, eps);
      if (out.refused) { detail = "refused: " + out.refusal; return false; }
      if (!out.axioms_ok || !out.condition_s_ok || !out.validity_ok) {
        detail = "output failed validation";
        return false;
      }
      if (!(out.distance < eps)) { detail = "d(Q,R) >= eps"; return false; }
      swaps += out.swaps_performed;
      coalesces += out.coalesces_performed;
      ++total;
    }
  }
  detail = std::to_string(total) + " random charges within the strict bound; every "
           "exchange precondition held (" + std::to_string(swaps) + " swaps, " +
           std::to_string(coalesces) + " merges performed)";
  return total == 200;
}

bool criterion_separation(std::string& detail) {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  Rng rng(505);
  long trials = 0;
  // cheap randomized trials: perturb the slicing while keeping the charge
  for (int t = 0; t < 1000; ++t) {
    CoStabilityCondition c = random_ka2_condition(s, rng);
    if (!validate_condition(s, c).passed()) continue;
    CoStabilityCondition r = c;
    int which = rng.range(0, 1);
    auto it = r.q.orbit_phase.begin();
    if (which) ++it;
    switch (rng.range(0, 2)) {
      case 0: it->second = Phase::approx(it->second.value() + rng.uniform(-0.4, 0.4)); break;
      case 1: it->second = it->second.plus_int(2 * rng.range(1, 2)); break;
      default: r.q.orbit_phase.erase(it); break;
    }
    ++trials;
    if (!validate_condition(s, r).passed()) continue;  // not a valid rival
    MetricResult d = metric(s, c.q, r.q);
    if (!d.ge_half && !c.q.equals(r.q)) {
      detail = "violation: same charge, d = " + std::to_string(d.value) + " < 1/2";
      return false;
    }
  }
  // exhaustive rival search through the forced-phase scan on a subsample
  int scans = 0;
  for (int t = 0; t < 25; ++t) {
    CoStabilityCondition c = random_ka2_condition(s, rng);
    if (!validate_condition(s, c).passed()) continue;
    ScanResult scan = counterexample_scan(*cat.engine, c, c.z);
    if (!scan.exists || !scan.found->q.equals(c.q)) {
      detail = "scan failed to recover Q uniquely";
      return false;
    }
    ++scans;
    ++trials;
  }
  detail = std::to_string(trials) + " randomized trials + " + std::to_string(scans) +
           " exhaustive rival scans, no violation";
  return trials >= 1000;
}

bool criterion_theorem_b(std::string& detail) {
  TheoremBOptions opt;
  opt.samples = 50;
  opt.seed = 7;
  Report rep = demo_theorem_b(opt);
  if (!rep.all_passed()) {
    detail = "demo report has failures:\n" + rep.text();
    return false;
  }
  detail = "co-hearts = shifts of one orbit, K0 rank 1, chart dim 2, free+transitive on 50";
  return true;
}

bool criterion_counterexample(std::string& detail) {
  for (double eps : {0.1, 0.25, 0.49}) {
    CounterexampleOptions opt;
    opt.eps = eps;
    Report rep = demo_counterexample(opt);
    if (!rep.all_passed()) {
      detail = "eps = " + std::to_string(eps) + ":\n" + rep.text();
      return false;
    }
    // the forcing trace must name the two forced phases and the bad Hom
    std::string text = rep.text();
    if (text.find("phase forced to") == std::string::npos ||
        text.find("hom(") == std::string::npos) {
      detail = "forcing trace incomplete";
      return false;
    }
  }
  detail = "condition (S) witness + no (W,R) within 1/2 for eps in {0.1, 0.25, 0.49}";
  return true;
}

bool criterion_split_k0(std::string& detail) {
  const Category& cat = ka2();
  const Snapshot& s = cat.snapshot;
  // worked-example co-t-structure
  CoTStructure p;
  for (const auto& id : s.all_ids()) {
    if (id.shift < 0) p.aisle.insert(id);
    if (id.shift >= 1) p.coaisle.insert(id);
  }
  p.aisle.insert(s.parse_id("P1@0"));
  p.aisle.insert(s.parse_id("P2@0"));

  Rng rng(606);
  std::vector<IndecId> ids = s.all_ids();
  int done = 0;
  for (int t = 0; t < 50; ++t) {
    FormalObject obj;
    int n = 1 + rng.range(0, 2);
    for (int i = 0; i < n; ++i) obj.add(ids[rng.range(0, static_cast<int>(ids.size()) - 1)]);
    SplitK0Class base = split_k0_class(*cat.engine, p, obj, 1);
    SplitK0Class again = split_k0_class(*cat.engine, p, obj, 977 + t);
    if (base.vector != again.vector || base.k0_image != again.k0_image) {
      detail = "split class depends on the search order at " + s.formal_name(obj);
      return false;
    }
    if (base.k0_image != s.k0_class(obj)) {
      detail = "split class image differs from the Euler class at " + s.formal_name(obj);
      return false;
    }
    ++done;
  }
  detail = std::to_string(done) + " objects, order-invariant with exact Euler image";
  return done >= 50;
}

}  // namespace

int main() {
  std::printf("acceptance suite (window [-2,2]; kA2 width 2, dual numbers width 3)\n");
  Gate g;
  g.run("C1 hom-oracle kA2", 10, criterion_hom_oracle);
  g.run("C2 metric axioms (>=100 triples)", 60, criterion_metric_axioms);
  g.run("C3 orthogonality identity (>=20)", 0, criterion_orthogonality);
  g.run("C4 pack/unpack round trips (>=50)", 0, criterion_pack_unpack);
  g.run("C5 deformation (2 x 100 charges)", 300, criterion_deformation);
  g.run("C6 separation (>=1000 trials)", 0, criterion_separation);
  g.run("C7 theorem-B desk scale", 0, criterion_theorem_b);
  g.run("C8 counterexample scan", 60, criterion_counterexample);
  g.run("C9 split-K0 well-definedness (>=50)", 0, criterion_split_k0);
  if (g.failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g.failures);
  return 1;
}

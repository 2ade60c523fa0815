#include "costab/costab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "costab/par.hpp"

namespace costab {

namespace {

/// Difference of arguments-over-pi, normalized to (-1, 1].
double angdiff(double a, double b) {
  double d = std::fmod(a - b, 2.0);
  if (d > 1.0) d -= 2.0;
  if (d <= -1.0) d += 2.0;
  return d;
}

/// The phase psi with z = m exp(i pi psi), m > 0, chosen in ref + (-1, 1].
double phase_near(std::complex<double> z, double ref) {
  double raw = std::atan2(z.imag(), z.real()) / M_PI;
  return ref + angdiff(raw, ref);
}

std::string cplx_str(std::complex<double> z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

PhaseMass phase_and_mass(std::complex<double> z) {
  double m = std::abs(z);
  if (m == 0.0) throw std::domain_error("phase undefined: Z vanishes");
  double phi = std::atan2(z.imag(), z.real()) / M_PI;
  if (phi <= 0.0 || phi > 1.0)
    throw std::domain_error("value " + cplx_str(z) + " is not in the strict upper half plane");
  return {phi, m};
}

bool in_upper_half_plane(std::complex<double> z) {
  if (std::abs(z) == 0.0) return false;
  double phi = std::atan2(z.imag(), z.real()) / M_PI;
  return phi > 0.0 && phi <= 1.0;
}

Verdict validate_costability_function(const CoStabilityFunction& f) {
  Verdict v;
  for (const auto& id : f.coheart) {
    auto it = f.values.find(id);
    if (it == f.values.end()) {
      v.state = Verdict::State::Fail;
      v.detail = "missing charge value on a co-heart object";
      return v;
    }
    if (!in_upper_half_plane(it->second)) {
      v.state = Verdict::State::Fail;
      v.detail = "charge value " + cplx_str(it->second) + " outside H";
      return v;
    }
  }
  return v;
}

bool is_semistable(const Snapshot& s, const CoStabilityFunction& f, const FormalObject& a) {
  if (a.is_zero()) throw std::invalid_argument("is_semistable: zero object");
  std::optional<double> phi;
  for (const auto& [id, k] : a.mult()) {
    double p = f.phase_of(id);
    if (!phi) phi = p;
    else if (std::abs(*phi - p) > kTauPhase) return false;
  }
  (void)s;
  return true;
}

SplitHNReport check_split_HN(const Snapshot& s, const CoStabilityFunction& f) {
  SplitHNReport rep;
  for (const auto& a1 : f.coheart)
    for (const auto& a2 : f.coheart) {
      if (a1 == a2) continue;
      double p1 = f.phase_of(a1), p2 = f.phase_of(a2);
      if (p1 < p2 - kTauPhase && s.hom_dim(a1, a2) != 0) {
        rep.holds = false;
        rep.witness = {a1, a2};
        rep.detail = "hom(" + s.id_name(a1) + ", " + s.id_name(a2) + ") != 0 with phase " +
                     std::to_string(p1) + " < " + std::to_string(p2);
        return rep;
      }
    }
  rep.detail = "(i) holds; (ii) is vacuous in a Krull-Schmidt category";
  return rep;
}

std::vector<std::pair<double, FormalObject>> hn_decompose(const Snapshot& s,
                                                          const CoStabilityFunction& f,
                                                          const FormalObject& a) {
  if (a.is_zero()) throw std::invalid_argument("hn_decompose: zero object");
  std::vector<std::pair<double, FormalObject>> groups;
  for (const auto& [id, k] : a.mult()) {
    double p = f.phase_of(id);
    bool placed = false;
    for (auto& [ph, fo] : groups)
      if (std::abs(ph - p) <= kTauPhase) {
        fo.add(id, k);
        placed = true;
        break;
      }
    if (!placed) {
      FormalObject fo;
      fo.add(id, k);
      groups.push_back({p, fo});
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  (void)s;
  return groups;
}

Verdict validate_condition(const Snapshot& s, const CoStabilityCondition& c) {
  Verdict v;
  if (static_cast<int>(c.z.on_basis.size()) != s.k0_rank()) {
    v.state = Verdict::State::Fail;
    v.detail = "charge has wrong rank";
    return v;
  }
  for (const auto& id : c.q.members_in_window(s)) {
    double phi = c.q.phase_of(id)->value();
    std::complex<double> z = c.z.eval(s, FormalObject(id));
    if (std::abs(z) == 0.0) {
      v.state = Verdict::State::Fail;
      v.detail = "Z(" + s.id_name(id) + ") = 0";
      return v;
    }
    double psi = phase_near(z, phi);
    if (std::abs(psi - phi) > kTauPhase) {
      v.state = Verdict::State::Fail;
      v.detail = "arg Z(" + s.id_name(id) + ")/pi = " + std::to_string(psi) +
                 " but slice phase is " + std::to_string(phi);
      return v;
    }
  }
  return v;
}

AxiomReport validate_condition_full(const CategoryEngine& eng, const CoStabilityCondition& c) {
  AxiomReport rep = check_axioms(eng, c.q);
  rep.checks.push_back({"charge/slicing pairing", validate_condition(eng.snapshot(), c)});
  return rep;
}

CoStabilityCondition pack(const Snapshot& s, const CoTStructure& p,
                          const CoStabilityFunction& f) {
  Verdict fv = validate_costability_function(f);
  if (!fv.passed()) throw PackRefused("invalid co-stability function: " + fv.detail);
  SplitHNReport hn = check_split_HN(s, f);
  if (!hn.holds) throw PackRefused("split HN property fails: " + hn.detail);
  if (!(p.coheart() == f.coheart))
    throw PackRefused("function is not defined on the co-heart of the co-t-structure");

  CoStabilityCondition c;
  for (const auto& id : f.coheart) {
    double phi = phase_and_mass(f.values.at(id)).phase;
    c.q.orbit_phase[id.orbit] = Phase::approx(phi - id.shift);
  }

  // lift Z through the split-K0 isomorphism: solve for basis values
  const int n = s.k0_rank();
  if (static_cast<int>(f.coheart.size()) != n)
    throw PackRefused("co-heart size differs from the K0 rank");
  std::vector<std::vector<std::complex<double>>> m(n,
      std::vector<std::complex<double>>(n + 1));
  int row = 0;
  for (const auto& id : f.coheart) {
    auto cls = s.k0_class(FormalObject(id));
    for (int i = 0; i < n; ++i) m[row][i] = static_cast<double>(cls[i]);
    m[row][n] = f.values.at(id);
    ++row;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12)
      throw PackRefused("co-heart classes do not form a K0 basis");
    std::swap(m[piv], m[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      std::complex<double> fct = m[r][col] / m[col][col];
      for (int cc = col; cc <= n; ++cc) m[r][cc] -= fct * m[col][cc];
    }
  }
  c.z.on_basis.resize(n);
  for (int i = 0; i < n; ++i) c.z.on_basis[i] = m[i][n] / m[i][i];
  return c;
}

std::pair<CoTStructure, CoStabilityFunction> unpack(const CategoryEngine& eng,
                                                    const CoStabilityCondition& c) {
  const Snapshot& s = eng.snapshot();
  Verdict v = validate_condition(s, c);
  if (!v.passed()) throw std::invalid_argument("unpack: invalid condition: " + v.detail);
  CoTStructure p = induced_cotstructure(eng, c.q);
  CoStabilityFunction f;
  f.coheart = p.coheart();
  for (const auto& id : f.coheart) f.values[id] = c.z.eval(s, FormalObject(id));
  // the co-heart must be the additive hull of the (0,1] slices
  std::set<IndecId> from_slices;
  for (const auto& [ph, ids] : c.q.base_slices())
    for (const auto& id : ids)
      if (s.in_window(id)) from_slices.insert(id);
  if (!(from_slices == f.coheart))
    throw TheoremViolation("unpack: co-heart differs from the (0,1] slices");
  return {p, f};
}

SeparationResult separation_check(const Snapshot& s, const CoStabilityCondition& c1,
                                  const CoStabilityCondition& c2) {
  SeparationResult out;
  if (!(c1.z == c2.z)) {
    out.detail = "charges differ; separation statement does not apply";
    return out;
  }
  MetricResult d = metric(s, c1.q, c2.q);
  if (d.ge_half) {
    out.detail = "d(Q, R) >= 1/2; separation statement does not apply";
    return out;
  }
  out.applicable = true;
  out.separated = c1.q.equals(c2.q);
  if (!out.separated)
    out.detail = "VIOLATION: equal charges and d = " + std::to_string(d.value) +
                 " < 1/2 but distinct co-slicings";
  else
    out.detail = "d = " + std::to_string(d.value) + " and the co-slicings coincide";
  return out;
}

namespace {

/// All single-slice sums with total multiplicity in [1, bound]; used to check
/// the deformation inequality on more than just the indecomposables.
void for_each_slice_sum(const Snapshot& s, const CoSlicing& q, int bound,
                        const std::function<void(const FormalObject&)>& fn) {
  // group in-window members by slice phase
  std::vector<std::pair<double, std::vector<IndecId>>> slices;
  for (const auto& id : q.members_in_window(s)) {
    double p = q.phase_of(id)->value();
    bool placed = false;
    for (auto& [ph, ids] : slices)
      if (std::abs(ph - p) <= kTauPhase) {
        ids.push_back(id);
        placed = true;
        break;
      }
    if (!placed) slices.push_back({p, {id}});
  }
  for (const auto& [ph, ids] : slices) {
    std::function<void(std::size_t, int, FormalObject&)> rec =
        [&](std::size_t i, int left, FormalObject& acc) {
          if (!acc.is_zero()) fn(acc);
          if (left == 0 || i >= ids.size()) return;
          for (std::size_t j = i; j < ids.size(); ++j) {
            acc.add(ids[j]);
            rec(j, left - 1, acc);
            acc.add(ids[j], -1);
          }
        };
    FormalObject acc;
    rec(0, bound, acc);
  }
}

}  // namespace

DeformOutcome deform(const CategoryEngine& eng, const CoStabilityCondition& c,
                     const CentralCharge& w, double eps, DeformOptions opt) {
  const Snapshot& s = eng.snapshot();
  DeformOutcome out;
  out.eps = eps;

  ConditionSResult cs = check_condition_S(s, c.q);
  if (!cs.holds) {
    out.refused = true;
    out.refusal = "condition (S) fails (Def. of (S)): " + cs.detail;
    return out;
  }
  out.eps0 = epsilon0(c.q);
  if (!(eps > 0.0) || eps > out.eps0) {
    out.refused = true;
    out.refusal = "eps = " + std::to_string(eps) + " outside (0, eps0], eps0 = " +
                  std::to_string(out.eps0) +
                  " (finite-support bound on slice phases)";
    return out;
  }
  // |W(q) - Z(q)| < sin(pi eps) |Z(q)| over single-slice sums
  const double se = std::sin(M_PI * eps);
  std::optional<std::string> bad;
  for_each_slice_sum(s, c.q, opt.sum_multiplicity_bound, [&](const FormalObject& fo) {
    if (bad) return;
    auto cls = s.k0_class(fo);
    std::complex<double> z = c.z.eval_class(cls), ww = w.eval_class(cls);
    if (!(std::abs(ww - z) < se * std::abs(z)))
      bad = s.formal_name(fo) + ": |W - Z| = " + std::to_string(std::abs(ww - z)) +
            " !< sin(pi eps)|Z| = " + std::to_string(se * std::abs(z));
  });
  if (bad) {
    out.refused = true;
    out.refusal = "deformation inequality fails at " + *bad;
    return out;
  }

  // the deformed co-slicing: every slice member keeps its orbit, phase moves
  // to arg(W)/pi near the old phase
  CoSlicing r;
  for (const auto& [orb, ph] : c.q.orbit_phase) {
    std::complex<double> z = w.eval(s, FormalObject(IndecId{orb, 0}));
    double phi0 = ph.value();
    double psi0 = phase_near(z, phi0);
    if (!(std::abs(psi0 - phi0) < eps))
      throw TheoremViolation("deform: phase moved by >= eps despite the inequality");
    if (opt.snap_rational_phases) {
      double snapped = std::nearbyint(psi0 * 840.0) / 840.0;
      if (std::abs(snapped - psi0) < kTauPhase) {
        r.orbit_phase[orb] = Phase::exact(Rat(static_cast<long>(std::nearbyint(psi0 * 840.0)), 840));
        continue;
      }
    }
    r.orbit_phase[orb] = Phase::approx(psi0);
  }

  // constructive verification: rebuild every filtration by refining a
  // Q-filtration, reordering by the new phases, and collecting equal ones
  auto q_allowed = [&](const FormalObject& f) {
    std::optional<double> ph;
    for (const auto& [id, k] : f.mult()) {
      auto p = c.q.phase_of(id);
      if (!p) return false;
      if (!ph) ph = p->value();
      else if (std::abs(*ph - p->value()) > kTauPhase) return false;
    }
    return true;
  };
  for (const auto& t : s.all_ids()) {
    auto tw = find_tower(eng, FormalObject(t), q_allowed);
    if (!tw) throw TheoremViolation("deform: lost a filtration for " + s.id_name(t));
    Tower refined = tower_refine(eng, *tw);
    std::vector<double> tags;
    for (const auto& f : refined.factors)
      tags.push_back(r.phase_of(f.mult().begin()->first)->value());
    // bubble reorder with per-swap legality (throws SwapRefused on violation)
    Tower cur = refined;
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
        if (tags[j] > tags[j + 1] + kTauPhase) {
          try {
            cur = tower_swap_adjacent(eng, cur, j);
          } catch (const SwapRefused& e) {
            throw TheoremViolation(std::string("deform: illegal swap, which would "
                                               "falsify the deformation result: ") +
                                   e.what());
          }
          std::swap(tags[j], tags[j + 1]);
          ++out.swaps_performed;
          moved = true;
        }
      }
    }
    std::size_t before = cur.size();
    cur = tower_coalesce_equal_tags(eng, cur, tags, kTauPhase);
    out.coalesces_performed += static_cast<int>(before - cur.size());
    tags = cur.tags;
    for (std::size_t j = 0; j + 1 < tags.size(); ++j)
      if (!(tags[j] < tags[j + 1] - kTauPhase))
        throw TheoremViolation("deform: phases not strictly increasing after collection");
  }

  out.result = {w, r};
  AxiomReport ar = check_axioms(eng, r);
  out.axioms_ok = ar.all_passed();
  out.condition_s_ok = check_condition_S(s, r).holds;
  out.validity_ok = validate_condition(s, out.result).passed();
  MetricResult d = metric(s, c.q, r);
  out.distance = d.value;
  if (!out.axioms_ok || !out.condition_s_ok || !out.validity_ok || !d.exact ||
      !(d.value < eps))
    throw TheoremViolation("deform: output failed verification (axioms " +
                           std::to_string(out.axioms_ok) + ", S " +
                           std::to_string(out.condition_s_ok) + ", validity " +
                           std::to_string(out.validity_ok) + ", d " +
                           std::to_string(d.value) + ")");
  return out;
}

GElement::GElement(std::complex<double> l, double shift_a) : lambda(l), a(shift_a) {
  if (std::abs(l) == 0.0) throw std::invalid_argument("GElement: lambda must be nonzero");
  std::complex<double> dir = l / std::abs(l);
  std::complex<double> expa{std::cos(M_PI * a), std::sin(M_PI * a)};
  if (std::abs(dir - expa) > 1e-9)
    throw std::invalid_argument("GElement: exp(i pi a) inconsistent with lambda");
}

CoStabilityCondition act_shift(const Snapshot& s, int k, const CoStabilityCondition& c) {
  CoStabilityCondition out;
  out.z.on_basis = c.z.on_basis;
  if (k % 2 != 0)
    for (auto& z : out.z.on_basis) z = -z;
  for (const auto& [orb, ph] : c.q.orbit_phase) out.q.orbit_phase[orb] = ph.plus_int(-k);
  Verdict v = validate_condition(s, out);
  if (!v.passed()) throw TheoremViolation("act_shift: output invalid: " + v.detail);
  return out;
}

CoStabilityCondition act_g(const Snapshot& s, const CoStabilityCondition& c,
                           const GElement& g) {
  CoStabilityCondition out;
  out.z.on_basis = c.z.on_basis;
  for (auto& z : out.z.on_basis) z /= g.lambda;
  for (const auto& [orb, ph] : c.q.orbit_phase)
    out.q.orbit_phase[orb] = Phase::approx(ph.value() - g.a);
  Verdict v = validate_condition(s, out);
  if (!v.passed()) throw TheoremViolation("act_g: output invalid: " + v.detail);
  return out;
}

std::string ChartReport::csv() const {
  std::ostringstream os;
  os.precision(15);
  os << "# ";
  std::size_t nb = samples.empty() ? 0 : samples[0].w.on_basis.size();
  for (std::size_t i = 0; i < nb; ++i) os << "re_W" << i << ",im_W" << i << ",";
  os << "d\n";
  for (const auto& smp : samples) {
    for (const auto& z : smp.w.on_basis) os << z.real() << "," << z.imag() << ",";
    os << smp.distance << "\n";
  }
  return os.str();
}

ChartReport chart_sample(const CategoryEngine& eng, const CoStabilityCondition& c,
                         double radius, int count, Rng& rng) {
  const Snapshot& s = eng.snapshot();
  ChartReport rep;
  rep.k0_rank = s.k0_rank();
  rep.dimension = 2 * rep.k0_rank;
  double eps0 = epsilon0(c.q);
  rep.eps = eps0 / 2.0;
  double rmax = std::sin(M_PI * rep.eps) * 0.98;
  rep.radius_used = radius;
  if (radius > rmax) {
    rep.radius_used = rmax;
    rep.clipped = true;
  }

  // draw all charges first (sequential, seeded), then deform in parallel
  std::vector<CentralCharge> charges(count);
  for (int i = 0; i < count; ++i) {
    CentralCharge w;
    w.on_basis = c.z.on_basis;
    for (auto& z : w.on_basis) {
      double rho = rep.radius_used * rng.unit();
      double th = 2.0 * M_PI * rng.unit();
      z *= std::complex<double>(1.0 + rho * std::cos(th), rho * std::sin(th));
    }
    charges[i] = std::move(w);
  }
  rep.samples.resize(count);
  par::parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    ChartSample smp;
    smp.w = charges[i];
    DeformOutcome d = deform(eng, c, charges[i], rep.eps);
    smp.ok = !d.refused;
    smp.distance = d.refused ? -1.0 : d.distance;
    rep.samples[i] = std::move(smp);
  });
  for (const auto& smp : rep.samples) rep.all_ok &= smp.ok && smp.distance < rep.eps;
  for (int i = 0; i < count && rep.injective; ++i)
    for (int j = i + 1; j < count; ++j)
      if (rep.samples[i].w.on_basis == rep.samples[j].w.on_basis) {
        rep.injective = false;
        break;
      }
  return rep;
}

ScanResult counterexample_scan(const CategoryEngine& eng, const CoStabilityCondition& c,
                               const CentralCharge& w) {
  const Snapshot& s = eng.snapshot();
  ScanResult out;
  out.trace.push_back(
      "slice members of any (W,R) with d(Q,R) < 1/2 must be slice members of Q "
      "(a foreign member would already force d >= 1/2)");
  struct Eligible {
    int orbit;
    double psi0;
  };
  std::vector<Eligible> eligible;
  for (const auto& [orb, ph] : c.q.orbit_phase) {
    IndecId base{orb, 0};
    std::complex<double> z = w.eval(s, FormalObject(base));
    std::string oname = s.orbits[orb].label;
    if (std::abs(z) == 0.0) {
      out.trace.push_back("orbit " + oname + ": W vanishes, cannot lie in any slice of R");
      continue;
    }
    double phi0 = ph.value();
    double psi0 = phase_near(z, phi0);
    if (!(std::abs(psi0 - phi0) < 0.5)) {
      out.trace.push_back("orbit " + oname + ": forced phase " + std::to_string(psi0) +
                          " differs from " + std::to_string(phi0) +
                          " by >= 1/2; orbit cannot appear in R");
      continue;
    }
    out.trace.push_back("orbit " + oname + ": phase forced to " + std::to_string(psi0) +
                        " by arg W/pi (shift-0 representative)");
    eligible.push_back({orb, psi0});
  }

  const std::size_t n = eligible.size();
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    CoSlicing r;
    std::string subset = "{";
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        r.orbit_phase[eligible[i].orbit] = Phase::approx(eligible[i].psi0);
        subset += (subset.size() > 1 ? ", " : "") + s.orbits[eligible[i].orbit].label;
      }
    subset += "}";
    CoStabilityCondition cand{w, r};
    if (r.empty()) {
      bool trivial = s.all_ids().empty();
      if (!trivial) {
        out.trace.push_back("candidate " + subset + ": fails Def (iii), category nontrivial");
        continue;
      }
    }
    Verdict v = validate_condition(s, cand);
    if (!v.passed()) {
      out.trace.push_back("candidate " + subset + ": invalid pairing: " + v.detail);
      continue;
    }
    AxiomReport ar = check_axioms(eng, r);
    if (!ar.all_passed()) {
      std::string why;
      for (const auto& [name, verdict] : ar.checks)
        if (verdict.state != Verdict::State::Pass) {
          why = name + ": " + verdict.detail;
          break;
        }
      out.trace.push_back("candidate " + subset + ": " + why);
      continue;
    }
    MetricResult d = metric(s, c.q, r);
    if (d.ge_half) {
      out.trace.push_back("candidate " + subset + ": d(Q,R) >= 1/2");
      continue;
    }
    out.exists = true;
    out.found = cand;
    out.trace.push_back("candidate " + subset + ": valid with d(Q,R) = " +
                        std::to_string(d.value) + " < 1/2");
    return out;
  }
  out.trace.push_back("no (W,R) with d(Q,R) < 1/2 exists");
  return out;
}

}  // namespace costab

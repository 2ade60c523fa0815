#pragma once

#include <complex>

#include "costab/cotstruct.hpp"
#include "costab/rng.hpp"

namespace costab {

constexpr double kTauPhase = 1e-9;

/// Group homomorphism K0 -> C, given by values on the snapshot's K0 basis.
struct CentralCharge {
  std::vector<std::complex<double>> on_basis;

  std::complex<double> eval_class(const std::vector<long>& cls) const {
    std::complex<double> z = 0;
    for (std::size_t i = 0; i < on_basis.size(); ++i)
      z += static_cast<double>(cls[i]) * on_basis[i];
    return z;
  }
  std::complex<double> eval(const Snapshot& s, const FormalObject& t) const {
    return eval_class(s.k0_class(t));
  }
  bool operator==(const CentralCharge& o) const { return on_basis == o.on_basis; }
};

/// Polar data of z = m exp(i pi phi) with m > 0 and phi in (0,1]; rejects
/// values outside the strict upper half plane.
struct PhaseMass {
  double phase = 0, mass = 0;
};
PhaseMass phase_and_mass(std::complex<double> z);

/// Is z in H = {m exp(i pi phi) : m > 0, 0 < phi <= 1}?
bool in_upper_half_plane(std::complex<double> z);

/// Co-stability function on an additive subcategory given by co-heart ids:
/// a complex value per id, each required to lie in H.
struct CoStabilityFunction {
  std::set<IndecId> coheart;
  std::map<IndecId, std::complex<double>> values;

  double phase_of(IndecId id) const { return phase_and_mass(values.at(id)).phase; }
};

Verdict validate_costability_function(const CoStabilityFunction& f);

/// All indecomposable summands share one phase.
bool is_semistable(const Snapshot& s, const CoStabilityFunction& f, const FormalObject& a);

/// Split Harder-Narasimhan property: Hom vanishing from lower to higher phase
/// among semistable indecomposables; part (ii) is vacuous in a Krull-Schmidt
/// category and recorded as such.
struct SplitHNReport {
  bool holds = true;
  std::optional<std::pair<IndecId, IndecId>> witness;
  std::string detail;
};
SplitHNReport check_split_HN(const Snapshot& s, const CoStabilityFunction& f);

/// Phase-ascending grouping of the summands of a.
std::vector<std::pair<double, FormalObject>> hn_decompose(const Snapshot& s,
                                                          const CoStabilityFunction& f,
                                                          const FormalObject& a);

struct CoStabilityCondition {
  CentralCharge z;
  CoSlicing q;
};

/// Z(q) = m exp(i pi phi) for every slice member, to tau_phase.
Verdict validate_condition(const Snapshot& s, const CoStabilityCondition& c);

/// Full validity: the pairing check above plus the co-slicing axioms.
AxiomReport validate_condition_full(const CategoryEngine& eng, const CoStabilityCondition& c);

struct PackRefused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Co-t-structure + co-stability function -> co-stability condition
/// (the correspondence direction that builds slices from semistables);
/// requires the split HN property.
CoStabilityCondition pack(const Snapshot& s, const CoTStructure& p,
                          const CoStabilityFunction& f);

/// Inverse direction: induced co-t-structure and the charge restricted to its
/// co-heart.
std::pair<CoTStructure, CoStabilityFunction> unpack(const CategoryEngine& eng,
                                                    const CoStabilityCondition& c);

/// For identical charges and d < 1/2 the slicings must agree; returns
/// counterexample data if violated (a test failure, not an expected outcome).
struct SeparationResult {
  bool applicable = false;  // same Z and d < 1/2
  bool separated = true;    // slicings equal whenever applicable
  std::string detail;
};
SeparationResult separation_check(const Snapshot& s, const CoStabilityCondition& c1,
                                  const CoStabilityCondition& c2);

struct DeformOptions {
  bool snap_rational_phases = false;  // snap output phases to nearby rationals
  int sum_multiplicity_bound = 4;     // single-slice sums checked up to this
};

struct DeformOutcome {
  bool refused = false;
  std::string refusal;                    // reason when refused
  CoStabilityCondition result;            // (W, R) when not refused
  double eps0 = 0, eps = 0, distance = 0;
  int swaps_performed = 0, coalesces_performed = 0;
  bool axioms_ok = false, condition_s_ok = false, validity_ok = false;
};

/// The deformation construction: given (Z,Q) with condition (S), a charge W
/// within the sin(pi eps) bound, and 0 < eps <= eps0, produces (W,R) with
/// d(Q,R) < eps, rebuilding every filtration constructively.
DeformOutcome deform(const CategoryEngine& eng, const CoStabilityCondition& c,
                     const CentralCharge& w, double eps, DeformOptions opt = {});

/// Rotation-scaling element of the group G: T = multiplication by lambda,
/// f(x) = x + a with exp(i pi a) parallel to lambda.
struct GElement {
  std::complex<double> lambda{1.0, 0.0};
  double a = 0.0;
  GElement() = default;
  GElement(std::complex<double> l, double shift_a);
};

/// Left action of Sigma^k.
CoStabilityCondition act_shift(const Snapshot& s, int k, const CoStabilityCondition& c);
/// Right action of g in G.
CoStabilityCondition act_g(const Snapshot& s, const CoStabilityCondition& c, const GElement& g);

struct ChartSample {
  CentralCharge w;
  double distance = 0;
  bool ok = false;
};

struct ChartReport {
  int k0_rank = 0;
  int dimension = 0;
  double eps = 0, radius_used = 0;
  bool clipped = false;
  std::vector<ChartSample> samples;
  bool injective = true;   // distinct W on the sample
  bool all_ok = true;
  std::string csv() const;  // one row per sample: Re/Im per basis element, d
};

/// Samples charges in the relative polydisc around Z, deforms each, and
/// checks that the chart behaves like a local homeomorphism on the sample.
ChartReport chart_sample(const CategoryEngine& eng, const CoStabilityCondition& c,
                         double radius, int count, Rng& rng);

struct ScanResult {
  bool exists = false;
  std::optional<CoStabilityCondition> found;  // some (W,R) with d < 1/2
  std::vector<std::string> trace;
};

/// Exhaustive search for co-slicings R with (W,R) valid and d(Q,R) < 1/2;
/// slice phases are forced by arg(W)/pi, which makes the search finite.
ScanResult counterexample_scan(const CategoryEngine& eng, const CoStabilityCondition& c,
                               const CentralCharge& w);

}  // namespace costab

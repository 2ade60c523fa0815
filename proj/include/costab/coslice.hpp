#pragma once

#include <optional>

#include "costab/engine.hpp"

namespace costab {

/// Phase value: exact rational when constructed symbolically, double when it
/// comes out of a deformation. Comparisons are exact on rational pairs and
/// use tau_phase otherwise.
class Phase {
 public:
  static constexpr double tau = 1e-9;

  Phase() = default;
  static Phase exact(Rat r) {
    Phase p;
    p.exact_ = true;
    p.r_ = std::move(r);
    p.d_ = p.r_.template convert_to<double>();
    return p;
  }
  static Phase approx(double v) {
    Phase p;
    p.exact_ = false;
    p.d_ = v;
    return p;
  }

  double value() const { return d_; }
  bool is_exact() const { return exact_; }
  const Rat& rat() const {
    if (!exact_) throw std::logic_error("phase is not rational-tagged");
    return r_;
  }

  Phase plus_int(int k) const {
    Phase p = *this;
    if (exact_) {
      p.r_ += k;
      p.d_ = p.r_.template convert_to<double>();
    } else {
      p.d_ += k;
    }
    return p;
  }

  int compare(const Phase& o) const {
    if (exact_ && o.exact_) return r_ < o.r_ ? -1 : (r_ == o.r_ ? 0 : 1);
    double delta = d_ - o.d_;
    if (delta > tau) return 1;
    if (delta < -tau) return -1;
    return 0;
  }
  bool operator==(const Phase& o) const { return compare(o) == 0; }
  bool operator!=(const Phase& o) const { return compare(o) != 0; }
  bool operator<(const Phase& o) const { return compare(o) < 0; }
  bool operator<=(const Phase& o) const { return compare(o) <= 0; }

  std::string str() const;

 private:
  bool exact_ = true;
  Rat r_ = 0;
  double d_ = 0.0;
};

/// Co-slicing, stored as the phase of the shift-0 representative of each
/// participating orbit. This makes the suspension rule Q(phi+1) = Sigma
/// Q(phi) and "each indecomposable in at most one slice" structural.
struct CoSlicing {
  std::map<int, Phase> orbit_phase;

  bool empty() const { return orbit_phase.empty(); }

  std::optional<Phase> phase_of(IndecId id) const {
    auto it = orbit_phase.find(id.orbit);
    if (it == orbit_phase.end()) return std::nullopt;
    return it->second.plus_int(id.shift);
  }

  bool equals(const CoSlicing& o) const {
    if (orbit_phase.size() != o.orbit_phase.size()) return false;
    for (const auto& [orb, ph] : orbit_phase) {
      auto it = o.orbit_phase.find(orb);
      if (it == o.orbit_phase.end() || !(it->second == ph)) return false;
    }
    return true;
  }

  /// Slices with base phase in (0,1], as (phase, base representative ids).
  std::vector<std::pair<Phase, std::vector<IndecId>>> base_slices() const;

  /// Ids of slice members inside the window of s.
  std::vector<IndecId> members_in_window(const Snapshot& s) const;
};

struct Verdict {
  enum class State { Pass, Fail, Unverifiable };
  State state = State::Pass;
  std::string detail;
  bool passed() const { return state == State::Pass; }
};

struct AxiomReport {
  std::vector<std::pair<std::string, Verdict>> checks;
  bool all_passed() const {
    for (const auto& [n, v] : checks)
      if (v.state != Verdict::State::Pass) return false;
    return true;
  }
  std::string summary() const;
};

/// Def-by-def check of the co-slicing axioms over the window; (iii) is
/// established constructively by building a phase-ascending tower for every
/// in-window indecomposable.
AxiomReport check_axioms(const CategoryEngine& eng, const CoSlicing& q);

/// Condition (S): Hom vanishing between non-isomorphic indecomposables of one
/// slice. Returns a witness pair on failure.
struct ConditionSResult {
  bool holds = true;
  std::optional<std::pair<IndecId, IndecId>> witness;
  std::string detail;
};
ConditionSResult check_condition_S(const Snapshot& s, const CoSlicing& q);

/// Real interval with open/closed ends.
struct Interval {
  double lo = 0, hi = 0;
  bool lo_closed = true, hi_closed = true;
  bool contains(double v, double tol = Phase::tau) const {
    if (lo_closed ? v < lo - tol : v <= lo + tol) return false;
    if (hi_closed ? v > hi + tol : v >= hi - tol) return false;
    return true;
  }
  double length() const { return hi - lo; }
};

enum class Membership { Yes, No, Inconclusive };

/// Is t in Q(I) (extension + summand closure of the slices with phase in I)?
/// Intervals of length <= 1 use the additive-hull fast path; longer ones run
/// a bounded tower search with a one-extra-summand completion attempt.
Membership interval_membership(const CategoryEngine& eng, const CoSlicing& q,
                               const FormalObject& t, const Interval& iv);

/// Checks the orthogonality identity perp Q(>b) \cap Q(<=a)perp = Q((a,b])
/// (and the closed-interval variant) over every in-window indecomposable.
struct OrthogonalityReport {
  bool holds = true;
  std::vector<std::string> discrepancies;
};
OrthogonalityReport orthogonality_identity(const CategoryEngine& eng, const CoSlicing& q,
                                           double a, double b);

/// Largest eps0 < 1/2 such that every closed interval of length 2*eps0 meets
/// at most one support phase (computed from the minimal circular gap).
double epsilon0(const CoSlicing& q);

struct MetricResult {
  bool exact = false;      // value is the exact distance (< 1/2 regime)
  bool ge_half = false;    // distance is >= 1/2 (value then an upper bound...)
  bool infinite = false;   // ...or no finite bound: some id has no partner
  double value = 0.0;
  std::optional<Rat> exact_value;  // set when all involved phases are rational
};

/// Per-indecomposable metric (exact below 1/2 by the additive-hull argument;
/// reported as a ">= 1/2" flag beyond that regime).
MetricResult metric(const Snapshot& s, const CoSlicing& q, const CoSlicing& r);

/// (Q(<=1), Q(>1)) as id sets in-window.
struct CoTStructure;
CoTStructure induced_cotstructure(const CategoryEngine& eng, const CoSlicing& q);

}  // namespace costab

#pragma once

#include "costab/io.hpp"

namespace costab {

// Worked-example data used by the demos and the acceptance suite.

/// The kA2 condition with both projective stalks at phase 1/2 (co-heart
/// add(x, y), Z(x) = Z(y) = i). Fails condition (S).
CoStabilityCondition ka2_condition_clustered(const Snapshot& s);

/// The separated kA2 condition: Q(1/4) = add(y), Q(3/4) = add(x). Satisfies
/// condition (S).
CoStabilityCondition ka2_condition_separated(const Snapshot& s);

/// The deformation charge that fixes x and moves y to phase 1/2 + eps with
/// mass cos(pi eps).
CentralCharge ka2_deformation_charge(const Snapshot& s, double eps);

/// Dual-numbers condition determined by (z0, phi0): the unique slice carries
/// the stalk orbit, Z(c) = z0 = s exp(i pi phi0).
CoStabilityCondition dual_condition(const Snapshot& s, std::complex<double> z0);

struct TheoremBOptions {
  int window_lo = -2, window_hi = 2;
  int width = 3;
  int samples = 50;
  std::uint64_t seed = 1;
  FieldKind field = FieldKind::Rationals;
  std::string out_dir;  // when set: report + chart CSV written here
};
Report demo_theorem_b(const TheoremBOptions& opt);

struct CounterexampleOptions {
  double eps = 0.1;
  std::uint64_t seed = 1;
  FieldKind field = FieldKind::Rationals;
  std::string out_dir;
};
Report demo_counterexample(const CounterexampleOptions& opt);

}  // namespace costab

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "costab/presentation.hpp"
#include "costab/snapshot.hpp"
#include "costab/towers.hpp"

namespace costab {

/// Signals a failed internal verification that, were it genuine, would
/// contradict a proved statement. Never caught silently.
struct TheoremViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Type-erased chain-level services over one snapshot: materializing towers
/// with honest witnesses and transforming them. Implementations are
/// field-specific; all operations are const and safe to call concurrently
/// after construction.
class CategoryEngine {
 public:
  virtual ~CategoryEngine() = default;

  virtual const Snapshot& snapshot() const = 0;

  /// Builds a tower from a search plan; every step's factor is recomputed
  /// from an honest mapping cone and checked against the plan.
  virtual Tower materialize(const TowerPlan& plan) const = 0;

  /// Chain-level swap of steps j, j+1 (Hom-vanishing already checked by the
  /// caller); the new intermediate is constructed, not assumed.
  virtual Tower swap_steps(const Tower& t, std::size_t j) const = 0;

  /// Chain-level merge of steps j, j+1 into one step with factor the direct
  /// sum; verified by decomposing the merged cone.
  virtual Tower merge_steps(const Tower& t, std::size_t j) const = 0;

  /// Splits step pos into two steps, peeling the given sub-multiset as the
  /// second factor.
  virtual Tower split_step(const Tower& t, std::size_t pos,
                           const FormalObject& second_factor) const = 0;

  /// Formal object of cone(t_j -> t_n) for the stored witness maps.
  virtual FormalObject cofactor_object(const Tower& t, std::size_t j) const = 0;

  /// Krull-Schmidt class of an arbitrary direct sum of ids (identity here),
  /// exposed for validation hooks.
  virtual int hom_dim_ids(IndecId a, IndecId b) const = 0;
};

struct BuildOptions {
  int window_lo = -2;
  int window_hi = 2;
  int width_bound = 2;
  int max_orbits = 64;
  bool parallel = true;  // hom table / catalog kernels; serial path is the reference
};

struct Category {
  Snapshot snapshot;
  std::shared_ptr<const CategoryEngine> engine;
  std::vector<std::string> build_notes;
};

/// Realizes the bounded homotopy category of a quiver algebra inside the
/// given window: enumerates indecomposables, fills the Hom table, records
/// the triangle catalog, and returns the chain-level engine.
Category build_category(const AlgebraPresentation& pres, const BuildOptions& opt);

}  // namespace costab

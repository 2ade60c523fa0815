#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "costab/snapshot.hpp"

namespace costab {

/// Opaque chain-level witness data attached to a tower (complexes and step
/// maps live behind this; owned by the engine implementation).
class TowerWitness {
 public:
  virtual ~TowerWitness() = default;
};

/// A filtration 0 = t_0 -> t_1 -> ... -> t_n = total by distinguished
/// triangles t_{j-1} -> t_j -> factor_j. Always carries a constructive
/// witness (materialized complexes and step maps).
struct Tower {
  FormalObject total;
  std::vector<FormalObject> factors;
  std::vector<double> tags;            // caller annotation per factor (phase/shift)
  std::vector<FormalObject> inters;    // t_1 .. t_n as formal objects
  std::vector<std::string> step_notes; // witness reference per step, for reports
  std::shared_ptr<const TowerWitness> witness;

  std::size_t size() const { return factors.size(); }
};

struct Cofactor {
  FormalObject object;  // e_j with triangle t_j -> t -> e_j
  bool verified_extension_closure = false;
  std::string note;
};

/// One step of a tower plan, found by catalog search.
struct PlanStep {
  enum class Kind { Split, Generator };
  Kind kind = Kind::Split;
  FormalObject factor;
  int catalog_index = -1;  // Generator: snapshot catalog entry
  int rotation = 0;        // 0, 1 or 2
  int shift = 0;           // additional suspension applied to the entry
  FormalObject padding;    // direct summand carried along unchanged
};

struct TowerPlan {
  FormalObject total;
  std::vector<PlanStep> steps;  // bottom-up: steps[0] builds t_1 from 0
};

enum class SearchStatus { Found, NoneWithinBounds, BoundsExhausted };

struct SearchResult {
  SearchStatus status = SearchStatus::NoneWithinBounds;
  std::optional<TowerPlan> plan;
  std::string note;  // which bound was hit, for reports
};

struct SearchOptions {
  int depth = -1;            // default: summands of total + window span
  int max_object_size = -1;  // default: summands of total + 4
  int window_margin = -1;    // how far factors may stick out; default: width bound
  std::optional<std::uint64_t> shuffle_seed;  // randomized move order for tests
};

using FactorPredicate = std::function<bool(const FormalObject&)>;

/// Exhaustive bounded search over the triangle catalog (with lazy rotations,
/// suspensions and direct-sum padding) for a tower of t whose factors satisfy
/// the predicate. A definite "none" is distinguished from running out of
/// depth/size bounds.
SearchResult find_tower_plan(const Snapshot& s, const FormalObject& t,
                             const FactorPredicate& allowed, SearchOptions opt = {});

class CategoryEngine;

/// Search + materialization in one call.
std::optional<Tower> find_tower(const CategoryEngine& eng, const FormalObject& t,
                                const FactorPredicate& allowed, SearchOptions opt = {},
                                SearchResult* result_out = nullptr);

struct SwapRefused : std::runtime_error {
  using std::runtime_error::runtime_error;
  int offending_hom_dim = 0;
};

/// Exchange factors j and j+1. Requires hom(factor_{j+1}, Sigma factor_j) = 0;
/// refusals carry the offending Hom dimension.
Tower tower_swap_adjacent(const CategoryEngine& eng, const Tower& t, std::size_t j);

/// Merge factors j and j+1 into their direct sum (same precondition as swap).
Tower tower_coalesce(const CategoryEngine& eng, const Tower& t, std::size_t j);

/// Replace a decomposable factor by two consecutive factors (one summand is
/// peeled off; repeated application reaches all-indecomposable factors).
Tower tower_split_factor(const CategoryEngine& eng, const Tower& t, std::size_t pos);

/// The cofactor e_j with triangle t_j -> t -> e_j; verified to lie in the
/// extension closure of the later factors (by re-towering).
Cofactor tower_truncate(const CategoryEngine& eng, const Tower& t, std::size_t j);

/// Repeated split_factor until every factor is indecomposable.
Tower tower_refine(const CategoryEngine& eng, Tower t);

/// Stable bubble sort of factors by ascending tag; every exchange goes
/// through tower_swap_adjacent and so is checked. Tags move with factors.
Tower tower_sort_by_tags(const CategoryEngine& eng, Tower t,
                         std::vector<double> tags, bool* swapped_any = nullptr);

/// Merge adjacent factors with equal tags (within tol).
Tower tower_coalesce_equal_tags(const CategoryEngine& eng, Tower t,
                                std::vector<double> tags, double tol);

}  // namespace costab

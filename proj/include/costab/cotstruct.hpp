#pragma once

#include <set>

#include "costab/coslice.hpp"
#include "costab/engine.hpp"

namespace costab {

/// Co-t-structure stored extensionally: in-window id sets for the aisle A and
/// co-aisle B (closure under sums/summands is automatic for id sets), with
/// the derived co-heart C = A n Sigma^{-1} B.
struct CoTStructure {
  std::set<IndecId> aisle;    // A
  std::set<IndecId> coaisle;  // B
  std::set<IndecId> coheart() const {
    std::set<IndecId> c;
    for (const auto& id : aisle)
      if (coaisle.count(id.suspended())) c.insert(id);
    return c;
  }
  bool in_aisle(IndecId id) const { return aisle.count(id) > 0; }
  bool in_coaisle(IndecId id) const { return coaisle.count(id) > 0; }
};

/// B as the right perp of A inside the window (used when a file only lists A).
std::set<IndecId> perp_of(const Snapshot& s, const std::set<IndecId>& left);

/// Axiom check per Def. of a co-t-structure; (iii) is verified by building,
/// for every in-window indecomposable, a tower whose factors reorder into an
/// A-prefix followed by a B-suffix, then checking the two truncations.
AxiomReport check_cotstructure(const CategoryEngine& eng, const CoTStructure& p);

/// Filtration with co-heart factors at strictly increasing suspensions
/// (factors Sigma^{j_m} c_m, j_1 < ... < j_n); tags carry the j_m.
Tower heart_filtration(const CategoryEngine& eng, const CoTStructure& p,
                       const FormalObject& t,
                       std::optional<std::uint64_t> search_seed = std::nullopt);

/// Class of t in the split K0 of the co-heart: the multiset of (c_m, j_m),
/// the signed vector over co-heart ids (sign (-1)^{j_m}), and the K0 image.
struct SplitK0Class {
  std::vector<std::pair<IndecId, int>> factors;  // (co-heart id, suspension j)
  std::map<IndecId, long> vector;                // signed multiplicities
  std::vector<long> k0_image;
};
SplitK0Class split_k0_class(const CategoryEngine& eng, const CoTStructure& p,
                            const FormalObject& t,
                            std::optional<std::uint64_t> search_seed = std::nullopt);

/// All presilting generating subsets of in-window ids, each returned with its
/// generated co-t-structure. Verification is window-relative throughout.
/// Works from the snapshot alone (the searches are id-level).
struct CoheartEnumeration {
  struct Item {
    std::set<IndecId> coheart;
    CoTStructure cotstructure;
  };
  std::vector<Item> items;
  bool complete = true;
};
CoheartEnumeration enumerate_cohearts(const Snapshot& s,
                                      std::size_t max_candidates = 1u << 20);

}  // namespace costab

#pragma once

#include <string>
#include <vector>

#include "costab/field.hpp"

namespace costab {

struct ArrowDecl {
  int src = 0;
  int tgt = 0;
  std::string label;
};

/// One relation: a linear combination of parallel paths of length >= 2.
/// Paths are given as sequences of arrow indices in traversal order.
struct RelationTerm {
  Rat coeff;
  std::vector<int> arrows;
};
using Relation = std::vector<RelationTerm>;

/// Textual presentation of a finite dimensional quiver algebra kQ/I.
struct AlgebraPresentation {
  std::string name;
  std::vector<std::string> vertex_names;
  std::vector<ArrowDecl> arrows;
  std::vector<Relation> relations;
  FieldKind field = FieldKind::Rationals;
  int path_length_bound = 12;

  int vertex_index(const std::string& v) const;
  int arrow_index(const std::string& a) const;

  /// Admissibility: every relation term has length >= 2 and all terms of a
  /// relation share source and target. Throws on violation.
  void validate() const;
};

AlgebraPresentation load_algebra(const std::string& path);
void save_algebra(const AlgebraPresentation& p, const std::string& path);

/// The two algebras used throughout: the A2 path algebra (vertices 1 -> 2)
/// and the dual numbers k[X]/(X^2) as a one-vertex quiver with loop X.
AlgebraPresentation make_ka2();
AlgebraPresentation make_dual_numbers();

}  // namespace costab

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "costab/linalg.hpp"
#include "costab/presentation.hpp"

namespace costab {

/// A path, stored as arrow indices in traversal order (empty = lazy path e_v).
struct PathKey {
  int src = 0;
  int tgt = 0;
  std::vector<int> arrows;
  bool operator<(const PathKey& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (src != o.src) return src < o.src;
    if (arrows != o.arrows) return arrows < o.arrows;
    return tgt < o.tgt;
  }
  bool operator==(const PathKey& o) const {
    return src == o.src && tgt == o.tgt && arrows == o.arrows;
  }
};

/// Finite dimensional quotient of a path algebra, with a fixed normal-form
/// basis. Elements are sparse coefficient vectors over that basis.
///
/// Path composition convention: the algebra product p*q means "first q, then
/// p" (function order), so a path u ~> v is an element of e_v A e_u and
/// morphisms of projectives P_u = e_u A -> P_v act by left multiplication.
template <class K>
class PathAlgebra {
 public:
  struct Term {
    int basis;  // index into basis()
    K coeff;
    bool operator==(const Term& o) const { return basis == o.basis && coeff == o.coeff; }
  };
  using Elem = std::vector<Term>;  // sorted by basis index, no zero coeffs

  explicit PathAlgebra(const AlgebraPresentation& pres) : pres_(pres) {
    pres_.validate();
    build();
  }

  const AlgebraPresentation& presentation() const { return pres_; }
  int num_vertices() const { return static_cast<int>(pres_.vertex_names.size()); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<PathKey>& basis() const { return basis_; }
  int basis_src(int i) const { return basis_[i].src; }
  int basis_tgt(int i) const { return basis_[i].tgt; }
  int basis_len(int i) const { return static_cast<int>(basis_[i].arrows.size()); }

  /// Basis indices of e_w A e_v: paths v ~> w surviving in the quotient.
  const std::vector<int>& component(int v, int w) const {
    return components_[w * num_vertices() + v];
  }

  Elem zero() const { return {}; }
  Elem unit(int v) const { return {{vertex_basis_[v], field_traits<K>::one()}}; }
  Elem arrow(int a) const {
    int b = arrow_basis_[a];
    if (b < 0) return {};  // arrow dies in the quotient
    return {{b, field_traits<K>::one()}};
  }
  Elem from_basis(int i, const K& c = field_traits<K>::one()) const {
    if (field_traits<K>::is_zero(c)) return {};
    return {{i, c}};
  }

  static bool is_zero(const Elem& e) { return e.empty(); }

  Elem add(const Elem& a, const Elem& b) const {
    Elem out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].basis < b[j].basis)) out.push_back(a[i++]);
      else if (i == a.size() || b[j].basis < a[i].basis) out.push_back(b[j++]);
      else {
        K c = a[i].coeff + b[j].coeff;
        if (!field_traits<K>::is_zero(c)) out.push_back({a[i].basis, c});
        ++i; ++j;
      }
    }
    return out;
  }

  Elem negate(Elem a) const {
    for (auto& t : a) t.coeff = -t.coeff;
    return a;
  }

  Elem scale(Elem a, const K& c) const {
    if (field_traits<K>::is_zero(c)) return {};
    for (auto& t : a) t.coeff *= c;
    return a;
  }

  /// Product a*b ("first b then a").
  Elem mul(const Elem& a, const Elem& b) const {
    Elem out;
    for (const auto& ta : a)
      for (const auto& tb : b) {
        const Elem& p = mul_table(ta.basis, tb.basis);
        if (p.empty()) continue;
        out = add(out, scale(p, ta.coeff * tb.coeff));
      }
    return out;
  }

  /// Scalar coefficient of e_v in an element of e_v A e_v (the part that
  /// decides invertibility in the local algebra e_v A e_v).
  K vertex_coeff(const Elem& e, int v) const {
    for (const auto& t : e)
      if (t.basis == vertex_basis_[v]) return t.coeff;
    return field_traits<K>::zero();
  }

  /// Inverse of u in e_v A e_v; requires nonzero vertex coefficient
  /// (such elements are units since the arrow part is nilpotent).
  Elem local_inverse(const Elem& u, int v) const {
    K c = vertex_coeff(u, v);
    if (field_traits<K>::is_zero(c))
      throw std::domain_error("local_inverse: element is not a unit");
    // u = c(e_v - n) with n nilpotent; invert via the geometric series.
    Elem n = add(unit(v), negate(scale(u, field_traits<K>::one() / c)));
    Elem inv = unit(v);
    Elem pw = n;
    for (int k = 0; k < dim() && !pw.empty(); ++k) {
      inv = add(inv, pw);
      pw = mul(pw, n);
    }
    return scale(inv, field_traits<K>::one() / c);
  }

  std::string to_string(const Elem& e) const;
  std::string path_name(int basis_index) const;

 private:
  void build();
  const Elem& mul_table(int i, int j) const { return mul_[i * dim() + j]; }

  AlgebraPresentation pres_;
  std::vector<PathKey> basis_;
  std::vector<int> vertex_basis_;      // per vertex: basis index of e_v
  std::vector<int> arrow_basis_;       // per arrow: basis index or -1
  std::vector<std::vector<int>> components_;
  std::vector<Elem> mul_;              // dense multiplication table
};

// ---------------------------------------------------------------------------

template <class K>
void PathAlgebra<K>::build() {
  const int nv = num_vertices();
  // Enumerate all paths up to the length bound.
  std::vector<PathKey> paths;
  std::map<PathKey, int> index_of;
  for (int v = 0; v < nv; ++v) {
    PathKey p{v, v, {}};
    index_of[p] = static_cast<int>(paths.size());
    paths.push_back(p);
  }
  std::size_t frontier_begin = 0;
  for (int len = 1; len <= pres_.path_length_bound + 1; ++len) {
    std::size_t frontier_end = paths.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (std::size_t a = 0; a < pres_.arrows.size(); ++a) {
        if (pres_.arrows[a].src != paths[i].tgt) continue;
        PathKey q = paths[i];
        q.arrows.push_back(static_cast<int>(a));
        q.tgt = pres_.arrows[a].tgt;
        index_of[q] = static_cast<int>(paths.size());
        paths.push_back(std::move(q));
      }
    }
    frontier_begin = frontier_end;
    if (frontier_begin == paths.size()) break;  // no longer paths exist
  }

  // Span of the relation ideal inside the bounded path space: embed each
  // relation and close under one-arrow multiplication on both sides,
  // dropping products that leave the bound.
  const std::size_t np = paths.size();
  RowSpace<K> ideal(np);
  std::vector<Vec<K>> queue;
  auto embed = [&](const Relation& rel, const std::vector<int>& pre,
                   const std::vector<int>& post) -> std::optional<Vec<K>> {
    Vec<K> v(np, field_traits<K>::zero());
    for (const auto& term : rel) {
      std::vector<int> arr = pre;
      arr.insert(arr.end(), term.arrows.begin(), term.arrows.end());
      arr.insert(arr.end(), post.begin(), post.end());
      if (static_cast<int>(arr.size()) > pres_.path_length_bound + 1) return std::nullopt;
      PathKey p;
      p.arrows = arr;
      p.src = arr.empty() ? 0 : pres_.arrows[arr.front()].src;
      p.tgt = arr.empty() ? 0 : pres_.arrows[arr.back()].tgt;
      auto it = index_of.find(p);
      if (it == index_of.end()) return std::nullopt;
      v[it->second] += field_traits<K>::from_rational(term.coeff);
    }
    return v;
  };
  // Close p * r * q by BFS over (pre, post) extensions carried on the raw
  // vectors; since relations have fixed endpoints, extending a vector by an
  // arrow is a linear shift of path indices.
  struct Padded { const Relation* rel; std::vector<int> pre, post; };
  std::vector<Padded> work;
  for (const auto& rel : pres_.relations) work.push_back({&rel, {}, {}});
  for (std::size_t w = 0; w < work.size(); ++w) {
    auto v = embed(*work[w].rel, work[w].pre, work[w].post);
    if (!v) continue;
    ideal.add(std::move(*v));
    const Relation& rel = *work[w].rel;
    int rel_src = pres_.arrows[rel.front().arrows.front()].src;
    int rel_tgt = pres_.arrows[rel.front().arrows.back()].tgt;
    if (!work[w].pre.empty()) rel_src = pres_.arrows[work[w].pre.front()].src;
    if (!work[w].post.empty()) rel_tgt = pres_.arrows[work[w].post.back()].tgt;
    for (std::size_t a = 0; a < pres_.arrows.size(); ++a) {
      if (pres_.arrows[a].tgt == rel_src) {
        Padded p = work[w];
        p.pre.insert(p.pre.begin(), static_cast<int>(a));
        if (static_cast<int>(p.pre.size() + p.post.size()) <= pres_.path_length_bound)
          work.push_back(std::move(p));
      }
      if (pres_.arrows[a].src == rel_tgt) {
        Padded p = work[w];
        p.post.push_back(static_cast<int>(a));
        if (static_cast<int>(p.pre.size() + p.post.size()) <= pres_.path_length_bound)
          work.push_back(std::move(p));
      }
    }
  }

  // Normal-form basis: paths that are not leading terms of the ideal span.
  // Echelonize with "last nonzero" as the pivot so reduction against the
  // span rewrites long paths into shorter ones (paths are ordered by length
  // then lex).
  std::vector<Vec<K>> rows = ideal.rows();
  std::vector<Vec<K>> reduced;
  std::vector<std::size_t> leads;
  for (auto& r : rows) {
    Vec<K> v = r;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      const K& c = v[leads[k]];
      if (field_traits<K>::is_zero(c)) continue;
      K f = c;
      for (std::size_t j = 0; j < np; ++j) v[j] -= f * reduced[k][j];
    }
    std::size_t lead = np;
    for (std::size_t j = np; j-- > 0;)
      if (!field_traits<K>::is_zero(v[j])) { lead = j; break; }
    if (lead == np) continue;
    K inv = field_traits<K>::one() / v[lead];
    for (auto& x : v) x *= inv;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      K c = reduced[k][lead];
      if (field_traits<K>::is_zero(c)) continue;
      for (std::size_t j = 0; j < np; ++j) reduced[k][j] -= c * v[j];
    }
    reduced.push_back(std::move(v));
    leads.push_back(lead);
  }
  std::vector<bool> is_lead(np, false);
  for (std::size_t l : leads) is_lead[l] = true;

  std::vector<int> basis_of_path(np, -1);
  for (std::size_t i = 0; i < np; ++i) {
    if (is_lead[i]) continue;
    if (static_cast<int>(paths[i].arrows.size()) > pres_.path_length_bound)
      throw std::runtime_error(
          "algebra is not finite dimensional within the path length bound");
    basis_of_path[i] = static_cast<int>(basis_.size());
    basis_.push_back(paths[i]);
  }
  int maxlen = 0;
  for (const auto& p : basis_) maxlen = std::max(maxlen, static_cast<int>(p.arrows.size()));
  if (2 * maxlen > pres_.path_length_bound + 1)
    throw std::runtime_error(
        "path length bound too small for exact products; raise path_length_bound");

  // Reduce an arbitrary path-space vector to basis coordinates.
  auto reduce_vec = [&](Vec<K> v) -> Elem {
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      const K& c = v[leads[k]];
      if (field_traits<K>::is_zero(c)) continue;
      K f = c;
      for (std::size_t j = 0; j < np; ++j) v[j] -= f * reduced[k][j];
    }
    Elem e;
    for (std::size_t j = 0; j < np; ++j)
      if (!field_traits<K>::is_zero(v[j])) e.push_back({basis_of_path[j], v[j]});
    std::sort(e.begin(), e.end(), [](const Term& a, const Term& b) { return a.basis < b.basis; });
    return e;
  };

  vertex_basis_.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    PathKey p{v, v, {}};
    vertex_basis_[v] = basis_of_path[index_of.at(p)];
    if (vertex_basis_[v] < 0)
      throw std::runtime_error("relations kill a lazy path; algebra degenerate");
  }
  arrow_basis_.assign(pres_.arrows.size(), -1);
  for (std::size_t a = 0; a < pres_.arrows.size(); ++a) {
    PathKey p{pres_.arrows[a].src, pres_.arrows[a].tgt, {static_cast<int>(a)}};
    arrow_basis_[a] = basis_of_path[index_of.at(p)];
  }

  components_.assign(nv * nv, {});
  for (int i = 0; i < dim(); ++i)
    components_[basis_[i].tgt * nv + basis_[i].src].push_back(i);

  // Multiplication table.
  mul_.assign(dim() * dim(), {});
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      if (basis_[j].tgt != basis_[i].src) continue;  // p_i * p_j needs q-then-p chaining
      PathKey concat;
      concat.src = basis_[j].src;
      concat.tgt = basis_[i].tgt;
      concat.arrows = basis_[j].arrows;
      concat.arrows.insert(concat.arrows.end(), basis_[i].arrows.begin(), basis_[i].arrows.end());
      auto it = index_of.find(concat);
      if (it == index_of.end())
        throw std::logic_error("product of basis paths escaped the enumerated space");
      Vec<K> v(np, field_traits<K>::zero());
      v[it->second] = field_traits<K>::one();
      mul_[i * dim() + j] = reduce_vec(std::move(v));
    }
}

template <class K>
std::string PathAlgebra<K>::path_name(int i) const {
  const PathKey& p = basis_[i];
  if (p.arrows.empty()) return "e_" + pres_.vertex_names[p.src];
  std::string s;
  for (std::size_t k = 0; k < p.arrows.size(); ++k) {
    if (k) s += "*";
    s += pres_.arrows[p.arrows[k]].label;
  }
  return s;
}

template <class K>
std::string PathAlgebra<K>::to_string(const Elem& e) const {
  if (e.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k) s += " + ";
    s += field_traits<K>::to_string(e[k].coeff) + "*" + path_name(e[k].basis);
  }
  return s;
}

}  // namespace costab

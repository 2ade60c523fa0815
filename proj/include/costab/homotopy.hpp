#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "costab/complexes.hpp"

namespace costab {

/// Thrown when the idempotent search cannot certify either splitting or
/// locality; the recommended remedy is a different ground field.
struct DecomposeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an enumeration exceeds its configured resource caps.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coordinate layout for degree-s maps X -> Y: one slot per (degree, target
/// summand, source summand, algebra basis element of the matching component).
template <class K>
struct MapLayout {
  struct Slot { int deg, row, col, ab; };
  std::vector<Slot> slots;
  std::map<std::tuple<int, int, int, int>, int> index;
  int s = 0;

  int dim() const { return static_cast<int>(slots.size()); }
  int find(int deg, int row, int col, int ab) const {
    auto it = index.find({deg, row, col, ab});
    return it == index.end() ? -1 : it->second;
  }
};

template <class K>
MapLayout<K> map_layout(const PathAlgebra<K>& A, const Complex<K>& x,
                        const Complex<K>& y, int s) {
  MapLayout<K> L;
  L.s = s;
  for (int d = x.lo; d <= x.hi(); ++d) {
    const auto& xs = x.module(d);
    const auto& ys = y.module(d + s);
    for (int r = 0; r < static_cast<int>(ys.size()); ++r)
      for (int c = 0; c < static_cast<int>(xs.size()); ++c)
        for (int ab : A.component(xs[c], ys[r])) {
          L.index[{d, r, c, ab}] = static_cast<int>(L.slots.size());
          L.slots.push_back({d, r, c, ab});
        }
  }
  return L;
}

template <class K>
DegMap<K> vec_to_map(const PathAlgebra<K>& A, const MapLayout<K>& L,
                     const Complex<K>& x, const Complex<K>& y, const Vec<K>& v) {
  DegMap<K> f;
  for (int i = 0; i < L.dim(); ++i) {
    if (field_traits<K>::is_zero(v[i])) continue;
    const auto& sl = L.slots[i];
    auto it = f.find(sl.deg);
    if (it == f.end()) {
      AMat<K> m(static_cast<int>(y.module(sl.deg + L.s).size()),
                static_cast<int>(x.module(sl.deg).size()));
      it = f.emplace(sl.deg, std::move(m)).first;
    }
    it->second.at(sl.row, sl.col) =
        A.add(it->second.at(sl.row, sl.col), A.from_basis(sl.ab, v[i]));
  }
  return f;
}

template <class K>
Vec<K> map_to_vec(const MapLayout<K>& L, const DegMap<K>& f) {
  Vec<K> v(L.dim(), field_traits<K>::zero());
  for (const auto& [d, m] : f)
    for (int r = 0; r < m.rows; ++r)
      for (int c = 0; c < m.cols; ++c)
        for (const auto& t : m.at(r, c)) {
          int i = L.find(d, r, c, t.basis);
          if (i < 0) throw std::logic_error("map_to_vec: entry outside layout");
          v[i] += t.coeff;
        }
  return v;
}

/// Hom-space of X -> Y in the homotopy category: a basis of chain maps, the
/// span of null-homotopic ones, and representatives of the classes.
template <class K>
struct HomSpace {
  MapLayout<K> layout;                 // degree-0 layout
  std::vector<Vec<K>> chain_basis;     // kernel of the commutation operator
  RowSpace<K> null_span{0};
  std::vector<Vec<K>> class_reps;      // chain maps spanning hom mod null
  std::vector<DegMap<K>> class_maps;   // the same, as degreewise matrices

  int dim() const { return static_cast<int>(class_reps.size()); }

  /// Coordinates of a chain map's homotopy class in the class_reps basis.
  Vec<K> class_coords(const Vec<K>& v) const {
    std::size_t k = class_reps.size(), n = null_span.rows().size();
    std::size_t amb = layout.slots.size();
    Matrix<K> m(amb, k + n);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < amb; ++i) m(i, j) = class_reps[j][i];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < amb; ++i) m(i, k + j) = null_span.rows()[j][i];
    auto sol = solve(m, v);
    if (!sol) throw std::logic_error("class_coords: vector not a chain map");
    return Vec<K>(sol->begin(), sol->begin() + k);
  }
};

/// Matrix of the commutation defect f |-> d_Y f - f d_X from degree-0 slots
/// (L0) to degree-(+1) slots (L1); chain maps are its kernel.
template <class K>
Matrix<K> chain_defect_matrix(const PathAlgebra<K>& A, const Complex<K>& x,
                              const Complex<K>& y, const MapLayout<K>& L0,
                              const MapLayout<K>& L1) {
  Matrix<K> comm(L1.dim(), L0.dim());
  for (int j = 0; j < L0.dim(); ++j) {
    const auto& sl = L0.slots[j];
    auto E = A.from_basis(sl.ab);
    AMat<K> dy = y.diff(sl.deg);
    for (int r2 = 0; r2 < dy.rows; ++r2) {
      auto prod = A.mul(dy.at(r2, sl.row), E);
      for (const auto& t : prod) {
        int i = L1.find(sl.deg, r2, sl.col, t.basis);
        if (i >= 0) comm(i, j) += t.coeff;
      }
    }
    AMat<K> dx = x.diff(sl.deg - 1);
    for (int c2 = 0; c2 < dx.cols; ++c2) {
      auto prod = A.mul(E, dx.at(sl.col, c2));
      for (const auto& t : prod) {
        int i = L1.find(sl.deg - 1, sl.row, c2, t.basis);
        if (i >= 0) comm(i, j) -= t.coeff;
      }
    }
  }
  return comm;
}

/// Column j = coordinates (in L0) of d_Y h + h d_X for the j-th homotopy slot
/// of Lh. Null-homotopic chain maps form its column span.
template <class K>
Matrix<K> homotopy_boundary_matrix(const PathAlgebra<K>& A, const Complex<K>& x,
                                   const Complex<K>& y, const MapLayout<K>& Lh,
                                   const MapLayout<K>& L0) {
  Matrix<K> bnd(L0.dim(), Lh.dim());
  for (int j = 0; j < Lh.dim(); ++j) {
    const auto& sl = Lh.slots[j];
    auto E = A.from_basis(sl.ab);
    AMat<K> dy = y.diff(sl.deg - 1);
    for (int r2 = 0; r2 < dy.rows; ++r2) {
      auto prod = A.mul(dy.at(r2, sl.row), E);
      for (const auto& t : prod) {
        int i = L0.find(sl.deg, r2, sl.col, t.basis);
        if (i >= 0) bnd(i, j) += t.coeff;
      }
    }
    AMat<K> dx = x.diff(sl.deg - 1);
    for (int c2 = 0; c2 < dx.cols; ++c2) {
      auto prod = A.mul(E, dx.at(sl.col, c2));
      for (const auto& t : prod) {
        int i = L0.find(sl.deg - 1, sl.row, c2, t.basis);
        if (i >= 0) bnd(i, j) += t.coeff;
      }
    }
  }
  return bnd;
}

template <class K>
HomSpace<K> hom_space(const PathAlgebra<K>& A, const Complex<K>& x, const Complex<K>& y) {
  HomSpace<K> H;
  H.layout = map_layout(A, x, y, 0);
  MapLayout<K> L1 = map_layout(A, x, y, +1);
  const int n0 = H.layout.dim();

  Matrix<K> comm = chain_defect_matrix(A, x, y, H.layout, L1);
  H.chain_basis = kernel_basis(comm);

  MapLayout<K> Lh = map_layout(A, x, y, -1);
  Matrix<K> bnd = homotopy_boundary_matrix(A, x, y, Lh, H.layout);
  H.null_span = RowSpace<K>(n0);
  for (int j = 0; j < Lh.dim(); ++j) {
    Vec<K> v(n0, field_traits<K>::zero());
    for (int i = 0; i < n0; ++i) v[i] = bnd(i, j);
    H.null_span.add(std::move(v));
  }

  RowSpace<K> seen(n0);
  for (const auto& r : H.null_span.rows()) seen.add(r);
  for (const auto& v : H.chain_basis)
    if (seen.add(v)) {
      H.class_reps.push_back(v);
      H.class_maps.push_back(vec_to_map(A, H.layout, x, y, v));
    }
  return H;
}

template <class K>
int hom_dim(const PathAlgebra<K>& A, const Complex<K>& x, const Complex<K>& y) {
  // dimension of chain maps modulo homotopy
  HomSpace<K> H = hom_space(A, x, y);
  return H.dim();
}

/// Is the chain map f: X -> Y null-homotopic?
template <class K>
bool is_nullhomotopic(const PathAlgebra<K>& A, const Complex<K>& x, const Complex<K>& y,
                      const DegMap<K>& f) {
  HomSpace<K> H = hom_space(A, x, y);
  return H.null_span.contains(map_to_vec(H.layout, f));
}

/// Solves "g with target_class = class of (g composed into the given linear
/// condition)" style problems; here: find a chain map g: X -> Y whose class
/// coordinates match `target` in H's basis.
template <class K>
DegMap<K> map_from_class(const PathAlgebra<K>& A, const HomSpace<K>& H,
                         const Complex<K>& x, const Complex<K>& y, const Vec<K>& coords) {
  Vec<K> v(H.layout.dim(), field_traits<K>::zero());
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (int j = 0; j < H.layout.dim(); ++j) v[j] += coords[i] * H.class_reps[i][j];
  return vec_to_map(A, H.layout, x, y, v);
}

// ---------------------------------------------------------------------------
// Endomorphism algebra in the homotopy category, with idempotent machinery.
// ---------------------------------------------------------------------------

template <class K>
struct EndAlgebra {
  const PathAlgebra<K>* A = nullptr;
  const Complex<K>* X = nullptr;
  HomSpace<K> H;
  Vec<K> one;  // class coordinates of the identity

  int dim() const { return H.dim(); }

  Vec<K> mul(const Vec<K>& u, const Vec<K>& v) const {
    DegMap<K> fu = map_from_class(*A, H, *X, *X, u);
    DegMap<K> fv = map_from_class(*A, H, *X, *X, v);
    DegMap<K> comp = compose_maps(*A, *X, *X, *X, fu, fv);
    return H.class_coords(map_to_vec(H.layout, comp));
  }

  bool is_zero(const Vec<K>& u) const {
    for (const auto& c : u)
      if (!field_traits<K>::is_zero(c)) return false;
    return true;
  }

  Vec<K> sub(Vec<K> u, const Vec<K>& v) const {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= v[i];
    return u;
  }
  Vec<K> add(Vec<K> u, const Vec<K>& v) const {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += v[i];
    return u;
  }
  Vec<K> scale(Vec<K> u, const K& c) const {
    for (auto& t : u) t *= c;
    return u;
  }

  bool is_nilpotent(const Vec<K>& u) const {
    Vec<K> p = u;
    for (int k = 0; k < dim() + 1; ++k) {
      if (is_zero(p)) return true;
      p = mul(p, u);
    }
    return is_zero(p);
  }

  /// Monic minimal polynomial coefficients c_0..c_d with  sum c_i u^i = 0,
  /// c_d = 1.
  std::vector<K> min_poly(const Vec<K>& u) const {
    std::vector<Vec<K>> powers;
    Vec<K> p = one;
    RowSpace<K> span(dim());
    for (;;) {
      Vec<K> res = span.residue(p);
      bool zero = true;
      for (const auto& c : res)
        if (!field_traits<K>::is_zero(c)) { zero = false; break; }
      if (zero) break;
      span.add(p);
      powers.push_back(p);
      p = mul(p, u);
    }
    // p = u^{powers.size()} depends on earlier powers: solve for coefficients
    std::size_t d = powers.size();
    Matrix<K> m(dim(), d);
    for (std::size_t j = 0; j < d; ++j)
      for (int i = 0; i < dim(); ++i) m(i, j) = powers[j][i];
    auto sol = solve(m, p);
    if (!sol) throw std::logic_error("min_poly: inconsistent power relation");
    std::vector<K> coeffs(d + 1);
    for (std::size_t j = 0; j < d; ++j) coeffs[j] = -(*sol)[j];
    coeffs[d] = field_traits<K>::one();
    return coeffs;
  }

  Vec<K> eval_poly(const std::vector<K>& coeffs, const Vec<K>& u) const {
    Vec<K> acc(dim(), field_traits<K>::zero());
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      acc = mul(acc, u);
      acc = add(acc, scale(one, coeffs[i]));
    }
    return acc;
  }
};

template <class K>
EndAlgebra<K> end_algebra(const PathAlgebra<K>& A, const Complex<K>& x) {
  EndAlgebra<K> E;
  E.A = &A;
  E.X = &x;
  E.H = hom_space(A, x, x);
  if (E.H.dim() > 0) E.one = E.H.class_coords(map_to_vec(E.H.layout, identity_map(x)));
  return E;
}

/// Rational roots of a monic-ish polynomial over K.
std::vector<Rat> poly_roots(const std::vector<Rat>& coeffs);
std::vector<Fp> poly_roots(const std::vector<Fp>& coeffs);

namespace detail {

template <class K>
std::vector<K> poly_divide_linear(const std::vector<K>& coeffs, const K& root) {
  // divide by (T - root); caller guarantees divisibility
  std::vector<K> q(coeffs.size() - 1);
  K carry = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    q[i] = carry;
    carry = coeffs[i] + root * carry;
  }
  return q;
}

template <class K>
std::vector<K> poly_mul(const std::vector<K>& a, const std::vector<K>& b) {
  std::vector<K> out(a.size() + b.size() - 1, field_traits<K>::zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// extended euclid for polynomials: s*f + t*g = gcd (monic)
template <class K>
void poly_ext_gcd(std::vector<K> f, std::vector<K> g, std::vector<K>& s, std::vector<K>& t);

}  // namespace detail

/// Searches E for a nontrivial idempotent. Strategy: candidate elements whose
/// minimal polynomial has a rational root c with m != (T-c)^deg; then the
/// coprime splitting m = (T-c)^k * g yields an exact idempotent by Bezout.
template <class K>
std::optional<Vec<K>> find_idempotent(const EndAlgebra<K>& E);

/// Verdict used by decompose: either a certified-local endomorphism ring or
/// an explicit idempotent.
template <class K>
struct IndecVerdict {
  bool local = false;
  std::optional<Vec<K>> idem;
};

template <class K>
IndecVerdict<K> probe_indecomposable(const EndAlgebra<K>& E);

/// Strict splitting of a complex along a homotopy idempotent. Requires X
/// minimal so that null-homotopic endomorphisms are nilpotent and the class
/// idempotent lifts to an exact chain idempotent by Newton iteration.
template <class K>
struct StrictSplit {
  Complex<K> part;        // image of the idempotent
  Complex<K> complement;  // image of 1 - e
  DegMap<K> incl_part, proj_part, incl_comp, proj_comp;  // strict: proj*incl = id
};

template <class K>
StrictSplit<K> split_idempotent(const PathAlgebra<K>& A, const Complex<K>& x,
                                const Vec<K>& idem_class, const EndAlgebra<K>& E);

/// Full Krull-Schmidt decomposition data for an arbitrary bounded complex.
template <class K>
struct Decomposition {
  Complex<K> reduced;              // minimal model of the input
  DegMap<K> to_reduced, from_reduced;
  std::vector<Complex<K>> parts;   // indecomposable minimal complexes
  std::vector<DegMap<K>> incl;     // part -> reduced, strict split
  std::vector<DegMap<K>> proj;     // reduced -> part
};

template <class K>
Decomposition<K> decompose(const PathAlgebra<K>& A, const Complex<K>& x);

/// Homotopy equivalence witness.
template <class K>
struct IsoWitness {
  DegMap<K> fwd;  // X -> Y
  DegMap<K> bwd;  // Y -> X, with bwd*fwd ~ id_X and fwd*bwd ~ id_Y
};

/// Iso test for indecomposable complexes (local endomorphism rings).
template <class K>
std::optional<IsoWitness<K>> indec_iso(const PathAlgebra<K>& A, const Complex<K>& x,
                                       const Complex<K>& y);

/// General iso test through decomposition + part matching.
template <class K>
bool isomorphic(const PathAlgebra<K>& A, const Complex<K>& x, const Complex<K>& y);

/// Enumeration of indecomposables by closing stalks under cones of hom-basis
/// maps; returns shift-normalized orbit representatives (top degree 0).
template <class K>
struct OrbitEnumeration {
  std::vector<Complex<K>> orbit_reps;  // minimal, top degree 0
  bool complete = true;                // false when a cap was hit
};

template <class K>
OrbitEnumeration<K> enumerate_orbits(const PathAlgebra<K>& A, int width_bound,
                                     int max_orbits = 64, int max_rounds = 8);

/// Representatives of all isomorphism classes of indecomposables whose shift
/// lies in the window (orbit representatives instantiated across shifts).
/// Throws ResourceLimitError with the partial list attached when a cap hits.
template <class K>
std::vector<Complex<K>> enumerate_indecomposables(const PathAlgebra<K>& A, int width_bound,
                                                  int window_lo, int window_hi,
                                                  int max_orbits = 64) {
  if (width_bound <= 0 || window_lo > window_hi)
    throw std::invalid_argument("enumerate_indecomposables: bounds must be positive");
  OrbitEnumeration<K> orbs = enumerate_orbits(A, width_bound, max_orbits);
  std::vector<Complex<K>> out;
  for (const auto& rep : orbs.orbit_reps)
    for (int k = window_lo; k <= window_hi; ++k) out.push_back(shift(rep, k));
  if (!orbs.complete)
    throw ResourceLimitError("indecomposable enumeration hit the orbit cap at " +
                             std::to_string(out.size()) + " classes (partial output)");
  return out;
}

}  // namespace costab

#include "costab/homotopy_impl.hpp"

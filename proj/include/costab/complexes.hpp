#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "costab/path_algebra.hpp"

namespace costab {

/// Matrix with entries in the path algebra; acts by left multiplication, so
/// composition of morphisms of projectives is the algebra matrix product.
template <class K>
struct AMat {
  using Elem = typename PathAlgebra<K>::Elem;
  int rows = 0, cols = 0;
  std::vector<Elem> e;

  AMat() = default;
  AMat(int r, int c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c) {}

  Elem& at(int r, int c) { return e[static_cast<std::size_t>(r) * cols + c]; }
  const Elem& at(int r, int c) const { return e[static_cast<std::size_t>(r) * cols + c]; }

  bool is_zero() const {
    for (const auto& x : e)
      if (!x.empty()) return false;
    return true;
  }
};

template <class K>
AMat<K> amat_mul(const PathAlgebra<K>& A, const AMat<K>& a, const AMat<K>& b) {
  AMat<K> out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a.at(i, k).empty()) continue;
      for (int j = 0; j < b.cols; ++j) {
        if (b.at(k, j).empty()) continue;
        out.at(i, j) = A.add(out.at(i, j), A.mul(a.at(i, k), b.at(k, j)));
      }
    }
  return out;
}

template <class K>
AMat<K> amat_add(const PathAlgebra<K>& A, const AMat<K>& a, const AMat<K>& b) {
  AMat<K> out(a.rows, a.cols);
  for (std::size_t i = 0; i < out.e.size(); ++i) out.e[i] = A.add(a.e[i], b.e[i]);
  return out;
}

template <class K>
AMat<K> amat_neg(const PathAlgebra<K>& A, AMat<K> a) {
  for (auto& x : a.e) x = A.negate(x);
  return a;
}

template <class K>
AMat<K> amat_scale(const PathAlgebra<K>& A, AMat<K> a, const K& c) {
  for (auto& x : a.e) x = A.scale(x, c);
  return a;
}

/// Bounded complex of finitely generated projectives, stored as the multiset
/// of projective summands per degree plus differentials. Cochain convention:
/// d raises degree, d*d = 0 exactly.
template <class K>
struct Complex {
  const PathAlgebra<K>* A = nullptr;
  int lo = 0;                            // degree of mods[0]
  std::vector<std::vector<int>> mods;    // per degree: vertex of each summand
  std::vector<AMat<K>> diffs;            // diffs[i]: mods[i] -> mods[i+1]

  Complex() = default;
  explicit Complex(const PathAlgebra<K>* alg) : A(alg) {}

  int hi() const { return lo + static_cast<int>(mods.size()) - 1; }
  bool in_range(int d) const { return d >= lo && d <= hi(); }
  const std::vector<int>& module(int d) const {
    static const std::vector<int> empty;
    return in_range(d) ? mods[d - lo] : empty;
  }
  AMat<K> diff(int d) const {
    int nr = static_cast<int>(module(d + 1).size());
    int nc = static_cast<int>(module(d).size());
    if (in_range(d) && d + 1 <= hi()) return diffs[d - lo];
    return AMat<K>(nr, nc);
  }
  bool is_zero() const {
    for (const auto& m : mods)
      if (!m.empty()) return false;
    return true;
  }
  int total_summands() const {
    int n = 0;
    for (const auto& m : mods) n += static_cast<int>(m.size());
    return n;
  }

  /// Drops empty degrees at both ends.
  void normalize() {
    while (!mods.empty() && mods.front().empty()) {
      mods.erase(mods.begin());
      if (!diffs.empty()) diffs.erase(diffs.begin());
      ++lo;
    }
    while (!mods.empty() && mods.back().empty()) {
      mods.pop_back();
      if (!diffs.empty()) diffs.pop_back();
    }
    if (mods.empty()) { lo = 0; diffs.clear(); }
    if (!mods.empty() && diffs.size() + 1 != mods.size())
      diffs.resize(mods.size() - 1);
  }
};

/// Degreewise map between complexes (chain map, homotopy, ...): degree ->
/// matrix X^deg -> Y^{deg+s} where s is fixed by context.
template <class K>
using DegMap = std::map<int, AMat<K>>;

template <class K>
Complex<K> zero_complex(const PathAlgebra<K>& A) {
  return Complex<K>(&A);
}

template <class K>
Complex<K> stalk(const PathAlgebra<K>& A, int vertex, int deg = 0) {
  Complex<K> c(&A);
  c.lo = deg;
  c.mods = {{vertex}};
  return c;
}

/// Suspension. (Sigma X)^n = X^{n+1}, differential negated; k may be negative.
template <class K>
Complex<K> shift(const Complex<K>& x, int k) {
  Complex<K> out = x;
  out.lo -= k;
  if (k % 2 != 0)
    for (auto& d : out.diffs) d = amat_neg(*x.A, d);
  return out;
}

template <class K>
void check_complex(const Complex<K>& x) {
  const PathAlgebra<K>& A = *x.A;
  for (int d = x.lo; d <= x.hi(); ++d) {
    const auto& src = x.module(d);
    const auto& tgt = x.module(d + 1);
    AMat<K> m = x.diff(d);
    if (m.rows != static_cast<int>(tgt.size()) || m.cols != static_cast<int>(src.size()))
      throw std::logic_error("differential shape mismatch");
    for (int r = 0; r < m.rows; ++r)
      for (int c = 0; c < m.cols; ++c)
        for (const auto& t : m.at(r, c))
          if (A.basis_src(t.basis) != src[c] || A.basis_tgt(t.basis) != tgt[r])
            throw std::logic_error("differential entry violates vertex endpoints");
    if (d + 2 <= x.hi() + 1) {
      AMat<K> dd = amat_mul(A, x.diff(d + 1), m);
      if (!dd.is_zero()) throw std::logic_error("d*d != 0");
    }
  }
}

/// Checks d_Y f = f d_X exactly.
template <class K>
bool is_chain_map(const Complex<K>& x, const Complex<K>& y, const DegMap<K>& f) {
  const PathAlgebra<K>& A = *x.A;
  auto comp = [&](int d) -> AMat<K> {
    auto it = f.find(d);
    if (it != f.end()) return it->second;
    return AMat<K>(static_cast<int>(y.module(d).size()),
                   static_cast<int>(x.module(d).size()));
  };
  for (int d = std::min(x.lo, y.lo) - 1; d <= std::max(x.hi(), y.hi()) + 1; ++d) {
    AMat<K> lhs = amat_mul(A, y.diff(d), comp(d));
    AMat<K> rhs = amat_mul(A, comp(d + 1), x.diff(d));
    AMat<K> delta = amat_add(A, lhs, amat_neg(A, rhs));
    if (!delta.is_zero()) return false;
  }
  return true;
}

template <class K>
DegMap<K> identity_map(const Complex<K>& x) {
  DegMap<K> f;
  for (int d = x.lo; d <= x.hi(); ++d) {
    int n = static_cast<int>(x.module(d).size());
    AMat<K> m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = x.A->unit(x.module(d)[i]);
    f[d] = std::move(m);
  }
  return f;
}

template <class K>
DegMap<K> compose_maps(const PathAlgebra<K>& A, const Complex<K>& x, const Complex<K>& y,
                       const Complex<K>& z, const DegMap<K>& g, const DegMap<K>& f,
                       int sf = 0, int sg = 0) {
  // g: Y -> Z of degree sg, f: X -> Y of degree sf; composite has degree sf+sg
  DegMap<K> out;
  for (int d = x.lo; d <= x.hi(); ++d) {
    auto fit = f.find(d);
    if (fit == f.end()) continue;
    auto git = g.find(d + sf);
    if (git == g.end()) continue;
    AMat<K> m = amat_mul(A, git->second, fit->second);
    if (!m.is_zero()) out[d] = std::move(m);
  }
  (void)y; (void)z; (void)sg;
  return out;
}

template <class K>
DegMap<K> add_maps(const PathAlgebra<K>& A, const DegMap<K>& f, const DegMap<K>& g) {
  DegMap<K> out = f;
  for (const auto& [d, m] : g) {
    auto it = out.find(d);
    if (it == out.end()) out[d] = m;
    else it->second = amat_add(A, it->second, m);
  }
  return out;
}

template <class K>
DegMap<K> negate_map(const PathAlgebra<K>& A, DegMap<K> f) {
  for (auto& [d, m] : f) m = amat_neg(A, m);
  return f;
}

template <class K>
DegMap<K> scale_map(const PathAlgebra<K>& A, DegMap<K> f, const K& c) {
  for (auto& [d, m] : f) m = amat_scale(A, m, c);
  return f;
}

/// Sigma^k applied to a map X -> Y (components reindexed; no sign, signs live
/// in the shifted differentials).
template <class K>
DegMap<K> shift_map(const DegMap<K>& f, int k) {
  DegMap<K> out;
  for (const auto& [d, m] : f) out[d - k] = m;
  return out;
}

struct ConeTriangle {
  // index bookkeeping for cone(f: X -> Y): C^n = Y^n (+) X^{n+1}
};

/// Mapping cone with the canonical triangle maps.
/// C(f)^n = Y^n (+) X^{n+1}, d(y,x) = (d_Y y + f x, -d_X x),
/// iota: Y -> C inclusion, pi: C -> Sigma X projection.
template <class K>
struct Cone {
  Complex<K> c;
  DegMap<K> iota;  // Y -> C
  DegMap<K> pi;    // C -> Sigma X
};

template <class K>
Cone<K> cone(const Complex<K>& x, const Complex<K>& y, const DegMap<K>& f) {
  const PathAlgebra<K>& A = *x.A;
  Cone<K> out;
  out.c = Complex<K>(&A);
  int lo = std::min(y.lo, x.lo - 1);
  int hi = std::max(y.hi(), x.hi() - 1);
  if (x.is_zero() && y.is_zero()) { out.c.lo = 0; return out; }
  out.c.lo = lo;
  out.c.mods.resize(hi - lo + 1);
  for (int d = lo; d <= hi; ++d) {
    auto& m = out.c.mods[d - lo];
    m = y.module(d);
    const auto& xs = x.module(d + 1);
    m.insert(m.end(), xs.begin(), xs.end());
  }
  out.c.diffs.resize(out.c.mods.size() > 0 ? out.c.mods.size() - 1 : 0);
  auto fcomp = [&](int d) -> AMat<K> {
    auto it = f.find(d);
    if (it != f.end()) return it->second;
    return AMat<K>(static_cast<int>(y.module(d).size()),
                   static_cast<int>(x.module(d).size()));
  };
  for (int d = lo; d < hi; ++d) {
    int yr = static_cast<int>(y.module(d + 1).size());
    int yc = static_cast<int>(y.module(d).size());
    int xr = static_cast<int>(x.module(d + 2).size());
    int xc = static_cast<int>(x.module(d + 1).size());
    AMat<K> m(yr + xr, yc + xc);
    AMat<K> dy = y.diff(d), dx = x.diff(d + 1), fm = fcomp(d + 1);
    for (int r = 0; r < yr; ++r) {
      for (int c = 0; c < yc; ++c) m.at(r, c) = dy.at(r, c);
      for (int c = 0; c < xc; ++c) m.at(r, yc + c) = fm.at(r, c);
    }
    for (int r = 0; r < xr; ++r)
      for (int c = 0; c < xc; ++c) m.at(yr + r, yc + c) = A.negate(dx.at(r, c));
    out.c.diffs[d - lo] = std::move(m);
  }
  out.c.normalize();
  // iota: y ↦ (y, 0)
  for (int d = y.lo; d <= y.hi(); ++d) {
    int yr = static_cast<int>(y.module(d).size());
    if (yr == 0) continue;
    int cr = static_cast<int>(out.c.module(d).size());
    AMat<K> m(cr, yr);
    for (int i = 0; i < yr; ++i) m.at(i, i) = A.unit(y.module(d)[i]);
    out.iota[d] = std::move(m);
  }
  // pi: (y, x) ↦ x;   (Sigma X)^d = X^{d+1}
  Complex<K> sx = shift(x, 1);
  for (int d = sx.lo; d <= sx.hi(); ++d) {
    int xr = static_cast<int>(sx.module(d).size());
    if (xr == 0) continue;
    int yc = static_cast<int>(y.module(d).size());
    int cc = static_cast<int>(out.c.module(d).size());
    AMat<K> m(xr, cc);
    for (int i = 0; i < xr; ++i) m.at(i, yc + i) = A.unit(sx.module(d)[i]);
    out.pi[d] = std::move(m);
  }
  return out;
}

/// Direct sum with inclusion/projection maps per part.
template <class K>
struct SumParts {
  Complex<K> sum;
  std::vector<DegMap<K>> incl;
  std::vector<DegMap<K>> proj;
};

template <class K>
SumParts<K> direct_sum(const PathAlgebra<K>& A, const std::vector<const Complex<K>*>& parts) {
  SumParts<K> out;
  out.sum = Complex<K>(&A);
  int lo = 0, hi = -1;
  bool any = false;
  for (auto* p : parts) {
    if (p->is_zero()) continue;
    if (!any) { lo = p->lo; hi = p->hi(); any = true; }
    else { lo = std::min(lo, p->lo); hi = std::max(hi, p->hi()); }
  }
  if (!any) {
    out.sum.lo = 0;
    out.incl.resize(parts.size());
    out.proj.resize(parts.size());
    return out;
  }
  out.sum.lo = lo;
  out.sum.mods.resize(hi - lo + 1);
  std::vector<std::vector<int>> offsets(parts.size(), std::vector<int>(hi - lo + 1, 0));
  for (int d = lo; d <= hi; ++d) {
    auto& m = out.sum.mods[d - lo];
    for (std::size_t i = 0; i < parts.size(); ++i) {
      offsets[i][d - lo] = static_cast<int>(m.size());
      const auto& pm = parts[i]->module(d);
      m.insert(m.end(), pm.begin(), pm.end());
    }
  }
  out.sum.diffs.resize(out.sum.mods.size() - 1);
  for (int d = lo; d < hi; ++d) {
    AMat<K> m(static_cast<int>(out.sum.mods[d + 1 - lo].size()),
              static_cast<int>(out.sum.mods[d - lo].size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      AMat<K> pd = parts[i]->diff(d);
      int ro = offsets[i][d + 1 - lo], co = offsets[i][d - lo];
      for (int r = 0; r < pd.rows; ++r)
        for (int c = 0; c < pd.cols; ++c) m.at(ro + r, co + c) = pd.at(r, c);
    }
    out.sum.diffs[d - lo] = std::move(m);
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    DegMap<K> in, pr;
    for (int d = parts[i]->lo; d <= parts[i]->hi(); ++d) {
      int pn = static_cast<int>(parts[i]->module(d).size());
      if (pn == 0) continue;
      int sn = static_cast<int>(out.sum.module(d).size());
      AMat<K> mi(sn, pn), mp(pn, sn);
      for (int j = 0; j < pn; ++j) {
        int v = parts[i]->module(d)[j];
        mi.at(offsets[i][d - lo] + j, j) = A.unit(v);
        mp.at(j, offsets[i][d - lo] + j) = A.unit(v);
      }
      in[d] = std::move(mi);
      pr[d] = std::move(mp);
    }
    out.incl.push_back(std::move(in));
    out.proj.push_back(std::move(pr));
  }
  return out;
}

/// Gaussian elimination on a complex: cancels differential entries that are
/// units, producing the minimal model together with the equivalence maps
/// (to_min * from_min = id exactly; from_min * to_min homotopic to id).
template <class K>
struct Minimized {
  Complex<K> min;
  DegMap<K> to_min;    // X -> min
  DegMap<K> from_min;  // min -> X
};

/// Serialization as degree-indexed matrices over the algebra; inverse of
/// complex_from_text.
template <class K>
std::string complex_to_text(const Complex<K>& x) {
  const PathAlgebra<K>& A = *x.A;
  std::string out = "complex-version: 1\n";
  for (int d = x.lo; d <= x.hi(); ++d) {
    out += "degree " + std::to_string(d) + ":";
    for (int v : x.module(d)) out += " P" + A.presentation().vertex_names[v];
    out += "\n";
    if (d < x.hi()) {
      AMat<K> m = x.diff(d);
      for (int r = 0; r < m.rows; ++r) {
        out += "  d[" + std::to_string(d) + "] row " + std::to_string(r) + ":";
        for (int c = 0; c < m.cols; ++c) out += " (" + A.to_string(m.at(r, c)) + ")";
        out += "\n";
      }
    }
  }
  return out;
}

namespace detail {

template <class K>
typename PathAlgebra<K>::Elem parse_alg_elem(const PathAlgebra<K>& A, const std::string& txt) {
  typename PathAlgebra<K>::Elem out = A.zero();
  std::string t = txt;
  if (t == "0" || t.empty()) return out;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    std::size_t next = t.find(" + ", pos);
    std::string term = t.substr(pos, next == std::string::npos ? next : next - pos);
    pos = next == std::string::npos ? next : next + 3;
    std::vector<std::string> parts;
    std::size_t p2 = 0;
    while (p2 != std::string::npos) {
      std::size_t star = term.find('*', p2);
      parts.push_back(term.substr(p2, star == std::string::npos ? star : star - p2));
      p2 = star == std::string::npos ? star : star + 1;
    }
    if (parts.size() < 2) throw std::invalid_argument("bad algebra element: " + term);
    K coeff = field_traits<K>::from_rational(parse_rational(parts[0]));
    typename PathAlgebra<K>::Elem acc;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      typename PathAlgebra<K>::Elem comp;
      if (parts[i].rfind("e_", 0) == 0)
        comp = A.unit(A.presentation().vertex_index(parts[i].substr(2)));
      else
        comp = A.arrow(A.presentation().arrow_index(parts[i]));
      acc = (i == 1) ? comp : A.mul(comp, acc);
    }
    out = A.add(out, A.scale(acc, coeff));
  }
  return out;
}

}  // namespace detail

template <class K>
Complex<K> complex_from_text(const PathAlgebra<K>& A, const std::string& text) {
  Complex<K> out(&A);
  std::map<int, std::vector<int>> mods;
  std::map<int, std::vector<std::vector<std::string>>> rows;  // degree -> row -> entries
  std::size_t ls = 0;
  while (ls < text.size()) {
    std::size_t le = text.find('\n', ls);
    if (le == std::string::npos) le = text.size();
    std::string line = text.substr(ls, le - ls);
    ls = le + 1;
    if (line.rfind("complex-version:", 0) == 0 || line.empty()) continue;
    if (line.rfind("degree ", 0) == 0) {
      auto colon = line.find(':');
      int d = std::stoi(line.substr(7, colon - 7));
      std::vector<int> verts;
      std::size_t p = colon + 1;
      while (p < line.size()) {
        std::size_t sp = line.find(' ', p + 1);
        std::string tok = line.substr(p + 1, sp == std::string::npos ? sp : sp - p - 1);
        if (!tok.empty()) {
          if (tok[0] != 'P') throw std::invalid_argument("bad summand token: " + tok);
          verts.push_back(A.presentation().vertex_index(tok.substr(1)));
        }
        if (sp == std::string::npos) break;
        p = sp;
      }
      mods[d] = std::move(verts);
    } else if (line.find("d[") != std::string::npos) {
      auto lb = line.find("d[");
      auto rb = line.find(']', lb);
      int d = std::stoi(line.substr(lb + 2, rb - lb - 2));
      std::vector<std::string> entries;
      std::size_t p = line.find('(', rb);
      while (p != std::string::npos) {
        std::size_t q = line.find(')', p);
        entries.push_back(line.substr(p + 1, q - p - 1));
        p = line.find('(', q);
      }
      rows[d].push_back(std::move(entries));
    }
  }
  if (mods.empty()) return out;
  out.lo = mods.begin()->first;
  int hi = mods.rbegin()->first;
  out.mods.resize(hi - out.lo + 1);
  for (const auto& [d, v] : mods) out.mods[d - out.lo] = v;
  out.diffs.resize(out.mods.size() > 0 ? out.mods.size() - 1 : 0);
  for (int d = out.lo; d < hi; ++d) {
    int nr = static_cast<int>(out.module(d + 1).size());
    int nc = static_cast<int>(out.module(d).size());
    AMat<K> m(nr, nc);
    auto it = rows.find(d);
    if (it != rows.end()) {
      if (static_cast<int>(it->second.size()) != nr)
        throw std::invalid_argument("differential row count mismatch at degree " +
                                    std::to_string(d));
      for (int r = 0; r < nr; ++r) {
        if (static_cast<int>(it->second[r].size()) != nc)
          throw std::invalid_argument("differential column count mismatch");
        for (int c = 0; c < nc; ++c)
          m.at(r, c) = detail::parse_alg_elem(A, it->second[r][c]);
      }
    }
    out.diffs[d - out.lo] = std::move(m);
  }
  check_complex(out);
  return out;
}

template <class K>
Minimized<K> minimize(const Complex<K>& x) {
  const PathAlgebra<K>& A = *x.A;
  Minimized<K> out;
  out.min = x;
  out.min.normalize();
  out.to_min = identity_map(out.min);
  out.from_min = identity_map(out.min);

  for (;;) {
    Complex<K>& cur = out.min;
    int fd = 0, fr = -1, fc = -1;
    for (int d = cur.lo; d < cur.hi() && fr < 0; ++d) {
      AMat<K> m = cur.diff(d);
      for (int r = 0; r < m.rows && fr < 0; ++r)
        for (int c = 0; c < m.cols; ++c) {
          int vc = cur.module(d)[c], vr = cur.module(d + 1)[r];
          if (vc != vr) continue;
          if (!field_traits<K>::is_zero(A.vertex_coeff(m.at(r, c), vc))) {
            fd = d; fr = r; fc = c;
            break;
          }
        }
    }
    if (fr < 0) break;

    const int d = fd;
    AMat<K> dm = cur.diff(d);
    int v = cur.module(d)[fc];
    auto uinv = A.local_inverse(dm.at(fr, fc), v);

    auto drop = [](const std::vector<int>& xs, int skip) {
      std::vector<int> out2;
      for (int i = 0; i < static_cast<int>(xs.size()); ++i)
        if (i != skip) out2.push_back(xs[i]);
      return out2;
    };

    Complex<K> next(&A);
    next.lo = cur.lo;
    next.mods = cur.mods;
    next.mods[d - cur.lo] = drop(cur.module(d), fc);
    next.mods[d + 1 - cur.lo] = drop(cur.module(d + 1), fr);
    next.diffs = cur.diffs;

    // d'(d) = D - C u^{-1} B over the surviving rows/columns
    {
      AMat<K> nd(static_cast<int>(next.mods[d + 1 - cur.lo].size()),
                 static_cast<int>(next.mods[d - cur.lo].size()));
      int rr = 0;
      for (int r = 0; r < dm.rows; ++r) {
        if (r == fr) continue;
        int cc = 0;
        for (int c = 0; c < dm.cols; ++c) {
          if (c == fc) continue;
          auto corr = A.mul(dm.at(r, fc), A.mul(uinv, dm.at(fr, c)));
          nd.at(rr, cc) = A.add(dm.at(r, c), A.negate(corr));
          ++cc;
        }
        ++rr;
      }
      next.diffs[d - cur.lo] = std::move(nd);
    }
    // d'(d-1): drop row fc
    if (d - 1 >= cur.lo) {
      AMat<K> prev = cur.diff(d - 1);
      AMat<K> nd(prev.rows - 1, prev.cols);
      int rr = 0;
      for (int r = 0; r < prev.rows; ++r) {
        if (r == fc) continue;
        for (int c = 0; c < prev.cols; ++c) nd.at(rr, c) = prev.at(r, c);
        ++rr;
      }
      next.diffs[d - 1 - cur.lo] = std::move(nd);
    }
    // d'(d+1): drop column fr
    if (d + 1 <= cur.hi() - 1) {
      AMat<K> nxt = cur.diff(d + 1);
      AMat<K> nd(nxt.rows, nxt.cols - 1);
      for (int r = 0; r < nxt.rows; ++r) {
        int cc = 0;
        for (int c = 0; c < nxt.cols; ++c) {
          if (c == fr) continue;
          nd.at(r, cc) = nxt.at(r, c);
          ++cc;
        }
      }
      next.diffs[d + 1 - cur.lo] = std::move(nd);
    }

    // step maps: phi: cur -> next, psi: next -> cur
    DegMap<K> phi, psi;
    for (int dd = cur.lo; dd <= cur.hi(); ++dd) {
      int cn = static_cast<int>(cur.module(dd).size());
      int nn = static_cast<int>(next.module(dd).size());
      if (cn == 0 && nn == 0) continue;
      AMat<K> mp(nn, cn), mq(cn, nn);
      if (dd == d) {
        // phi_d(s, rest) = rest ; psi_d(rest) = (-u^{-1} B rest, rest)
        int cc = 0;
        for (int c = 0; c < cn; ++c) {
          if (c == fc) continue;
          mp.at(cc, c) = A.unit(cur.module(dd)[c]);
          mq.at(c, cc) = A.unit(cur.module(dd)[c]);
          mq.at(fc, cc) = A.negate(A.mul(uinv, dm.at(fr, c)));
          ++cc;
        }
      } else if (dd == d + 1) {
        // phi_{d+1}(t, rest) = rest - C u^{-1} t ; psi_{d+1}(rest) = (0, rest)
        int rr = 0;
        for (int r = 0; r < cn; ++r) {
          if (r == fr) continue;
          mp.at(rr, r) = A.unit(cur.module(dd)[r]);
          mp.at(rr, fr) = A.negate(A.mul(dm.at(r, fc), uinv));
          mq.at(r, rr) = A.unit(cur.module(dd)[r]);
          ++rr;
        }
      } else {
        for (int i = 0; i < cn; ++i) {
          mp.at(i, i) = A.unit(cur.module(dd)[i]);
          mq.at(i, i) = A.unit(cur.module(dd)[i]);
        }
      }
      if (!mp.is_zero()) phi[dd] = std::move(mp);
      if (!mq.is_zero()) psi[dd] = std::move(mq);
    }

    out.to_min = compose_maps(A, x, cur, next, phi, out.to_min);
    out.from_min = compose_maps(A, next, cur, x, out.from_min, psi);
    next.normalize();
    out.min = std::move(next);
  }
  return out;
}

}  // namespace costab

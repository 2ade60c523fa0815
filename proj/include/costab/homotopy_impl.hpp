#pragma once

// Implementation details for homotopy.hpp (templated; kept out of the way).

#include <cassert>

namespace costab {

namespace detail {

template <class K>
int poly_deg(const std::vector<K>& p) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (!field_traits<K>::is_zero(p[i])) return static_cast<int>(i);
  return -1;
}

template <class K>
std::vector<K> poly_trim(std::vector<K> p) {
  int d = poly_deg(p);
  p.resize(d + 1 < 1 ? 1 : d + 1, field_traits<K>::zero());
  return p;
}

template <class K>
std::vector<K> poly_add(const std::vector<K>& a, const std::vector<K>& b) {
  std::vector<K> out(std::max(a.size(), b.size()), field_traits<K>::zero());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

template <class K>
std::vector<K> poly_scale(std::vector<K> a, const K& c) {
  for (auto& x : a) x *= c;
  return a;
}

// division with remainder: a = q*b + r
template <class K>
void poly_divmod(std::vector<K> a, const std::vector<K>& b, std::vector<K>& q,
                 std::vector<K>& r) {
  int db = poly_deg(b);
  assert(db >= 0);
  q.assign(std::max<std::size_t>(a.size(), 1), field_traits<K>::zero());
  K lead_inv = field_traits<K>::one() / b[db];
  for (int da = poly_deg(a); da >= db; da = poly_deg(a)) {
    K c = a[da] * lead_inv;
    q[da - db] += c;
    for (int i = 0; i <= db; ++i) a[da - db + i] -= c * b[i];
  }
  r = poly_trim(std::move(a));
  q = poly_trim(std::move(q));
}

template <class K>
void poly_ext_gcd(std::vector<K> f, std::vector<K> g, std::vector<K>& s,
                  std::vector<K>& t) {
  // returns s, t with s*f + t*g = gcd(f, g), gcd normalized monic
  std::vector<K> r0 = poly_trim(f), r1 = poly_trim(g);
  std::vector<K> s0{field_traits<K>::one()}, s1{field_traits<K>::zero()};
  std::vector<K> t0{field_traits<K>::zero()}, t1{field_traits<K>::one()};
  while (poly_deg(r1) >= 0) {
    std::vector<K> q, r;
    poly_divmod(r0, r1, q, r);
    auto step = [&](std::vector<K>& a0, std::vector<K>& a1) {
      K mone = -field_traits<K>::one();
      std::vector<K> nxt = poly_add(a0, poly_scale(poly_mul(q, a1), mone));
      a0 = std::move(a1);
      a1 = poly_trim(std::move(nxt));
    };
    step(s0, s1);
    step(t0, t1);
    r0 = std::move(r1);
    r1 = std::move(r);
  }
  int d = poly_deg(r0);
  K inv = field_traits<K>::one() / r0[d];
  s = poly_scale(std::move(s0), inv);
  t = poly_scale(std::move(t0), inv);
}

}  // namespace detail

template <class K>
std::optional<Vec<K>> find_idempotent(const EndAlgebra<K>& E) {
  using FT = field_traits<K>;
  const int m = E.dim();
  if (m <= 1) return std::nullopt;

  std::vector<Vec<K>> candidates;
  auto unit = [&](int i) {
    Vec<K> v(m, FT::zero());
    v[i] = FT::one();
    return v;
  };
  for (int i = 0; i < m; ++i) candidates.push_back(unit(i));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      candidates.push_back(E.add(unit(i), unit(j)));
      candidates.push_back(E.sub(unit(i), unit(j)));
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) candidates.push_back(E.mul(unit(i), unit(j)));
  // deterministic pseudo-random combinations as a last resort
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto rnd = [&]() {
    state ^= state << 13; state ^= state >> 7; state ^= state << 17;
    return state;
  };
  for (int round = 0; round < 24; ++round) {
    Vec<K> v(m, FT::zero());
    for (int i = 0; i < m; ++i) {
      switch (rnd() % 5) {
        case 0: v[i] = FT::one(); break;
        case 1: v[i] = -FT::one(); break;
        case 2: v[i] = FT::one() + FT::one(); break;
        default: break;
      }
    }
    candidates.push_back(std::move(v));
  }

  for (const auto& u : candidates) {
    if (E.is_zero(u)) continue;
    std::vector<K> mp = E.min_poly(u);
    if (detail::poly_deg(mp) < 2) continue;
    std::vector<K> roots = poly_roots(mp);
    for (const K& c : roots) {
      // strip (T - c)^k
      std::vector<K> rest = mp;
      std::vector<K> lin{-c, FT::one()};
      int k = 0;
      for (;;) {
        // evaluate rest at c
        K val = FT::zero();
        for (std::size_t i = rest.size(); i-- > 0;) val = val * c + rest[i];
        if (!FT::is_zero(val)) break;
        rest = detail::poly_divide_linear(rest, c);
        ++k;
      }
      if (k == 0 || detail::poly_deg(rest) < 1) continue;  // m == (T-c)^deg: no split
      std::vector<K> f{FT::one()};
      for (int i = 0; i < k; ++i) f = detail::poly_mul(f, lin);
      std::vector<K> s, t;
      detail::poly_ext_gcd(f, rest, s, t);
      Vec<K> e = E.eval_poly(detail::poly_mul(s, f), u);
      Vec<K> e2 = E.mul(e, e);
      if (!(e2 == e)) continue;  // numerical impossibility over exact fields; be safe
      if (E.is_zero(e) || e == E.one) continue;
      return e;
    }
  }
  return std::nullopt;
}

template <class K>
IndecVerdict<K> probe_indecomposable(const EndAlgebra<K>& E) {
  IndecVerdict<K> out;
  const int m = E.dim();
  if (m <= 1) {
    out.local = true;
    return out;
  }
  out.idem = find_idempotent(E);
  if (out.idem) return out;

  // Certify locality: dim E/rad(E) == 1 via the trace form (valid over Q and
  // over F_p with p far above dim E).
  auto unit = [&](int i) {
    Vec<K> v(m, field_traits<K>::zero());
    v[i] = field_traits<K>::one();
    return v;
  };
  auto trace_left_mul = [&](const Vec<K>& u) {
    K tr = field_traits<K>::zero();
    for (int j = 0; j < m; ++j) tr += E.mul(u, unit(j))[j];
    return tr;
  };
  Matrix<K> gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(j, i) = trace_left_mul(E.mul(unit(i), unit(j)));
  std::size_t rad_dim = kernel_basis(gram).size();
  if (static_cast<int>(m - rad_dim) == 1) {
    out.local = true;
    return out;
  }
  throw DecomposeError(
      "idempotent search failed on a provably non-local endomorphism ring; "
      "retry with a different ground field");
}

namespace detail {

template <class K>
bool degmap_equal(const PathAlgebra<K>& A, const DegMap<K>& f, const DegMap<K>& g) {
  auto nonzero = [](const DegMap<K>& h) {
    std::map<int, const AMat<K>*> out;
    for (const auto& [d, m] : h)
      if (!m.is_zero()) out[d] = &m;
    return out;
  };
  auto fa = nonzero(f), ga = nonzero(g);
  if (fa.size() != ga.size()) return false;
  for (const auto& [d, mp] : fa) {
    auto it = ga.find(d);
    if (it == ga.end()) return false;
    AMat<K> delta = amat_add(A, *mp, amat_neg(A, *it->second));
    if (!delta.is_zero()) return false;
  }
  return true;
}

}  // namespace detail

template <class K>
StrictSplit<K> split_idempotent(const PathAlgebra<K>& A, const Complex<K>& x,
                                const Vec<K>& idem_class, const EndAlgebra<K>& E) {
  // lift to an exact chain idempotent; null-homotopic endomorphisms of a
  // minimal complex have radical entries, hence are nilpotent, so Newton
  // iteration terminates exactly.
  DegMap<K> e = map_from_class(A, E.H, x, x, idem_class);
  for (int iter = 0;; ++iter) {
    DegMap<K> e2 = compose_maps(A, x, x, x, e, e);
    if (detail::degmap_equal(A, e2, e)) break;
    if (iter > 64) throw std::logic_error("idempotent Newton iteration did not converge");
    DegMap<K> e3 = compose_maps(A, x, x, x, e2, e);
    // 3 e^2 - 2 e^3
    K three = field_traits<K>::one() + field_traits<K>::one() + field_traits<K>::one();
    K mtwo = -(field_traits<K>::one() + field_traits<K>::one());
    e = add_maps(A, scale_map(A, e2, three), scale_map(A, std::move(e3), mtwo));
  }

  auto build_side = [&](const DegMap<K>& idem) {
    std::pair<Complex<K>, std::pair<DegMap<K>, DegMap<K>>> out;
    Complex<K>& part = out.first;
    DegMap<K>& incl = out.second.first;
    DegMap<K>& proj = out.second.second;
    part = Complex<K>(&A);
    part.lo = x.lo;
    part.mods.resize(x.mods.size());
    std::vector<std::vector<int>> pivots(x.mods.size());
    for (int d = x.lo; d <= x.hi(); ++d) {
      const auto& mod = x.module(d);
      int n = static_cast<int>(mod.size());
      AMat<K> ed(n, n);
      auto it = idem.find(d);
      if (it != idem.end()) ed = it->second;
      // scalar "top" matrix: e_v coefficients on matching vertices
      Matrix<K> top(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (mod[i] == mod[j]) top(i, j) = A.vertex_coeff(ed.at(i, j), mod[j]);
      Echelon<K> ech = reduced_row_echelon(top);
      for (std::size_t pc = 0; pc < ech.pivot_cols.size(); ++pc)
        pivots[d - x.lo].push_back(static_cast<int>(ech.pivot_cols[pc]));
      for (int p : pivots[d - x.lo]) part.mods[d - x.lo].push_back(mod[p]);

      int r = static_cast<int>(pivots[d - x.lo].size());
      if (r == 0 && n == 0) continue;
      // mu = columns of e at the pivots
      AMat<K> mu(n, r);
      for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) mu.at(i, j) = ed.at(i, pivots[d - x.lo][j]);
      // solve nu * mu = id over the algebra, then nu := nu * e
      MapLayout<K> dummy;  // layout machinery not needed; assemble directly
      std::vector<std::tuple<int, int, int>> slots;  // (row a, col k, basis)
      for (int a = 0; a < r; ++a) {
        int wa = mod[pivots[d - x.lo][a]];
        for (int k = 0; k < n; ++k)
          for (int ab : A.component(mod[k], wa)) slots.push_back({a, k, ab});
      }
      // equations: for a in [r], b in [r]: sum_k nu[a][k] mu[k][b] = delta_ab e_{v_b}
      // coordinates over the algebra basis
      std::vector<Vec<K>> rows;
      Vec<K> rhs_all;
      std::vector<std::pair<std::pair<int, int>, int>> eq_index;  // ((a,b), alg basis)
      std::map<std::tuple<int, int, int>, int> eq_of;
      auto eq_slot = [&](int a, int b, int ab) {
        auto key = std::make_tuple(a, b, ab);
        auto it2 = eq_of.find(key);
        if (it2 != eq_of.end()) return it2->second;
        int idx = static_cast<int>(eq_index.size());
        eq_of[key] = idx;
        eq_index.push_back({{a, b}, ab});
        return idx;
      };
      // build sparse columns then assemble
      std::vector<std::vector<std::pair<int, K>>> cols(slots.size());
      for (std::size_t sidx = 0; sidx < slots.size(); ++sidx) {
        auto [a, k, ab] = slots[sidx];
        for (int b = 0; b < r; ++b) {
          auto prod = A.mul(A.from_basis(ab), mu.at(k, b));
          for (const auto& tterm : prod)
            cols[sidx].push_back({eq_slot(a, b, tterm.basis), tterm.coeff});
        }
      }
      // rhs
      for (int a = 0; a < r; ++a) {
        int vb = mod[pivots[d - x.lo][a]];
        eq_slot(a, a, A.unit(vb)[0].basis);
      }
      Matrix<K> sys(eq_index.size(), slots.size());
      for (std::size_t sidx = 0; sidx < slots.size(); ++sidx)
        for (const auto& [ei, cval] : cols[sidx]) sys(ei, sidx) += cval;
      Vec<K> rhs(eq_index.size(), field_traits<K>::zero());
      for (int a = 0; a < r; ++a) {
        int vb = mod[pivots[d - x.lo][a]];
        rhs[eq_of.at({a, a, A.unit(vb)[0].basis})] = field_traits<K>::one();
      }
      auto sol = solve(sys, rhs);
      if (!sol) throw std::logic_error("split_idempotent: retraction system inconsistent");
      AMat<K> nu(r, n);
      for (std::size_t sidx = 0; sidx < slots.size(); ++sidx) {
        auto [a, k, ab] = slots[sidx];
        if (!field_traits<K>::is_zero((*sol)[sidx]))
          nu.at(a, k) = A.add(nu.at(a, k), A.from_basis(ab, (*sol)[sidx]));
      }
      nu = amat_mul(A, nu, ed);
      // retraction must be exact: nu * mu = id on the summand
      {
        AMat<K> check = amat_mul(A, nu, mu);
        AMat<K> idr(r, r);
        for (int i = 0; i < r; ++i) idr.at(i, i) = A.unit(mod[pivots[d - x.lo][i]]);
        if (!amat_add(A, check, amat_neg(A, idr)).is_zero())
          throw std::logic_error("split_idempotent: retraction is not exact");
      }
      if (n > 0 && r > 0) {
        incl[d] = std::move(mu);
        proj[d] = std::move(nu);
      } else if (r > 0) {
        incl[d] = AMat<K>(n, r);
        proj[d] = AMat<K>(r, n);
      }
      (void)dummy;
    }
    part.diffs.assign(part.mods.size() > 0 ? part.mods.size() - 1 : 0, AMat<K>());
    for (int d = part.lo; d < part.hi(); ++d) {
      auto pit = proj.find(d + 1);
      auto iit = incl.find(d);
      int rr = static_cast<int>(part.module(d + 1).size());
      int cc = static_cast<int>(part.module(d).size());
      AMat<K> dd(rr, cc);
      if (pit != proj.end() && iit != incl.end())
        dd = amat_mul(A, pit->second, amat_mul(A, x.diff(d), iit->second));
      part.diffs[d - part.lo] = std::move(dd);
    }
    part.normalize();
    check_complex(part);
    return out;
  };

  StrictSplit<K> out;
  auto one = identity_map(x);
  DegMap<K> comp_idem = add_maps(A, one, negate_map(A, e));
  auto side1 = build_side(e);
  auto side2 = build_side(comp_idem);
  out.part = std::move(side1.first);
  out.incl_part = std::move(side1.second.first);
  out.proj_part = std::move(side1.second.second);
  out.complement = std::move(side2.first);
  out.incl_comp = std::move(side2.second.first);
  out.proj_comp = std::move(side2.second.second);
  return out;
}

template <class K>
Decomposition<K> decompose(const PathAlgebra<K>& A, const Complex<K>& x) {
  Decomposition<K> D;
  Minimized<K> m = minimize(x);
  D.reduced = m.min;
  D.to_reduced = m.to_min;
  D.from_reduced = m.from_min;
  if (D.reduced.is_zero()) return D;

  struct Piece {
    Complex<K> c;
    DegMap<K> incl, proj;  // relative to reduced
  };
  std::vector<Piece> stack;
  stack.push_back({D.reduced, identity_map(D.reduced), identity_map(D.reduced)});
  while (!stack.empty()) {
    Piece p = std::move(stack.back());
    stack.pop_back();
    EndAlgebra<K> E = end_algebra(A, p.c);
    IndecVerdict<K> v = probe_indecomposable(E);
    if (!v.idem) {
      D.parts.push_back(std::move(p.c));
      D.incl.push_back(std::move(p.incl));
      D.proj.push_back(std::move(p.proj));
      continue;
    }
    StrictSplit<K> ss = split_idempotent(A, p.c, *v.idem, E);
    Piece a, b;
    a.incl = compose_maps(A, ss.part, p.c, D.reduced, p.incl, ss.incl_part);
    a.proj = compose_maps(A, D.reduced, p.c, ss.part, ss.proj_part, p.proj);
    a.c = std::move(ss.part);
    b.incl = compose_maps(A, ss.complement, p.c, D.reduced, p.incl, ss.incl_comp);
    b.proj = compose_maps(A, D.reduced, p.c, ss.complement, ss.proj_comp, p.proj);
    b.c = std::move(ss.complement);
    if (!a.c.is_zero()) stack.push_back(std::move(a));
    if (!b.c.is_zero()) stack.push_back(std::move(b));
  }
  return D;
}

template <class K>
std::optional<IsoWitness<K>> indec_iso(const PathAlgebra<K>& A, const Complex<K>& x,
                                       const Complex<K>& y) {
  if (x.is_zero() || y.is_zero()) {
    if (x.is_zero() && y.is_zero()) return IsoWitness<K>{};
    return std::nullopt;
  }
  // fast reject: minimal complexes of isomorphic objects have equal shapes
  {
    auto shape = [](const Complex<K>& c) {
      std::vector<std::pair<int, std::vector<int>>> s;
      for (int d = c.lo; d <= c.hi(); ++d) {
        auto m = c.module(d);
        std::sort(m.begin(), m.end());
        if (!m.empty()) s.push_back({d, m});
      }
      return s;
    };
    if (shape(x) != shape(y)) return std::nullopt;
  }
  HomSpace<K> hf = hom_space(A, x, y);
  if (hf.dim() == 0) return std::nullopt;
  HomSpace<K> hg = hom_space(A, y, x);
  if (hg.dim() == 0) return std::nullopt;
  EndAlgebra<K> E = end_algebra(A, x);
  for (std::size_t i = 0; i < hf.class_maps.size(); ++i)
    for (std::size_t j = 0; j < hg.class_maps.size(); ++j) {
      DegMap<K> gf = compose_maps(A, x, y, x, hg.class_maps[j], hf.class_maps[i]);
      Vec<K> u = E.H.class_coords(map_to_vec(E.H.layout, gf));
      if (E.is_nilpotent(u)) continue;
      // u is a unit in the local algebra End(x); solve u*h = 1
      const int m = E.dim();
      Matrix<K> lu(m, m);
      for (int k = 0; k < m; ++k) {
        Vec<K> ek(m, field_traits<K>::zero());
        ek[k] = field_traits<K>::one();
        Vec<K> col = E.mul(u, ek);
        for (int r = 0; r < m; ++r) lu(r, k) = col[r];
      }
      auto h = solve(lu, E.one);
      if (!h) continue;
      DegMap<K> hmap = map_from_class(A, E.H, x, x, *h);
      IsoWitness<K> w;
      w.fwd = hf.class_maps[i];
      w.bwd = compose_maps(A, y, x, x, hmap, hg.class_maps[j]);
      return w;
    }
  return std::nullopt;
}

template <class K>
bool isomorphic(const PathAlgebra<K>& A, const Complex<K>& x, const Complex<K>& y) {
  Decomposition<K> dx = decompose(A, x);
  Decomposition<K> dy = decompose(A, y);
  if (dx.parts.size() != dy.parts.size()) return false;
  std::vector<bool> used(dy.parts.size(), false);
  for (const auto& px : dx.parts) {
    bool matched = false;
    for (std::size_t j = 0; j < dy.parts.size(); ++j) {
      if (used[j]) continue;
      if (indec_iso(A, px, dy.parts[j])) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

template <class K>
OrbitEnumeration<K> enumerate_orbits(const PathAlgebra<K>& A, int width_bound,
                                     int max_orbits, int max_rounds) {
  OrbitEnumeration<K> out;
  auto normalize_top = [&](const Complex<K>& c) { return shift(c, c.hi()); };
  auto width = [](const Complex<K>& c) { return c.hi() - c.lo + 1; };
  auto try_add = [&](const Complex<K>& cand) -> bool {
    if (cand.is_zero()) return false;
    Complex<K> n = normalize_top(cand);
    if (width(n) > width_bound) return false;
    for (const auto& known : out.orbit_reps)
      if (indec_iso(A, known, n)) return false;
    out.orbit_reps.push_back(std::move(n));
    return true;
  };

  for (int v = 0; v < A.num_vertices(); ++v) try_add(stalk(A, v, 0));

  for (int round = 0; round < max_rounds; ++round) {
    bool grew = false;
    std::size_t count = out.orbit_reps.size();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j)
        for (int a = -width_bound; a <= width_bound; ++a) {
          Complex<K> src = shift(out.orbit_reps[i], a);
          const Complex<K>& tgt = out.orbit_reps[j];
          HomSpace<K> H = hom_space(A, src, tgt);
          for (const auto& f : H.class_maps) {
            Cone<K> c = cone(src, tgt, f);
            Decomposition<K> dec = decompose(A, c.c);
            for (const auto& part : dec.parts) {
              if (static_cast<std::size_t>(out.orbit_reps.size()) >
                  static_cast<std::size_t>(max_orbits)) {
                out.complete = false;
                return out;
              }
              grew |= try_add(part);
            }
          }
        }
    if (!grew) break;
    if (round == max_rounds - 1) out.complete = false;
  }
  return out;
}

}  // namespace costab

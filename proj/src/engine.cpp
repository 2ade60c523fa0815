#include "costab/engine.hpp"

#include <algorithm>
#include <sstream>

#include "costab/homotopy.hpp"
#include "costab/par.hpp"

namespace costab {

namespace {

// catalog entry rotations, mirrored from the search side
struct RotatedTriple {
  FormalObject a, b, c;
};

RotatedTriple rotate_triple(const TriangleEntry& e, int r, int s) {
  RotatedTriple out;
  switch (r) {
    case 0: out = {e.a, e.b, e.c}; break;
    case 1: out = {e.b, e.c, e.a.suspended()}; break;
    case 2: out = {e.c, e.a.suspended(), e.b.suspended()}; break;
    default: throw std::logic_error("rotation out of range");
  }
  if (s != 0) {
    out.a = out.a.suspended(s);
    out.b = out.b.suspended(s);
    out.c = out.c.suspended(s);
  }
  return out;
}

template <class K>
struct TowerWitnessImpl : TowerWitness {
  std::shared_ptr<const PathAlgebra<K>> alg;
  std::vector<Complex<K>> inters;  // t_0 .. t_n, inters[0] is the zero complex
  std::vector<DegMap<K>> steps;    // steps[j]: inters[j] -> inters[j+1]
};

template <class K>
struct CatWitness {
  IndecId src, tgt;
  DegMap<K> f;           // rep(src) -> rep(tgt), one hom-class basis map
  Complex<K> cone_cplx;  // cone(f)
  DegMap<K> iota, pi;    // canonical triangle maps of the cone
  FormalObject gamma;    // decomposition of the cone
  DegMap<K> theta;       // mat(gamma) -> cone
  DegMap<K> theta_bar;   // cone -> mat(gamma)
};

/// Lift solver: find a chain map sigma: U -> V with psi*sigma homotopic to
/// target (psi: V -> W).
template <class K>
std::optional<DegMap<K>> solve_lift(const PathAlgebra<K>& A, const Complex<K>& u,
                                    const Complex<K>& v, const Complex<K>& w,
                                    const DegMap<K>& psi, const DegMap<K>& target) {
  MapLayout<K> Ls = map_layout(A, u, v, 0);
  MapLayout<K> Ls1 = map_layout(A, u, v, +1);
  MapLayout<K> Lt = map_layout(A, u, w, 0);
  MapLayout<K> Lh = map_layout(A, u, w, -1);

  Matrix<K> comm = chain_defect_matrix(A, u, v, Ls, Ls1);
  Matrix<K> bnd = homotopy_boundary_matrix(A, u, w, Lh, Lt);

  // psi composition as a linear map sigma-coords -> Lt-coords
  Matrix<K> pc(Lt.dim(), Ls.dim());
  for (int j = 0; j < Ls.dim(); ++j) {
    const auto& sl = Ls.slots[j];
    auto it = psi.find(sl.deg);
    if (it == psi.end()) continue;
    const AMat<K>& pm = it->second;
    auto E = A.from_basis(sl.ab);
    for (int r2 = 0; r2 < pm.rows; ++r2) {
      auto prod = A.mul(pm.at(r2, sl.row), E);
      for (const auto& t : prod) {
        int i = Lt.find(sl.deg, r2, sl.col, t.basis);
        if (i >= 0) pc(i, j) += t.coeff;
      }
    }
  }

  const int rows = Ls1.dim() + Lt.dim();
  const int cols = Ls.dim() + Lh.dim();
  Matrix<K> sys(rows, cols);
  for (int i = 0; i < Ls1.dim(); ++i)
    for (int j = 0; j < Ls.dim(); ++j) sys(i, j) = comm(i, j);
  for (int i = 0; i < Lt.dim(); ++i) {
    for (int j = 0; j < Ls.dim(); ++j) sys(Ls1.dim() + i, j) = pc(i, j);
    for (int j = 0; j < Lh.dim(); ++j) sys(Ls1.dim() + i, Ls.dim() + j) = -bnd(i, j);
  }
  Vec<K> rhs(rows, field_traits<K>::zero());
  Vec<K> tv = map_to_vec(Lt, target);
  for (int i = 0; i < Lt.dim(); ++i) rhs[Ls1.dim() + i] = tv[i];
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  Vec<K> sv(sol->begin(), sol->begin() + Ls.dim());
  return vec_to_map(A, Ls, u, v, sv);
}

template <class K>
class EngineImpl : public CategoryEngine {
 public:
  explicit EngineImpl(std::shared_ptr<const PathAlgebra<K>> alg) : alg_(std::move(alg)) {}

  const Snapshot& snapshot() const override { return snap_; }
  int hom_dim_ids(IndecId a, IndecId b) const override { return snap_.hom_dim(a, b); }

  // ---------------------------------------------------------------- build

  void build(const BuildOptions& opt, const std::string& name) {
    const PathAlgebra<K>& A = *alg_;
    snap_.algebra_name = name;
    snap_.field = field_traits<K>::kind;
    snap_.window_lo = opt.window_lo;
    snap_.window_hi = opt.window_hi;
    snap_.width_bound = opt.width_bound;
    for (int v = 0; v < A.num_vertices(); ++v)
      snap_.k0_basis.push_back("[P" + A.presentation().vertex_names[v] + "]");

    par::set_enabled(opt.parallel);

    OrbitEnumeration<K> orbs = enumerate_orbits(A, opt.width_bound, opt.max_orbits);
    snap_.enumeration_complete = orbs.complete;
    if (!orbs.complete)
      notes_.push_back("indecomposable enumeration hit a resource cap; partial output");

    // stable order: stalks by vertex first, then by (width, discovery)
    std::vector<std::pair<int, Complex<K>>> keyed;
    for (std::size_t i = 0; i < orbs.orbit_reps.size(); ++i) {
      const Complex<K>& c = orbs.orbit_reps[i];
      bool is_stalk = c.total_summands() == 1 && c.lo == 0;
      int key = is_stalk ? c.module(0)[0]
                         : 1000 + 100 * (c.hi() - c.lo + 1) + static_cast<int>(i);
      keyed.push_back({key, c});
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    int mcount = 0;
    for (auto& [key, c] : keyed) {
      OrbitInfo info;
      if (key < 1000) {
        info.label = "P" + A.presentation().vertex_names[c.module(0)[0]];
      } else {
        info.label = "M" + std::to_string(++mcount);
      }
      info.width = c.hi() - c.lo + 1;
      info.k0 = euler_class(c);
      snap_.orbits.push_back(std::move(info));
      orbit_reps_.push_back(std::move(c));
    }

    // hom table over all in-window pairs (data-parallel kernel)
    std::vector<IndecId> ids = snap_.all_ids();
    std::vector<int> dims(ids.size() * ids.size(), 0);
    par::parallel_for(ids.size() * ids.size(), [&](std::size_t k) {
      std::size_t i = k / ids.size(), j = k % ids.size();
      dims[k] = hom_dim(A, rep(ids[i]), rep(ids[j]));
    });
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        snap_.hom[{ids[i], ids[j]}] = dims[i * ids.size() + j];

    // triangle catalog: cones over hom-basis maps between in-window ids
    struct PairEntries {
      std::vector<CatWitness<K>> cats;
      std::vector<TriangleEntry> tris;
      std::vector<std::string> notes;
    };
    std::vector<std::pair<IndecId, IndecId>> pairs;
    for (const auto& a : ids)
      for (const auto& b : ids)
        if (snap_.hom.at({a, b}) > 0) pairs.push_back({a, b});
    std::vector<PairEntries> results(pairs.size());
    par::parallel_for(pairs.size(), [&](std::size_t pi) {
      auto [ia, ib] = pairs[pi];
      Complex<K> ca = rep(ia), cb = rep(ib);
      HomSpace<K> H = hom_space(A, ca, cb);
      for (std::size_t m = 0; m < H.class_maps.size(); ++m) {
        Cone<K> cn = cone(ca, cb, H.class_maps[m]);
        auto dec = decompose_with_routes(cn.c);
        std::string wname = "cone(" + snap_.id_name(ia) + "->" + snap_.id_name(ib) +
                            "#" + std::to_string(m) + ")";
        if (!dec) {
          results[pi].notes.push_back("dropped " + wname +
                                      ": cone leaves the enumerated width");
          continue;
        }
        if (dec->fo.is_zero()) continue;  // iso map, trivial triangle
        if (!snap_.in_window(dec->fo)) {
          results[pi].notes.push_back("dropped " + wname + ": cone leaves the window");
          continue;
        }
        CatWitness<K> cw;
        cw.src = ia;
        cw.tgt = ib;
        cw.f = H.class_maps[m];
        cw.cone_cplx = cn.c;
        cw.iota = cn.iota;
        cw.pi = cn.pi;
        cw.gamma = dec->fo;
        cw.theta = dec->from_mat;
        cw.theta_bar = dec->to_mat;
        TriangleEntry te;
        te.a = FormalObject(ia);
        te.b = FormalObject(ib);
        te.c = dec->fo;
        te.witness = wname;
        results[pi].cats.push_back(std::move(cw));
        results[pi].tris.push_back(std::move(te));
      }
    });
    for (auto& r : results) {
      for (auto& c : r.cats) cats_.push_back(std::move(c));
      for (auto& t : r.tris) snap_.catalog.push_back(std::move(t));
      for (auto& n : r.notes) notes_.push_back(std::move(n));
    }
    if (!notes_.empty()) snap_.catalog_closed = snap_.validate().empty();
    else {
      auto warnings = snap_.validate();
      snap_.catalog_closed = warnings.empty();
      for (auto& w : warnings) notes_.push_back(std::move(w));
    }
  }

  std::vector<std::string> notes() const { return notes_; }

  // ---------------------------------------------------------- materialize

  Tower materialize(const TowerPlan& plan) const override {
    const PathAlgebra<K>& A = *alg_;
    auto w = std::make_shared<TowerWitnessImpl<K>>();
    w->alg = alg_;
    w->inters.push_back(zero_complex(A));
    Tower out;
    out.total = plan.total;
    FormalObject cur;
    for (const PlanStep& st : plan.steps) {
      FormalObject next;
      DegMap<K> alpha;
      if (st.kind == PlanStep::Kind::Split) {
        next = cur.plus(st.factor);
        alpha = route(cur, next);
      } else {
        const CatWitness<K>& cw = cats_.at(st.catalog_index);
        RotatedTriple rt = rotate_triple(snap_.catalog.at(st.catalog_index),
                                         st.rotation, st.shift);
        FormalObject a = rt.a.plus(st.padding);
        if (!(a == cur))
          throw std::logic_error("materialize: plan step does not chain (" +
                                 snap_.formal_name(a) + " vs " + snap_.formal_name(cur) + ")");
        next = rt.b.plus(st.padding);
        DegMap<K> base = base_step_map(cw, st.rotation);
        FormalObject base_src, base_tgt;
        base_source_target(cw, st.rotation, base_src, base_tgt);
        DegMap<K> ms = shift_map(base, st.shift);
        // mat(cur) -> mat(base_src + pad) --(ms + id)--> mat(base_tgt + pad) -> mat(next)
        FormalObject src_s = base_src.suspended(st.shift);
        FormalObject tgt_s = base_tgt.suspended(st.shift);
        alpha = padded_map(src_s, tgt_s, st.padding, ms, cur, next);
      }
      Complex<K> nxt_cplx = mat(next).sum;
      // verify the step factor by an honest cone
      Cone<K> f = cone(w->inters.back(), nxt_cplx, alpha);
      auto dec = formal_of(f.c);
      if (!dec || !(*dec == st.factor))
        throw TheoremViolation("materialize: step factor is " +
                               (dec ? snap_.formal_name(*dec) : std::string("unnameable")) +
                               ", expected " + snap_.formal_name(st.factor));
      w->steps.push_back(std::move(alpha));
      w->inters.push_back(std::move(nxt_cplx));
      out.factors.push_back(st.factor);
      out.step_notes.push_back(st.kind == PlanStep::Kind::Split
                                   ? "split"
                                   : snap_.catalog.at(st.catalog_index).witness +
                                         " rot " + std::to_string(st.rotation) +
                                         " shift " + std::to_string(st.shift));
      cur = next;
      out.inters.push_back(cur);
    }
    if (!(cur == plan.total))
      throw std::logic_error("materialize: tower total mismatch");
    out.witness = std::move(w);
    return out;
  }

  // ------------------------------------------------------------ tower ops

  Tower swap_steps(const Tower& t, std::size_t j) const override {
    const PathAlgebra<K>& A = *alg_;
    const auto* w = witness_of(t);
    const Complex<K>& P = w->inters[j];
    const Complex<K>& M = w->inters[j + 1];
    const Complex<K>& Q = w->inters[j + 2];
    const DegMap<K>& alpha = w->steps[j];
    const DegMap<K>& beta = w->steps[j + 1];
    DegMap<K> gamma = compose_maps(A, P, M, Q, beta, alpha);
    Cone<K> cg = cone(P, Q, gamma);
    Cone<K> cb = cone(M, Q, beta);
    // psi: cone(gamma) -> cone(beta): (z, p) |-> (z, alpha p)
    DegMap<K> psi = cone_functor_second(A, P, M, Q, alpha, cg.c, cb.c);
    std::optional<DegMap<K>> sigma =
        solve_lift(A, cb.c, cg.c, cb.c, psi, identity_map(cb.c));
    if (!sigma)
      throw TheoremViolation("swap: split section does not exist although "
                             "hom(factor_{j+1}, Sigma factor_j) = 0");
    Resplit rs = resplit(P, Q, gamma, cg, cb.c, *sigma, t.factors[j + 1], t.factors[j]);
    return rebuild_after(t, j, rs, t.factors[j + 1], t.factors[j], /*insert=*/false);
  }

  Tower merge_steps(const Tower& t, std::size_t j) const override {
    const PathAlgebra<K>& A = *alg_;
    const auto* w = witness_of(t);
    const Complex<K>& P = w->inters[j];
    const Complex<K>& M = w->inters[j + 1];
    const Complex<K>& Q = w->inters[j + 2];
    DegMap<K> gamma = compose_maps(A, P, M, Q, w->steps[j + 1], w->steps[j]);
    Cone<K> cg = cone(P, Q, gamma);
    FormalObject expected = t.factors[j].plus(t.factors[j + 1]);
    auto dec = formal_of(cg.c);
    if (!dec || !(*dec == expected))
      throw TheoremViolation("coalesce: merged cone decomposes as " +
                             (dec ? snap_.formal_name(*dec) : std::string("unnameable")) +
                             ", expected " + snap_.formal_name(expected));
    auto nw = std::make_shared<TowerWitnessImpl<K>>(*w);
    nw->steps[j] = std::move(gamma);
    nw->steps.erase(nw->steps.begin() + static_cast<long>(j) + 1);
    nw->inters.erase(nw->inters.begin() + static_cast<long>(j) + 1);
    Tower out;
    out.total = t.total;
    out.factors = t.factors;
    out.factors[j] = expected;
    out.factors.erase(out.factors.begin() + static_cast<long>(j) + 1);
    out.inters = t.inters;
    out.inters.erase(out.inters.begin() + static_cast<long>(j));
    out.step_notes = t.step_notes;
    out.step_notes.resize(t.factors.size(), "");
    out.step_notes[j] = "coalesce";
    out.step_notes.erase(out.step_notes.begin() + static_cast<long>(j) + 1);
    out.witness = std::move(nw);
    return out;
  }

  Tower split_step(const Tower& t, std::size_t pos,
                   const FormalObject& second_factor) const override {
    const auto* w = witness_of(t);
    const Complex<K>& P = w->inters[pos];
    const Complex<K>& Q = w->inters[pos + 1];
    const DegMap<K>& alpha = w->steps[pos];
    Cone<K> cf = cone(P, Q, alpha);
    auto dec = decompose_with_routes(cf.c);
    if (!dec || !(dec->fo == t.factors[pos]))
      throw TheoremViolation("split_factor: stored factor does not match its cone");
    FormalObject first = t.factors[pos].minus(second_factor);
    // w2: mat(first) -> cone — the inclusion of the complement summand
    DegMap<K> w2 = compose_route_into(first, dec->fo, dec->from_mat, cf.c);
    Resplit rs = resplit(P, Q, alpha, cf, mat(first).sum, w2, first, second_factor);
    return rebuild_after(t, pos, rs, first, second_factor, /*insert=*/true);
  }

  FormalObject cofactor_object(const Tower& t, std::size_t j) const override {
    const PathAlgebra<K>& A = *alg_;
    const auto* w = witness_of(t);
    std::size_t n = w->steps.size();
    DegMap<K> comp = identity_map(w->inters[j]);
    for (std::size_t k = j; k < n; ++k)
      comp = compose_maps(A, w->inters[j], w->inters[k], w->inters[k + 1], w->steps[k], comp);
    Cone<K> e = cone(w->inters[j], w->inters[n], comp);
    auto dec = formal_of(e.c);
    if (!dec)
      throw WindowExhausted("truncate: cofactor leaves the enumerated window/width");
    return *dec;
  }

 private:
  // ------------------------------------------------------------- helpers

  struct DecRoutes {
    FormalObject fo;
    DegMap<K> to_mat;    // X -> mat(fo)
    DegMap<K> from_mat;  // mat(fo) -> X
  };

  struct Resplit {
    Complex<K> mid;
    DegMap<K> step1, step2;
    FormalObject fo_mid;
  };

  const TowerWitnessImpl<K>* witness_of(const Tower& t) const {
    auto* w = dynamic_cast<const TowerWitnessImpl<K>*>(t.witness.get());
    if (!w) throw std::invalid_argument("tower carries no witness for this engine");
    return w;
  }

  std::vector<long> euler_class(const Complex<K>& c) const {
    std::vector<long> v(alg_->num_vertices(), 0);
    for (int d = c.lo; d <= c.hi(); ++d) {
      long sign = (d % 2 == 0) ? 1 : -1;
      for (int vert : c.module(d)) v[vert] += sign;
    }
    return v;
  }

  Complex<K> rep(IndecId id) const {
    return shift(orbit_reps_.at(id.orbit), id.shift);
  }

  SumParts<K> mat(const FormalObject& fo) const {
    std::vector<Complex<K>> parts;
    for (const auto& id : fo.expand()) parts.push_back(rep(id));
    std::vector<const Complex<K>*> ptrs;
    for (const auto& p : parts) ptrs.push_back(&p);
    return direct_sum(*alg_, ptrs);
  }

  /// Index of the n-th copy of id inside an expanded multiset.
  static int nth_copy(const std::vector<IndecId>& exp, IndecId id, int n) {
    int seen = 0;
    for (std::size_t j = 0; j < exp.size(); ++j)
      if (exp[j] == id && seen++ == n) return static_cast<int>(j);
    return -1;
  }

  /// Unit-entry chain map mat(src) -> mat(tgt) routing each copy of src into
  /// the corresponding copy slot of tgt (src must be a submultiset of tgt).
  DegMap<K> route(const FormalObject& src, const FormalObject& tgt) const {
    const PathAlgebra<K>& A = *alg_;
    SumParts<K> ms = mat(src), mt = mat(tgt);
    auto se = src.expand(), te = tgt.expand();
    DegMap<K> out;
    std::map<IndecId, int> used;
    for (std::size_t i = 0; i < se.size(); ++i) {
      int slot = nth_copy(te, se[i], used[se[i]]++);
      if (slot < 0) throw std::logic_error("route: src not contained in tgt");
      DegMap<K> full = compose_maps(A, ms.sum, rep(se[i]), mt.sum, mt.incl[slot], ms.proj[i]);
      out = add_maps(A, out, full);
    }
    return out;
  }

  /// mat(first) -> mat(whole) -> X  (composition with a selected sub-multiset)
  DegMap<K> compose_route_into(const FormalObject& first, const FormalObject& whole,
                               const DegMap<K>& from_mat, const Complex<K>& x) const {
    const PathAlgebra<K>& A = *alg_;
    DegMap<K> r = route(first, whole);
    return compose_maps(A, mat(first).sum, mat(whole).sum, x, from_mat, r);
  }

  /// (m: mat(src) -> mat(tgt)) padded by the identity on `pad`, conjugated to
  /// canonical mats of cur = src+pad and next = tgt+pad.
  DegMap<K> padded_map(const FormalObject& src, const FormalObject& tgt,
                       const FormalObject& pad, const DegMap<K>& m,
                       const FormalObject& cur, const FormalObject& next) const {
    const PathAlgebra<K>& A = *alg_;
    SumParts<K> mcur = mat(cur), mnext = mat(next), msrc = mat(src), mtgt = mat(tgt);
    // mat(cur) -> mat(src): project the src copies; mat(cur) -> pad copies, etc.
    auto se = src.expand(), pe = pad.expand(), ce = cur.expand(), te = tgt.expand(),
         ne = next.expand();
    // assignment of cur copies: first to src (per id multiplicity), rest to pad
    std::map<IndecId, int> src_left;
    for (const auto& [id, k] : src.mult()) src_left[id] = k;
    std::vector<int> cur_to_src(ce.size(), -1), cur_to_pad(ce.size(), -1);
    {
      std::map<IndecId, int> sused, pused;
      for (std::size_t i = 0; i < ce.size(); ++i) {
        if (src_left[ce[i]] > 0) {
          --src_left[ce[i]];
          cur_to_src[i] = nth_copy(se, ce[i], sused[ce[i]]++);
        } else {
          cur_to_pad[i] = nth_copy(pe, ce[i], pused[ce[i]]++);
        }
        if (cur_to_src[i] < 0 && cur_to_pad[i] < 0)
          throw std::logic_error("padded_map: copy routing failed");
      }
    }
    // next slots: tgt copies then pad copies, matched by multiset
    std::map<IndecId, int> tgt_left;
    for (const auto& [id, k] : tgt.mult()) tgt_left[id] = k;
    std::vector<int> next_from_tgt(te.size(), -1), next_from_pad(pe.size(), -1);
    {
      std::map<IndecId, int> tused, pused;
      for (std::size_t i = 0; i < ne.size(); ++i) {
        if (tgt_left[ne[i]] > 0) {
          --tgt_left[ne[i]];
          int j = nth_copy(te, ne[i], tused[ne[i]]++);
          if (j >= 0) next_from_tgt[j] = static_cast<int>(i);
        } else {
          int j = nth_copy(pe, ne[i], pused[ne[i]]++);
          if (j >= 0) next_from_pad[j] = static_cast<int>(i);
        }
      }
    }
    // assemble: sum over routes
    DegMap<K> out;
    // src-part: mat(cur) --proj--> src copy --(incl into mat(src))--> m --> mat(tgt) --proj copy--> next slot
    // build m conjugated: mat(src) -> mat(tgt) is m itself; we need per-copy routing:
    // full = incl_next * proj_tgt_copy * m * incl_src_copy * proj_cur_copy summed
    for (std::size_t i = 0; i < ce.size(); ++i) {
      if (cur_to_src[i] >= 0) {
        int sj = cur_to_src[i];
        DegMap<K> lift = compose_maps(A, mcur.sum, rep(ce[i]), msrc.sum,
                                      msrc.incl[sj], mcur.proj[i]);
        DegMap<K> mapped = compose_maps(A, mcur.sum, msrc.sum, mtgt.sum, m, lift);
        for (std::size_t tj = 0; tj < te.size(); ++tj) {
          int nslot = next_from_tgt[tj];
          DegMap<K> leg = compose_maps(A, mcur.sum, mtgt.sum, rep(te[tj]),
                                       mtgt.proj[tj], mapped);
          DegMap<K> full = compose_maps(A, mcur.sum, rep(te[tj]), mnext.sum,
                                        mnext.incl[nslot], leg);
          out = add_maps(A, out, full);
        }
      } else {
        int pj = cur_to_pad[i];
        int nslot = next_from_pad[pj];
        DegMap<K> full = compose_maps(A, mcur.sum, rep(ce[i]), mnext.sum,
                                      mnext.incl[nslot], mcur.proj[i]);
        out = add_maps(A, out, full);
      }
    }
    return out;
  }

  DegMap<K> base_step_map(const CatWitness<K>& cw, int rot) const {
    const PathAlgebra<K>& A = *alg_;
    switch (rot) {
      case 0: return cw.f;
      case 1:
        return compose_maps(A, rep(cw.tgt), cw.cone_cplx, mat(cw.gamma).sum,
                            cw.theta_bar, cw.iota);
      case 2:
        return compose_maps(A, mat(cw.gamma).sum, cw.cone_cplx,
                            rep(cw.src.suspended()), cw.pi, cw.theta);
      default: throw std::logic_error("rotation out of range");
    }
  }

  void base_source_target(const CatWitness<K>& cw, int rot, FormalObject& src,
                          FormalObject& tgt) const {
    switch (rot) {
      case 0: src = FormalObject(cw.src); tgt = FormalObject(cw.tgt); break;
      case 1: src = FormalObject(cw.tgt); tgt = cw.gamma; break;
      case 2: src = cw.gamma; tgt = FormalObject(cw.src.suspended()); break;
      default: throw std::logic_error("rotation out of range");
    }
  }

  /// psi: cone(v u) -> cone(v) for the composable pair u: P -> M, v: M -> Q;
  /// here given directly as (z, p) |-> (z, u p).
  DegMap<K> cone_functor_second(const PathAlgebra<K>& A, const Complex<K>& p,
                                const Complex<K>& m, const Complex<K>& q,
                                const DegMap<K>& u, const Complex<K>& cvu,
                                const Complex<K>& cv) const {
    DegMap<K> out;
    for (int d = cvu.lo; d <= cvu.hi(); ++d) {
      int qn = static_cast<int>(q.module(d).size());
      int pn = static_cast<int>(p.module(d + 1).size());
      int qn2 = static_cast<int>(q.module(d).size());
      int mn = static_cast<int>(m.module(d + 1).size());
      int rows = qn2 + mn, cols = qn + pn;
      if (rows == 0 || cols == 0) continue;
      AMat<K> mm(rows, cols);
      for (int i = 0; i < qn; ++i) mm.at(i, i) = A.unit(q.module(d)[i]);
      auto it = u.find(d + 1);
      if (it != u.end())
        for (int r = 0; r < mn; ++r)
          for (int c = 0; c < pn; ++c) mm.at(qn2 + r, qn + c) = it->second.at(r, c);
      out[d] = std::move(mm);
    }
    (void)cv;
    return out;
  }

  /// Resplit of one step g: P -> Q with factor cone(g): given a
  /// homotopy split inclusion w2 of a summand G2 (with complement expected2),
  /// produce P -> mid -> Q with factors (expected1 ~ G2, then expected2).
  Resplit resplit(const Complex<K>& p, const Complex<K>& q, const DegMap<K>& g,
                  const Cone<K>& cg, const Complex<K>& g2c, const DegMap<K>& w2,
                  const FormalObject& expected1, const FormalObject& expected2) const {
    const PathAlgebra<K>& A = *alg_;
    // d2 = pi o w2 : G2 -> Sigma P;  u = Sigma^{-1} d2 : Sigma^{-1} G2 -> P
    DegMap<K> d2 = compose_maps(A, g2c, cg.c, shift(p, 1), cg.pi, w2);
    DegMap<K> u = shift_map(d2, -1);
    Complex<K> sg2 = shift(g2c, -1);
    Cone<K> cu = cone(sg2, p, u);

    // v: cone(u) -> Q, v(y, b) = g(y) + s(b), s = -pr_Q o w2
    DegMap<K> v;
    for (int d = cu.c.lo; d <= cu.c.hi(); ++d) {
      int pn = static_cast<int>(p.module(d).size());
      int gn = static_cast<int>(sg2.module(d + 1).size());  // = g2c.module(d)
      int qn = static_cast<int>(q.module(d).size());
      if ((pn == 0 && gn == 0) || qn == 0) continue;
      AMat<K> mm(qn, pn + gn);
      auto git = g.find(d);
      if (git != g.end())
        for (int r = 0; r < qn; ++r)
          for (int c = 0; c < pn; ++c) mm.at(r, c) = git->second.at(r, c);
      auto wit = w2.find(d);
      if (wit != w2.end()) {
        // w2[d]: g2c^d -> cone(g)^d = Q^d (+) P^{d+1}; take the Q block, negated
        for (int r = 0; r < qn; ++r)
          for (int c = 0; c < gn; ++c)
            mm.at(r, pn + c) = A.negate(wit->second.at(r, c));
      }
      v[d] = std::move(mm);
    }
    if (!is_chain_map(cu.c, q, v))
      throw TheoremViolation("resplit: constructed map is not a chain map");

    // factors: cone(iota) ~ G2, cone(v) ~ complement
    Cone<K> f1 = cone(p, cu.c, cu.iota);
    auto dec1 = formal_of(f1.c);
    if (!dec1 || !(*dec1 == expected1))
      throw TheoremViolation("resplit: first factor is " +
                             (dec1 ? snap_.formal_name(*dec1) : std::string("unnameable")) +
                             ", expected " + snap_.formal_name(expected1));
    Cone<K> f2 = cone(cu.c, q, v);
    auto dec2 = formal_of(f2.c);
    if (!dec2 || !(*dec2 == expected2))
      throw TheoremViolation("resplit: second factor is " +
                             (dec2 ? snap_.formal_name(*dec2) : std::string("unnameable")) +
                             ", expected " + snap_.formal_name(expected2));

    // keep the middle complex small
    Minimized<K> mm = minimize(cu.c);
    Resplit rs;
    rs.step1 = compose_maps(A, p, cu.c, mm.min, mm.to_min, cu.iota);
    rs.step2 = compose_maps(A, mm.min, cu.c, q, v, mm.from_min);
    rs.mid = mm.min;
    auto fo = formal_of(rs.mid);
    if (!fo) throw WindowExhausted("resplit: intermediate leaves the enumerated width");
    rs.fo_mid = *fo;
    return rs;
  }

  Tower rebuild_after(const Tower& t, std::size_t j, const Resplit& rs,
                      const FormalObject& first_fo, const FormalObject& second_fo,
                      bool insert) const {
    const auto* w = witness_of(t);
    auto nw = std::make_shared<TowerWitnessImpl<K>>(*w);
    Tower out;
    out.total = t.total;
    out.factors = t.factors;
    out.inters = t.inters;
    out.step_notes = t.step_notes;
    out.step_notes.resize(t.factors.size(), "");
    if (insert) {
      // split one step into two
      nw->steps[j] = rs.step1;
      nw->steps.insert(nw->steps.begin() + static_cast<long>(j) + 1, rs.step2);
      nw->inters.insert(nw->inters.begin() + static_cast<long>(j) + 1, rs.mid);
      out.factors[j] = first_fo;
      out.factors.insert(out.factors.begin() + static_cast<long>(j) + 1, second_fo);
      out.inters.insert(out.inters.begin() + static_cast<long>(j), rs.fo_mid);
      out.step_notes[j] = "split-factor";
      out.step_notes.insert(out.step_notes.begin() + static_cast<long>(j) + 1,
                            "split-factor");
    } else {
      // two steps replaced by two new ones through a new middle
      nw->steps[j] = rs.step1;
      nw->steps[j + 1] = rs.step2;
      nw->inters[j + 1] = rs.mid;
      out.factors[j] = first_fo;
      out.factors[j + 1] = second_fo;
      out.inters[j] = rs.fo_mid;
      out.step_notes[j] = "swap";
      out.step_notes[j + 1] = "swap";
    }
    out.witness = std::move(nw);
    return out;
  }

  std::optional<FormalObject> formal_of(const Complex<K>& c) const {
    auto d = decompose_with_routes(c);
    if (!d) return std::nullopt;
    return d->fo;
  }

  std::optional<DecRoutes> decompose_with_routes(const Complex<K>& x) const {
    const PathAlgebra<K>& A = *alg_;
    Decomposition<K> dec = decompose(A, x);
    DecRoutes out;
    std::vector<std::pair<IndecId, std::size_t>> matched;  // (id, part index)
    for (std::size_t i = 0; i < dec.parts.size(); ++i) {
      const Complex<K>& part = dec.parts[i];
      std::optional<IndecId> found;
      for (int o = 0; o < static_cast<int>(orbit_reps_.size()); ++o) {
        int k = -part.hi();
        if (orbit_reps_[o].hi() - orbit_reps_[o].lo != part.hi() - part.lo) continue;
        if (indec_iso(A, part, rep(IndecId{o, k}))) {
          found = IndecId{o, k};
          break;
        }
      }
      if (!found) return std::nullopt;
      matched.push_back({*found, i});
      out.fo.add(*found);
    }
    // assemble routes to/from the canonical mat
    SumParts<K> m = mat(out.fo);
    auto slots = out.fo.expand();
    std::map<IndecId, int> used;
    DegMap<K> to_mat, from_mat;
    for (const auto& [id, pi] : matched) {
      int want = used[id]++;
      int slot = -1, seen = 0;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (slots[s] == id && seen++ == want) { slot = static_cast<int>(s); break; }
      const Complex<K>& part = dec.parts[pi];
      auto iso = indec_iso(A, part, rep(id));
      if (!iso) throw std::logic_error("decompose_with_routes: iso vanished");
      // X -> reduced -> part -> rep -> mat
      DegMap<K> a1 = compose_maps(A, x, dec.reduced, part, dec.proj[pi], dec.to_reduced);
      DegMap<K> a2 = compose_maps(A, x, part, rep(id), iso->fwd, a1);
      DegMap<K> a3 = compose_maps(A, x, rep(id), m.sum, m.incl[slot], a2);
      to_mat = add_maps(A, to_mat, a3);
      // mat -> rep -> part -> reduced -> X
      DegMap<K> b1 = compose_maps(A, m.sum, rep(id), part, iso->bwd, m.proj[slot]);
      DegMap<K> b2 = compose_maps(A, m.sum, part, dec.reduced, dec.incl[pi], b1);
      DegMap<K> b3 = compose_maps(A, m.sum, dec.reduced, x, dec.from_reduced, b2);
      from_mat = add_maps(A, from_mat, b3);
    }
    out.to_mat = std::move(to_mat);
    out.from_mat = std::move(from_mat);
    return out;
  }

  std::shared_ptr<const PathAlgebra<K>> alg_;
  Snapshot snap_;
  std::vector<Complex<K>> orbit_reps_;
  std::vector<CatWitness<K>> cats_;
  std::vector<std::string> notes_;
};

template <class K>
Category build_with(const AlgebraPresentation& pres, const BuildOptions& opt) {
  auto alg = std::make_shared<const PathAlgebra<K>>(pres);
  auto eng = std::make_shared<EngineImpl<K>>(alg);
  eng->build(opt, pres.name);
  Category out;
  out.snapshot = eng->snapshot();
  out.build_notes = eng->notes();
  out.engine = std::move(eng);
  return out;
}

}  // namespace

Category build_category(const AlgebraPresentation& pres, const BuildOptions& opt) {
  switch (pres.field) {
    case FieldKind::Rationals: return build_with<Rat>(pres, opt);
    case FieldKind::Fp32003: return build_with<Fp>(pres, opt);
  }
  throw std::logic_error("unknown field kind");
}

}  // namespace costab

#include "costab/towers.hpp"

#include <algorithm>
#include <cmath>

#include "costab/engine.hpp"

namespace costab {

namespace {

struct Move {
  PlanStep step;
  FormalObject pred;
};

struct Rotated {
  FormalObject a, b, c;
};

Rotated rotate_entry(const TriangleEntry& e, int r, int s) {
  Rotated out;
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

void shift_bounds(const Snapshot& s, int margin, const FormalObject& t, int& lo, int& hi) {
  for (const auto& [id, k] : t.mult()) {
    lo = std::max(lo, s.window_lo - margin - id.shift);
    hi = std::min(hi, s.window_hi + margin - id.shift);
  }
}

struct Searcher {
  const Snapshot& S;
  const FactorPredicate& allowed;
  int max_size;
  int margin;
  std::optional<std::uint64_t> seed;
  bool bounds_hit = false;
  std::map<FormalObject, int> failed_at_depth;       // definite fails with depth budget
  std::map<FormalObject, std::vector<PlanStep>> won; // plans, top-down order

  std::vector<Move> moves(const FormalObject& t) const {
    std::vector<Move> out;
    // peel one indecomposable summand as a split factor
    for (const auto& [id, k] : t.mult()) {
      FormalObject q(id);
      if (!allowed(q)) continue;
      PlanStep st;
      st.kind = PlanStep::Kind::Split;
      st.factor = q;
      out.push_back({st, t.minus(q)});
    }
    // catalog triangles, rotated and suspended, padded by the rest of t
    for (int ci = 0; ci < static_cast<int>(S.catalog.size()); ++ci) {
      const TriangleEntry& e = S.catalog[ci];
      for (int r = 0; r < 3; ++r) {
        Rotated base = rotate_entry(e, r, 0);
        if (base.c.is_zero()) continue;
        int lo = S.window_lo - S.window_hi - 2 * margin;
        int hi = S.window_hi - S.window_lo + 2 * margin;
        shift_bounds(S, margin, base.a.plus(base.b).plus(base.c), lo, hi);
        for (int s = lo; s <= hi; ++s) {
          Rotated rot = rotate_entry(e, r, s);
          if (!t.contains(rot.b)) continue;
          if (!allowed(rot.c)) continue;
          FormalObject pred = rot.a.plus(t.minus(rot.b));
          PlanStep st;
          st.kind = PlanStep::Kind::Generator;
          st.factor = rot.c;
          st.catalog_index = ci;
          st.rotation = r;
          st.shift = s;
          st.padding = t.minus(rot.b);
          out.push_back({st, std::move(pred)});
        }
      }
    }
    if (seed) {
      std::uint64_t state = *seed ? *seed : 1;
      auto rnd = [&]() {
        state ^= state << 13; state ^= state >> 7; state ^= state << 17;
        return state;
      };
      for (std::size_t i = out.size(); i > 1; --i)
        std::swap(out[i - 1], out[rnd() % i]);
    }
    return out;
  }

  bool dfs(const FormalObject& t, int depth, std::vector<PlanStep>& acc) {
    if (t.is_zero()) return true;
    if (auto it = won.find(t); it != won.end()) {
      acc.insert(acc.end(), it->second.begin(), it->second.end());
      return true;
    }
    if (auto it = failed_at_depth.find(t); it != failed_at_depth.end() && it->second >= depth)
      return false;
    if (depth <= 0) {
      bounds_hit = true;
      return false;
    }
    std::size_t base = acc.size();
    for (const Move& mv : moves(t)) {
      if (mv.pred.total() > max_size) {
        bounds_hit = true;
        continue;
      }
      acc.push_back(mv.step);
      if (dfs(mv.pred, depth - 1, acc)) {
        won[t] = std::vector<PlanStep>(acc.begin() + base, acc.end());
        return true;
      }
      acc.resize(base);
    }
    failed_at_depth[t] = std::max(failed_at_depth[t], depth);
    return false;
  }
};

}  // namespace

SearchResult find_tower_plan(const Snapshot& s, const FormalObject& t,
                             const FactorPredicate& allowed, SearchOptions opt) {
  SearchResult res;
  int margin = opt.window_margin >= 0 ? opt.window_margin : s.width_bound;
  for (const auto& [id, k] : t.mult())
    if (id.shift < s.window_lo - margin || id.shift > s.window_hi + margin)
      throw WindowExhausted("find_tower: object outside window+margin: " +
                            s.formal_name(t));
  int depth = opt.depth > 0 ? opt.depth
                            : t.total() + (s.window_hi - s.window_lo) + 1;
  int max_size = opt.max_object_size > 0 ? opt.max_object_size : t.total() + 4;
  Searcher sr{s, allowed, max_size, margin, opt.shuffle_seed};
  std::vector<PlanStep> acc;
  if (sr.dfs(t, depth, acc)) {
    TowerPlan plan;
    plan.total = t;
    plan.steps.assign(acc.rbegin(), acc.rend());  // search peels from the top
    res.status = SearchStatus::Found;
    res.plan = std::move(plan);
    return res;
  }
  if (sr.bounds_hit) {
    res.status = SearchStatus::BoundsExhausted;
    res.note = "search hit depth " + std::to_string(depth) + " or object size " +
               std::to_string(max_size);
  } else {
    res.status = SearchStatus::NoneWithinBounds;
    res.note = "search space fully explored over the catalog";
  }
  return res;
}

std::optional<Tower> find_tower(const CategoryEngine& eng, const FormalObject& t,
                                const FactorPredicate& allowed, SearchOptions opt,
                                SearchResult* result_out) {
  SearchResult res = find_tower_plan(eng.snapshot(), t, allowed, opt);
  if (result_out) *result_out = res;
  if (res.status != SearchStatus::Found) return std::nullopt;
  return eng.materialize(*res.plan);
}

namespace {

void check_adjacent_precondition(const Snapshot& s, const Tower& t, std::size_t j,
                                 const char* what) {
  if (j + 1 >= t.size()) throw std::out_of_range(std::string(what) + ": position");
  int d = s.hom_dim(t.factors[j + 1], t.factors[j].suspended(1));
  if (d != 0) {
    SwapRefused err(std::string(what) + " refused: hom(" + s.formal_name(t.factors[j + 1]) +
                    ", Sigma " + s.formal_name(t.factors[j]) + ") = " + std::to_string(d));
    err.offending_hom_dim = d;
    throw err;
  }
}

}  // namespace

Tower tower_swap_adjacent(const CategoryEngine& eng, const Tower& t, std::size_t j) {
  check_adjacent_precondition(eng.snapshot(), t, j, "swap_adjacent");
  return eng.swap_steps(t, j);
}

Tower tower_coalesce(const CategoryEngine& eng, const Tower& t, std::size_t j) {
  check_adjacent_precondition(eng.snapshot(), t, j, "coalesce");
  return eng.merge_steps(t, j);
}

Tower tower_split_factor(const CategoryEngine& eng, const Tower& t, std::size_t pos) {
  if (pos >= t.size()) throw std::out_of_range("split_factor: position");
  const FormalObject& f = t.factors[pos];
  if (f.total() <= 1)
    throw std::invalid_argument("split_factor: factor already indecomposable");
  IndecId lowest = f.mult().begin()->first;
  return eng.split_step(t, pos, FormalObject(lowest));
}

Cofactor tower_truncate(const CategoryEngine& eng, const Tower& t, std::size_t j) {
  if (j > t.size()) throw std::out_of_range("truncate: position");
  Cofactor out;
  if (j == t.size()) {
    out.object = FormalObject();
    out.verified_extension_closure = true;
    out.note = "e_n = 0";
    return out;
  }
  out.object = (j == 0) ? t.total : eng.cofactor_object(t, j);
  // e_j must lie in the extension closure of the later factors
  FormalObject later;
  for (std::size_t k = j; k < t.size(); ++k) later = later.plus(t.factors[k]);
  auto allowed = [&](const FormalObject& q) {
    for (const auto& [id, m] : q.mult())
      if (later.multiplicity(id) == 0) return false;
    return true;
  };
  SearchOptions opt;
  opt.depth = static_cast<int>(t.size() - j) + static_cast<int>(out.object.total()) + 2;
  SearchResult res = find_tower_plan(eng.snapshot(), out.object, allowed, opt);
  out.verified_extension_closure = res.status == SearchStatus::Found;
  out.note = res.note;
  return out;
}

Tower tower_refine(const CategoryEngine& eng, Tower t) {
  const bool has_tags = t.tags.size() == t.size();
  for (;;) {
    bool changed = false;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t.factors[j].total() > 1) {
        std::vector<double> tags = t.tags;
        t = tower_split_factor(eng, t, j);
        if (has_tags) {
          // the split pair inherits the original factor's tag
          tags.insert(tags.begin() + static_cast<long>(j), tags[j]);
          t.tags = std::move(tags);
        }
        changed = true;
        break;
      }
    }
    if (!changed) return t;
  }
}

Tower tower_sort_by_tags(const CategoryEngine& eng, Tower t, std::vector<double> tags,
                         bool* swapped_any) {
  if (tags.size() != t.size())
    throw std::invalid_argument("sort_by_tags: one tag per factor required");
  if (swapped_any) *swapped_any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
      if (tags[j] > tags[j + 1] + 1e-15) {
        t = tower_swap_adjacent(eng, t, j);
        std::swap(tags[j], tags[j + 1]);
        moved = true;
        if (swapped_any) *swapped_any = true;
      }
    }
  }
  t.tags = std::move(tags);
  return t;
}

Tower tower_coalesce_equal_tags(const CategoryEngine& eng, Tower t,
                                std::vector<double> tags, double tol) {
  if (tags.size() != t.size())
    throw std::invalid_argument("coalesce_equal_tags: one tag per factor required");
  for (std::size_t j = 0; j + 1 < t.size();) {
    if (std::abs(tags[j] - tags[j + 1]) <= tol) {
      t = tower_coalesce(eng, t, j);
      tags.erase(tags.begin() + static_cast<long>(j) + 1);
    } else {
      ++j;
    }
  }
  t.tags = std::move(tags);
  return t;
}

}  // namespace costab

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "costab/field.hpp"
#include "costab/formal.hpp"

namespace costab {

/// Raised when a computation would need Hom data or objects outside the
/// snapshot window. Callers must not treat this as "dimension zero".
struct WindowExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrbitInfo {
  std::string label;
  int width = 1;
  std::vector<long> k0;  // class of the shift-0 representative on the K0 basis
};

struct TriangleEntry {
  FormalObject a, b, c;  // distinguished triangle a -> b -> c -> Sigma a
  std::string witness;
};

/// Frozen combinatorial view of the category inside a finite shift window:
/// ids, Hom-dimension table, triangle catalog, K0 data. Immutable after
/// build; everything downstream computes against this.
struct Snapshot {
  std::string algebra_name;
  FieldKind field = FieldKind::Rationals;
  int window_lo = 0, window_hi = 0;
  int width_bound = 1;
  std::vector<OrbitInfo> orbits;
  std::map<std::pair<IndecId, IndecId>, int> hom;
  std::vector<TriangleEntry> catalog;
  bool catalog_closed = true;
  bool enumeration_complete = true;
  std::vector<std::string> k0_basis;

  int k0_rank() const { return static_cast<int>(k0_basis.size()); }

  bool in_window(IndecId id) const {
    return id.orbit >= 0 && id.orbit < static_cast<int>(orbits.size()) &&
           id.shift >= window_lo && id.shift <= window_hi;
  }
  bool in_window(const FormalObject& t) const {
    for (const auto& [id, k] : t.mult())
      if (!in_window(id)) return false;
    return true;
  }

  std::vector<IndecId> all_ids() const {
    std::vector<IndecId> out;
    for (int o = 0; o < static_cast<int>(orbits.size()); ++o)
      for (int s = window_lo; s <= window_hi; ++s) out.push_back({o, s});
    return out;
  }

  /// Hom dimension. Out-of-window pairs are slid back by Sigma-equivariance
  /// (verified on the stored table); pairs whose degree supports are disjoint
  /// are exactly zero (no chain maps at all). Throws only when neither
  /// applies.
  int hom_dim(IndecId a, IndecId b) const {
    if (a.orbit < 0 || a.orbit >= static_cast<int>(orbits.size()) || b.orbit < 0 ||
        b.orbit >= static_cast<int>(orbits.size()))
      throw std::invalid_argument("hom_dim: unknown orbit");
    // support of (o, k) is [-k - width + 1, -k]
    {
      int alo = -a.shift - orbits[a.orbit].width + 1, ahi = -a.shift;
      int blo = -b.shift - orbits[b.orbit].width + 1, bhi = -b.shift;
      if (ahi < blo || bhi < alo) return 0;
    }
    if (!in_window(a) || !in_window(b)) {
      int lo_t = std::max(window_lo - a.shift, window_lo - b.shift);
      int hi_t = std::min(window_hi - a.shift, window_hi - b.shift);
      if (lo_t > hi_t)
        throw WindowExhausted("hom lookup beyond window span: " + id_name(a) + " -> " +
                              id_name(b));
      int t = lo_t > 0 ? lo_t : (hi_t < 0 ? hi_t : 0);
      a.shift += t;
      b.shift += t;
    }
    auto it = hom.find({a, b});
    return it == hom.end() ? 0 : it->second;
  }

  /// Biadditive extension to formal objects.
  int hom_dim(const FormalObject& a, const FormalObject& b) const {
    int d = 0;
    for (const auto& [ia, ka] : a.mult())
      for (const auto& [ib, kb] : b.mult()) d += ka * kb * hom_dim(ia, ib);
    return d;
  }

  /// K0 class; suspension flips the sign.
  std::vector<long> k0_class(const FormalObject& t) const {
    std::vector<long> v(k0_basis.size(), 0);
    for (const auto& [id, k] : t.mult()) {
      long sign = (id.shift % 2 == 0) ? 1 : -1;
      const auto& base = orbits[id.orbit].k0;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * k * base[i];
    }
    return v;
  }

  std::string id_name(IndecId id) const;
  IndecId parse_id(const std::string& s) const;
  std::string formal_name(const FormalObject& t) const;
  FormalObject parse_formal(const std::string& s) const;

  /// Structural validation: Sigma-equivariance of the hom table, K0
  /// additivity over cataloged triangles. Throws on violation; returns
  /// warnings (e.g. catalog closure gaps) without failing.
  std::vector<std::string> validate() const;
};

void save_snapshot(const Snapshot& s, const std::string& path);
Snapshot load_snapshot(const std::string& path);

}  // namespace costab

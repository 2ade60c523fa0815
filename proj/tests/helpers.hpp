#pragma once

#include "costab/demos.hpp"

namespace costab::testing {

// categories are expensive enough to share across test cases
inline const Category& ka2() {
  static Category cat = build_category(make_ka2(), {});
  return cat;
}

inline const Category& dual3() {
  static Category cat = [] {
    BuildOptions bo;
    bo.width_bound = 3;
    return build_category(make_dual_numbers(), bo);
  }();
  return cat;
}

inline IndecId id_of(const Snapshot& s, const std::string& name) { return s.parse_id(name); }

inline FormalObject fo(const Snapshot& s, const std::string& spec) {
  return s.parse_formal(spec);
}

}  // namespace costab::testing

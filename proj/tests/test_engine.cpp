#include <doctest.h>

#include "costab/homotopy.hpp"
#include "costab/presentation.hpp"

using namespace costab;

namespace {

const PathAlgebra<Rat>& KA2() {
  static PathAlgebra<Rat> a(make_ka2());
  return a;
}
const PathAlgebra<Rat>& DUAL() {
  static PathAlgebra<Rat> a(make_dual_numbers());
  return a;
}

Complex<Rat> the_z() {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  HomSpace<Rat> h = hom_space(A, x, y);
  return cone(x, y, h.class_maps.at(0)).c;
}

}  // namespace

TEST_CASE("hom dimensions over kA2") {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  CHECK(hom_dim(A, x, y) == 1);
  CHECK(hom_dim(A, y, x) == 0);
  CHECK(hom_dim(A, x, shift(x, 1)) == 0);
  CHECK(hom_dim(A, x, shift(x, -2)) == 0);
}

TEST_CASE("hom dimensions over the dual numbers: End(R) is 2-dimensional") {
  const auto& R = DUAL();
  Complex<Rat> c = stalk(R, 0, 0);
  CHECK(hom_dim(R, c, c) == 2);
  CHECK(hom_dim(R, c, shift(c, 3)) == 0);
}

TEST_CASE("cone of the identity is contractible") {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0);
  Cone<Rat> c = cone(x, x, identity_map(x));
  check_complex(c.c);
  CHECK(minimize(c.c).min.is_zero());
}

TEST_CASE("cone of zero map splits as Y + Sigma X") {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  Cone<Rat> c = cone(x, y, DegMap<Rat>{});
  Decomposition<Rat> d = decompose(A, c.c);
  REQUIRE(d.parts.size() == 2);
  bool found_y = false, found_sx = false;
  for (const auto& p : d.parts) {
    if (indec_iso(A, p, y)) found_y = true;
    if (indec_iso(A, p, shift(x, 1))) found_sx = true;
  }
  CHECK(found_y);
  CHECK(found_sx);
}

TEST_CASE("the two-term kA2 complex is indecomposable with the right homs") {
  const auto& A = KA2();
  Complex<Rat> z = the_z();
  check_complex(z);
  CHECK(z.lo == -1);
  CHECK(z.total_summands() == 2);
  Decomposition<Rat> d = decompose(A, z);
  CHECK(d.parts.size() == 1);
  Complex<Rat> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  CHECK(hom_dim(A, z, shift(x, 1)) == 1);
  CHECK(hom_dim(A, z, y) == 0);
  CHECK(hom_dim(A, y, z) == 1);
  CHECK(hom_dim(A, z, x) == 0);
  CHECK(hom_dim(A, x, z) == 0);
}

TEST_CASE("decompose: X + X gives two copies; idempotent on parts") {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0);
  SumParts<Rat> s = direct_sum<Rat>(A, {&x, &x});
  Decomposition<Rat> d = decompose(A, s.sum);
  REQUIRE(d.parts.size() == 2);
  for (const auto& p : d.parts) {
    CHECK(indec_iso(A, p, x).has_value());
    CHECK(decompose(A, p).parts.size() == 1);  // decompose is idempotent
  }
}

TEST_CASE("strict split data composes to the identity") {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  SumParts<Rat> s = direct_sum<Rat>(A, {&x, &y});
  Decomposition<Rat> d = decompose(A, s.sum);
  REQUIRE(d.parts.size() == 2);
  // sum of incl_i proj_i is homotopic to the identity on the reduced complex
  DegMap<Rat> acc;
  for (std::size_t i = 0; i < d.parts.size(); ++i) {
    DegMap<Rat> ip = compose_maps(A, d.reduced, d.parts[i], d.reduced, d.incl[i], d.proj[i]);
    acc = add_maps(A, acc, ip);
  }
  DegMap<Rat> delta = add_maps(A, acc, negate_map(A, identity_map(d.reduced)));
  CHECK(is_nullhomotopic(A, d.reduced, d.reduced, delta));
}

TEST_CASE("dual numbers: the length-2 string is indecomposable") {
  const auto& R = DUAL();
  Complex<Rat> c = stalk(R, 0, 0);
  HomSpace<Rat> h = hom_space(R, c, c);
  // pick the non-invertible class (multiplication by X)
  int xi = -1;
  for (std::size_t i = 0; i < h.class_maps.size(); ++i) {
    DegMap<Rat> sq = compose_maps(R, c, c, c, h.class_maps[i], h.class_maps[i]);
    if (is_nullhomotopic(R, c, c, sq) && !is_nullhomotopic(R, c, c, h.class_maps[i]))
      xi = static_cast<int>(i);
  }
  REQUIRE(xi >= 0);
  Complex<Rat> c2 = cone(c, c, h.class_maps[xi]).c;
  CHECK(decompose(R, c2).parts.size() == 1);
  CHECK(hom_dim(R, c2, shift(c2, 1)) == 1);
}

TEST_CASE("indecomposable enumeration across the shift window") {
  auto ka2 = enumerate_indecomposables(KA2(), 2, -1, 1);
  CHECK(ka2.size() == 9);  // 3 orbits x 3 shifts
  auto dual = enumerate_indecomposables(DUAL(), 3, -1, 1);
  CHECK(dual.size() == 9);  // strings of length 1..3 x 3 shifts
  auto trivial_window = enumerate_indecomposables(KA2(), 1, 0, 0);
  CHECK(trivial_window.size() == 2);
  CHECK_THROWS_AS(enumerate_indecomposables(KA2(), 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_indecomposables(DUAL(), 3, -1, 1, 2), ResourceLimitError);
}

TEST_CASE("orbit enumeration matches the known classifications") {
  OrbitEnumeration<Rat> ka2 = enumerate_orbits(KA2(), 2);
  CHECK(ka2.complete);
  CHECK(ka2.orbit_reps.size() == 3);
  OrbitEnumeration<Rat> trivial = enumerate_orbits(KA2(), 1);
  CHECK(trivial.orbit_reps.size() == 2);  // only the stalks at width 1
  OrbitEnumeration<Rat> dual = enumerate_orbits(DUAL(), 3);
  CHECK(dual.complete);
  CHECK(dual.orbit_reps.size() == 3);  // strings of length 1, 2, 3
  std::vector<int> widths;
  for (const auto& r : dual.orbit_reps) widths.push_back(r.hi() - r.lo + 1);
  std::sort(widths.begin(), widths.end());
  CHECK(widths == std::vector<int>{1, 2, 3});
}

TEST_CASE("suspension invariance of hom on enumerated pairs") {
  const auto& A = KA2();
  OrbitEnumeration<Rat> orbs = enumerate_orbits(A, 2);
  for (const auto& a : orbs.orbit_reps)
    for (const auto& b : orbs.orbit_reps)
      for (int k = -1; k <= 1; ++k) {
        int d1 = hom_dim(A, shift(a, k), b);
        int d2 = hom_dim(A, shift(a, k + 1), shift(b, 1));
        CHECK(d1 == d2);
      }
}

TEST_CASE("cone is compatible with direct sums (sampled)") {
  const auto& A = KA2();
  Complex<Rat> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  HomSpace<Rat> h = hom_space(A, x, y);
  DegMap<Rat> f = h.class_maps.at(0);
  // cone(f (+) id_y) ~ cone(f) (+) cone(id) ~ cone(f)
  SumParts<Rat> sx = direct_sum<Rat>(A, {&x, &y});
  SumParts<Rat> sy = direct_sum<Rat>(A, {&y, &y});
  DegMap<Rat> fid;
  {
    DegMap<Rat> f1 = compose_maps(A, sx.sum, x, y, f, sx.proj[0]);
    f1 = compose_maps(A, sx.sum, y, sy.sum, sy.incl[0], f1);
    DegMap<Rat> f2 = compose_maps(A, sx.sum, y, sy.sum, sy.incl[1], sx.proj[1]);
    fid = add_maps(A, f1, f2);
  }
  Complex<Rat> big = cone(sx.sum, sy.sum, fid).c;
  Complex<Rat> small = cone(x, y, f).c;
  // cone(f + id) = cone(f) up to the contractible summand
  SumParts<Rat> expect = direct_sum<Rat>(A, {&small});
  CHECK(isomorphic(A, big, expect.sum));
}

TEST_CASE("minimize preserves the homotopy type") {
  const auto& A = KA2();
  Complex<Rat> z = the_z();
  Complex<Rat> zz = cone(z, z, identity_map(z)).c;  // contractible
  SumParts<Rat> mix = direct_sum<Rat>(A, {&z, &zz});
  Minimized<Rat> m = minimize(mix.sum);
  check_complex(m.min);
  CHECK(m.min.total_summands() == 2);
  CHECK(isomorphic(A, m.min, z));
  // to_min and from_min compose to the identity up to homotopy
  DegMap<Rat> round = compose_maps(A, mix.sum, m.min, mix.sum, m.from_min, m.to_min);
  DegMap<Rat> delta = add_maps(A, round, negate_map(A, identity_map(mix.sum)));
  CHECK(is_nullhomotopic(A, mix.sum, mix.sum, delta));
}

TEST_CASE("complex serialization round trips through degree-indexed matrices") {
  const auto& A = KA2();
  Complex<Rat> z = the_z();
  std::string text = complex_to_text(z);
  CHECK(text.find("degree -1: P1") != std::string::npos);
  Complex<Rat> back = complex_from_text(A, text);
  CHECK(back.lo == z.lo);
  CHECK(back.mods == z.mods);
  CHECK(indec_iso(A, back, z).has_value());
  // and over the dual numbers with a longer string complex
  const auto& R = DUAL();
  OrbitEnumeration<Rat> orbs = enumerate_orbits(R, 3);
  for (const auto& rep : orbs.orbit_reps) {
    Complex<Rat> rb = complex_from_text(R, complex_to_text(rep));
    CHECK(isomorphic(R, rb, rep));
  }
}

TEST_CASE("decompose over F_p = 32003") {
  PathAlgebra<Fp> A(make_ka2());
  Complex<Fp> x = stalk(A, 0, 0), y = stalk(A, 1, 0);
  HomSpace<Fp> h = hom_space(A, x, y);
  REQUIRE(h.dim() == 1);
  Complex<Fp> z = cone(x, y, h.class_maps[0]).c;
  CHECK(decompose(A, z).parts.size() == 1);
  SumParts<Fp> s = direct_sum<Fp>(A, {&x, &x});
  CHECK(decompose(A, s.sum).parts.size() == 2);
}

#include <doctest.h>

#include <cstdio>

#include "costab/path_algebra.hpp"

using namespace costab;

TEST_CASE("kA2 path algebra has basis {e_1, e_2, a}") {
  PathAlgebra<Rat> A(make_ka2());
  CHECK(A.dim() == 3);
  CHECK(A.component(0, 1).size() == 1);  // paths 1 ~> 2
  CHECK(A.component(1, 0).empty());
  auto a = A.arrow(0);
  CHECK(PathAlgebra<Rat>::is_zero(A.mul(a, a)));  // a ends where it cannot restart
  CHECK(A.mul(A.unit(1), a) == a);                // e_2 * a = a
  CHECK(A.mul(a, A.unit(0)) == a);                // a * e_1 = a
}

TEST_CASE("dual numbers: X^2 = 0 and local inverse") {
  PathAlgebra<Rat> R(make_dual_numbers());
  CHECK(R.dim() == 2);
  auto x = R.arrow(0);
  CHECK(PathAlgebra<Rat>::is_zero(R.mul(x, x)));
  // (1 + X)^{-1} = 1 - X
  auto u = R.add(R.unit(0), x);
  auto inv = R.local_inverse(u, 0);
  CHECK(R.mul(u, inv) == R.unit(0));
}

TEST_CASE("non-monomial admissible relation: commutative square") {
  AlgebraPresentation p;
  p.name = "square";
  p.vertex_names = {"1", "2", "3", "4"};
  p.arrows = {{0, 1, "a"}, {1, 3, "b"}, {0, 2, "c"}, {2, 3, "d"}};
  Relation r;
  r.push_back({Rat(1), {0, 1}});   // b after a
  r.push_back({Rat(-1), {2, 3}});  // minus d after c
  p.relations = {r};
  PathAlgebra<Rat> A(p);
  // 4 lazy paths + 4 arrows + the single surviving length-2 class
  CHECK(A.dim() == 9);
  auto ba = A.mul(A.arrow(1), A.arrow(0));
  auto dc = A.mul(A.arrow(3), A.arrow(2));
  CHECK(ba == dc);
  CHECK(!PathAlgebra<Rat>::is_zero(ba));
}

TEST_CASE("admissibility rejected for length-1 relation terms") {
  AlgebraPresentation p = make_ka2();
  Relation bad;
  bad.push_back({Rat(1), {0}});
  p.relations = {bad};
  CHECK_THROWS(p.validate());
}

TEST_CASE("algebra file save/load round trip") {
  AlgebraPresentation p = make_dual_numbers();
  std::string path = "/tmp/costab_test_algebra.alg";
  save_algebra(p, path);
  AlgebraPresentation q = load_algebra(path);
  CHECK(q.name == p.name);
  CHECK(q.vertex_names == p.vertex_names);
  CHECK(q.arrows.size() == p.arrows.size());
  REQUIRE(q.relations.size() == 1);
  CHECK(q.relations[0].size() == 1);
  CHECK(q.relations[0][0].arrows == std::vector<int>{0, 0});
  std::remove(path.c_str());
}

TEST_CASE("Fp instantiation agrees with Q on kA2 structure") {
  PathAlgebra<Fp> A(make_ka2());
  CHECK(A.dim() == 3);
}

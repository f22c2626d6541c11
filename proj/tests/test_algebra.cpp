#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "alg_oracles.hpp"
#include "rlie/algebra.hpp"
#include "rlie/constructors.hpp"

using namespace rlie;

namespace {

LieAlgebra sl2_by_hand(const Field& f) {
  // e=0, f=1, h=2
  std::vector<StructureConstant> sc{{0, 1, 2, 1}, {0, 2, 0, f.from_int(-2)}, {1, 2, 1, 2}};
  std::vector<PowerEntry> pm{{2, 2, 1}};
  return LieAlgebra(f, 3, sc, pm, "sl2");
}

std::vector<LieAlgebra> samples() {
  std::vector<LieAlgebra> out;
  for (unsigned p : {5u, 7u}) out.push_back(construct_witt(1, Field(p)));
  Field f5(5);
  out.push_back(construct_sl(2, f5));
  out.push_back(construct_sl(3, f5));
  out.push_back(construct_hamiltonian(2, f5));
  return out;
}

}  // namespace

TEST_CASE("constructor validation") {
  Field f(5);
  std::vector<PowerEntry> none;
  std::vector<StructureConstant> bad_order{{1, 0, 0, 1}};
  CHECK_THROWS_AS(LieAlgebra(f, 2, bad_order, none), std::invalid_argument);
  std::vector<StructureConstant> dup{{0, 1, 0, 1}, {0, 1, 0, 2}};
  CHECK_THROWS_AS(LieAlgebra(f, 2, dup, none), std::invalid_argument);
  std::vector<StructureConstant> big{{0, 1, 0, 5}};
  CHECK_THROWS_AS(LieAlgebra(f, 2, big, none), std::invalid_argument);
  std::vector<StructureConstant> range{{0, 1, 2, 1}};
  CHECK_THROWS_AS(LieAlgebra(f, 2, range, none), std::out_of_range);
}

TEST_CASE("pair indexing is a bijection") {
  for (std::size_t d : {2u, 3u, 7u, 20u}) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j, ++n) {
        REQUIRE(pair_index(d, i, j) == n);
        auto [a, b] = pair_from_index(d, n);
        REQUIRE(a == i);
        REQUIRE(b == j);
      }
    REQUIRE(n == pair_count(d));
  }
}

TEST_CASE("W(1) brackets follow (k - j) e_{j+k}") {
  for (unsigned p : {5u, 7u, 11u}) {
    Field f(p);
    LieAlgebra w = construct_witt(1, f);
    REQUIRE(w.dim() == p);
    const int top = static_cast<int>(p) - 2;
    for (int j = -1; j <= top; ++j) {
      REQUIRE(w.basis_name(j + 1) == "e" + std::to_string(j));
      for (int k = -1; k <= top; ++k) {
        SparseVec expect;
        if (j + k >= -1 && j + k <= top && k != j)
          expect.push_back({static_cast<std::uint32_t>(j + k + 1), f.from_int(k - j)});
        REQUIRE(w.basis_bracket(j + 1, k + 1) == expect);
      }
      SparseVec pw = j == 0 ? SparseVec{{1, 1}} : SparseVec{};
      REQUIRE(w.basis_power(j + 1) == pw);
    }
  }
  Field f(5);
  LieAlgebra w = construct_witt(1, f);
  // [e1, e2] = e3
  REQUIRE(w.basis_bracket(2, 3) == SparseVec{{4, 1}});
}

TEST_CASE("W(2) sample bracket") {
  Field f(5);
  AmbientWitt W(f, 2);
  LieAlgebra w = construct_witt(2, f);
  const std::uint32_t d1 = W.index(0, 0);
  const std::uint32_t x1d1 = W.index(0, static_cast<std::uint32_t>(W.monomials().stride(0)));
  REQUIRE(w.basis_name(x1d1) == W.basis_name(x1d1));
  REQUIRE(w.basis_bracket(d1, x1d1) == SparseVec{{d1, 1}});
}

TEST_CASE("ad matrix and iterated bracket") {
  Field f(5);
  LieAlgebra w = construct_witt(1, f);
  DenseMatrix a = ad_matrix(w, unit_vector(5, 1)).to_dense();
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 5; ++c) CHECK(a(r, c) == (r == c ? f.from_int(static_cast<int>(c) - 1) : 0));
  // [[[[e1, e0], e0], e0], e0] = e1
  REQUIRE(iterated_bracket(w, unit_vector(5, 2), unit_vector(5, 1), 4) == unit_vector(5, 2));
  REQUIRE(iterated_bracket(w, unit_vector(5, 2), unit_vector(5, 1), 1) == scale(f, f.neg(1), unit_vector(5, 2)));
  auto t = oracle::table_of(w);
  std::mt19937_64 rng(7);
  for (int s = 0; s < 20; ++s) {
    Vec g = random_element(f, 5, rng), h = random_element(f, 5, rng);
    oracle::V cur = oracle::widen(g);
    for (int k = 0; k < 3; ++k) cur = oracle::bracket(t, cur, oracle::widen(h));
    REQUIRE(oracle::widen(iterated_bracket(w, g, h, 3)) == cur);
  }
}

TEST_CASE("bracket is bilinear and matches the dense table") {
  for (const auto& g : samples()) {
    const Field& f = g.field();
    auto t = oracle::table_of(g);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Scalar> sd(0, f.p() - 1);
    for (int s = 0; s < 20; ++s) {
      Vec u = random_element(f, g.dim(), rng), u2 = random_element(f, g.dim(), rng),
          v = random_element(f, g.dim(), rng);
      Scalar a = sd(rng), b = sd(rng);
      Vec lhs = bracket(g, add(f, scale(f, a, u), scale(f, b, u2)), v);
      Vec rhs = add(f, scale(f, a, bracket(g, u, v)), scale(f, b, bracket(g, u2, v)));
      REQUIRE(lhs == rhs);
      REQUIRE(oracle::widen(bracket(g, u, v)) == oracle::bracket(t, oracle::widen(u), oracle::widen(v)));
      REQUIRE(bracket(g, to_sparse(u), to_sparse(v)) == to_sparse(bracket(g, u, v)));
    }
  }
}

TEST_CASE("basis p-powers satisfy ad(x^[p]) = (ad x)^p") {
  for (const auto& g : samples()) {
    const Field& f = g.field();
    for (std::size_t i = 0; i < g.dim(); ++i) {
      DenseMatrix lhs = ad_matrix(g, to_dense(g.basis_power(i), g.dim())).to_dense();
      DenseMatrix rhs = ad_matrix(g, unit_vector(g.dim(), i)).to_dense().power(f.p());
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("Jacobson sum against the associative identity on ad matrices") {
  for (const auto& g : samples()) {
    const Field& f = g.field();
    const std::int64_t p = f.p();
    auto t = oracle::table_of(g);
    std::mt19937_64 rng(13);
    for (int s = 0; s < 5; ++s) {
      Vec x = random_element(f, g.dim(), rng), y = random_element(f, g.dim(), rng);
      oracle::Mat ax = oracle::ad(t, oracle::widen(x)), ay = oracle::ad(t, oracle::widen(y));
      oracle::Mat want = oracle::mpow(oracle::madd(ax, ay, 1, p), p, p);
      want = oracle::madd(want, oracle::mpow(ax, p, p), -1, p);
      want = oracle::madd(want, oracle::mpow(ay, p, p), -1, p);
      REQUIRE(oracle::ad(t, oracle::widen(jacobson_sum(g, x, y))) == want);
      REQUIRE(jacobson_terms(g, x, y).size() == f.p() - 1);
    }
  }
}

TEST_CASE("p-power agrees with the ad-power oracle and is order independent") {
  for (const auto& g : samples()) {
    const Field& f = g.field();
    auto t = oracle::table_of(g);
    std::vector<std::uint32_t> rev(g.dim());
    for (std::uint32_t k = 0; k < g.dim(); ++k) rev[k] = static_cast<std::uint32_t>(g.dim() - 1 - k);
    std::vector<std::uint32_t> shuffled = rev;
    std::mt19937_64 rng(17);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (int s = 0; s < 10; ++s) {
      Vec v = random_element(f, g.dim(), rng);
      Vec a = p_power(g, v);
      REQUIRE(p_power(g, v, rev) == a);
      REQUIRE(p_power(g, v, shuffled) == a);
      REQUIRE(oracle::widen(a) == oracle::ppower_via_ad(t, oracle::widen(v)));
    }
  }
}

TEST_CASE("gates pass on hand-built sl2") {
  Field f(5);
  LieAlgebra g = sl2_by_hand(f);
  REQUIRE(jacobi_check(g));
  REQUIRE(restrictedness_check(g, 50));
  REQUIRE(simplicity_check(g, 5).simple());
  REQUIRE(g == construct_sl(2, f));
}

TEST_CASE("corrupted structure constant fails Jacobi") {
  Field f(5);
  LieAlgebra w = construct_witt(1, f);
  auto sc = w.structure_constants();
  // [e-1, e1] = 2 e0 becomes 3 e0
  for (auto& c : sc)
    if (c.i == 0 && c.j == 2) c.coeff = 3;
  LieAlgebra bad(f, 5, sc, w.power_entries());
  auto rep = jacobi_check(bad);
  REQUIRE_FALSE(rep.passed);
  REQUIRE(rep.axiom == "jacobi");
  REQUIRE(rep.indices.size() == 3);
}

TEST_CASE("altered p-map fails restrictedness") {
  Field f(5);
  LieAlgebra w = construct_witt(1, f);
  std::vector<PowerEntry> pm{{1, 1, 1}, {2, 1, 1}};  // e1^[p] = e0 is wrong
  LieAlgebra bad(f, 5, w.structure_constants(), pm);
  REQUIRE(jacobi_check(bad));
  auto rep = restrictedness_check(bad, 50);
  REQUIRE_FALSE(rep.passed);
  REQUIRE(rep.axiom == "ad(x^[p]) = (ad x)^p");
  REQUIRE(rep.indices.front() == 2);
}

TEST_CASE("simplicity gate") {
  Field f(5);
  for (const auto& g : samples()) {
    auto rep = simplicity_check(g, 5);
    REQUIRE(rep.simple());
    REQUIRE(rep.derived_dim == g.dim());
  }
  LieAlgebra two = direct_sum(construct_sl(2, f), construct_sl(2, f));
  REQUIRE(jacobi_check(two));
  REQUIRE(restrictedness_check(two, 20));
  auto rep = simplicity_check(two, 5);
  REQUIRE_FALSE(rep.simple());
  REQUIRE(rep.perfect);
  REQUIRE(rep.ideal_dim == 3);

  // abelian two-dimensional algebra is not perfect
  LieAlgebra ab(f, 2, {}, {});
  auto r2 = simplicity_check(ab, 3);
  REQUIRE_FALSE(r2.perfect);
  REQUIRE(r2.derived_dim == 0);
}

TEST_CASE("derived subalgebra and generated ideal") {
  Field f(5);
  LieAlgebra w = construct_witt(1, f);
  // span(e0, e1, e2, e3) is a subalgebra whose derived algebra is span(e1, e2, e3)
  std::vector<Vec> sub;
  for (std::size_t k = 1; k < 5; ++k) sub.push_back(unit_vector(5, k));
  auto der = derived_subalgebra(w, sub);
  REQUIRE(der.size() == 3);
  REQUIRE(generated_ideal(w, unit_vector(5, 4)).full());
}

TEST_CASE("quotient by a central element") {
  Field f(5);
  LieAlgebra sl5 = detail::build_sl(5, f, "sl(5)");
  Vec id(sl5.dim(), 0);
  for (unsigned k = 0; k < 4; ++k) id[20 + k] = f.from_int(k + 1);
  LieAlgebra q = quotient_by_central(sl5, id, "psl(5)");
  REQUIRE(q.dim() == 23);
  REQUIRE(jacobi_check(q));
  REQUIRE(restrictedness_check(q, 20));
  REQUIRE_THROWS_AS(quotient_by_central(sl5, unit_vector(sl5.dim(), 0)), std::invalid_argument);
}

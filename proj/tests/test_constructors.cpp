#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "rlie/constructors.hpp"

using namespace rlie;

namespace {

void require_gates(const LieAlgebra& g, std::size_t samples = 50) {
  INFO(g.label());
  auto j = jacobi_check(g);
  INFO(j.witness);
  REQUIRE(j.passed);
  auto r = restrictedness_check(g, samples, 3);
  INFO(r.axiom << ": " << r.witness);
  REQUIRE(r.passed);
  auto s = simplicity_check(g, 5, 3);
  INFO(s.witness);
  REQUIRE(s.simple());
}

// v as an m x m matrix: E_ij coordinates first, then H_k.
oracle::Mat sl_matrix(unsigned m, const Vec& v, std::int64_t p) {
  oracle::Mat a(m, std::vector<std::int64_t>(m, 0));
  std::size_t n = 0;
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j)
      if (i != j) a[i][j] = v[n++];
  for (unsigned k = 0; k + 1 < m; ++k) {
    a[k][k] = oracle::md(a[k][k] + v[n + k], p);
    a[k + 1][k + 1] = oracle::md(a[k + 1][k + 1] - std::int64_t(v[n + k]), p);
  }
  return a;
}

}  // namespace

TEST_CASE("dimensions match the closed forms") {
  Field f5(5), f7(7);
  CHECK(construct_witt(1, f5).dim() == 5);
  CHECK(construct_witt(1, f7).dim() == 7);
  CHECK(construct_witt(2, f5).dim() == 50);
  CHECK(construct_witt(2, f7).dim() == 98);
  CHECK(construct_witt(3, f5).dim() == 375);
  CHECK(construct_special(3, f5).dim() == 248);
  CHECK(construct_hamiltonian(2, f5).dim() == 23);
  CHECK(construct_hamiltonian(2, f7).dim() == 47);
  CHECK(construct_hamiltonian(4, f5).dim() == 623);
  CHECK(construct_contact(3, f5).dim() == 125);
  CHECK(construct_contact(3, f7).dim() == 343);
  for (unsigned m : {2u, 3u, 4u}) CHECK(construct_sl(m, f5).dim() == m * m - 1);
  CHECK(construct_psl(5, f5).dim() == 23);
  CHECK(construct_psl(7, f7).dim() == 47);
}

TEST_CASE("argument and guard errors") {
  Field f5(5);
  CHECK_THROWS_AS(construct_sl(5, f5), std::invalid_argument);
  CHECK_THROWS_AS(construct_psl(4, f5), std::invalid_argument);
  CHECK_THROWS_AS(construct_hamiltonian(3, f5), std::invalid_argument);
  CHECK_THROWS_AS(construct_contact(4, f5), std::invalid_argument);
  CHECK_THROWS_AS(construct_special(2, f5), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("melikian"), std::invalid_argument);
  CHECK(parse_family("hamiltonian") == Family::Hamiltonian);
  CHECK_THROWS_AS(construct_contact(5, f5), ResourceGuardError);
  CHECK_THROWS_AS(construct_witt(2, f5, {.max_dim = 49}), ResourceGuardError);
  CHECK_NOTHROW(construct_witt(2, f5, {.max_dim = 50}));
  try {
    construct_special(4, f5, {.max_dim = 1000});
    FAIL("expected guard");
  } catch (const ResourceGuardError& e) {
    CHECK(e.requested() == 1872);
    CHECK(e.limit() == 1000);
  }
}

TEST_CASE("monomial indexing") {
  Monomials m(2, 5);
  CHECK(m.size() == 25);
  CHECK(m.variable(0) == 5);
  CHECK(m.variable(1) == 1);
  CHECK(m.name(7) == "(1,2)");
  CHECK(m.degree(7) == 3);
  CHECK(m.product(7, 5) == std::optional<std::uint32_t>(12));
  CHECK_FALSE(m.product(20, 5).has_value());
  AmbientWitt W(Field(5), 2);
  CHECK(W.basis_name(W.index(1, 7)) == "x(1,2)d2");
}

TEST_CASE("gates on constructed algebras") {
  Field f5(5), f7(7);
  require_gates(construct_witt(1, f5));
  require_gates(construct_witt(1, f7));
  require_gates(construct_witt(2, f5));
  require_gates(construct_sl(2, f5));
  require_gates(construct_sl(3, f5));
  require_gates(construct_sl(4, f5));
  require_gates(construct_psl(5, f5));
  require_gates(construct_hamiltonian(2, f5));
  require_gates(construct_hamiltonian(2, f7));
}

TEST_CASE("gates on K(3)", "[slow]") { require_gates(construct_contact(3, Field(5))); }

TEST_CASE("gates on S(3)", "[long]") { require_gates(construct_special(3, Field(5))); }

TEST_CASE("sl(m) p-map is the matrix p-th power") {
  for (unsigned m : {2u, 3u, 4u}) {
    Field f(m == 2 ? 7 : 5);
    const std::int64_t p = f.p();
    LieAlgebra g = construct_sl(m, f);
    std::mt19937_64 rng(m);
    for (int s = 0; s < 10; ++s) {
      Vec v = random_element(f, g.dim(), rng);
      oracle::Mat a = sl_matrix(m, v, p), ap = sl_matrix(m, p_power(g, v), p);
      oracle::Mat want = a;
      for (int k = 1; k < p; ++k) want = oracle::matmul(want, a, p);
      REQUIRE(ap == want);
    }
  }
  Field f(5);
  LieAlgebra sl2 = construct_sl(2, f);
  CHECK(sl2.basis_names() == std::vector<std::string>{"e", "f", "h"});
  CHECK(sl2.basis_power(2) == SparseVec{{2, 1}});
  CHECK(sl2.basis_power(0).empty());
}

TEST_CASE("W(1) p-map is the p-th power of the derivation") {
  for (unsigned pp : {5u, 7u}) {
    Field f(pp);
    const std::int64_t p = pp;
    LieAlgebra w = construct_witt(1, f);
    std::mt19937_64 rng(pp);
    for (int s = 0; s < 20; ++s) {
      Vec v = random_element(f, pp, rng);
      // D = sum_j v_j x^{j+1} d/dx acting on 1, x, .., x^{p-1}
      oracle::Mat D(p, std::vector<std::int64_t>(p, 0));
      for (std::int64_t m = 1; m < p; ++m)
        for (std::int64_t j = -1; j <= p - 2; ++j)
          if (j + m >= 0 && j + m < p) D[j + m][m] = oracle::md(D[j + m][m] + m * std::int64_t(v[j + 1]), p);
      oracle::Mat Dp = D;
      for (int k = 1; k < p; ++k) Dp = oracle::matmul(Dp, D, p);
      Vec q = p_power(w, v);
      // D^p = g d/dx with g = D^p(x)
      for (std::int64_t k = 0; k < p; ++k) REQUIRE(std::int64_t(q[k]) == Dp[k][1]);
    }
  }
}

TEST_CASE("subalgebras of W(n) are closed and carry the ambient p-map") {
  Field f(5);
  LieAlgebra h = construct_hamiltonian(2, f);
  CHECK(h.label() == "H(2)");
  CHECK(h.basis_name(0) == "x0");
  LieAlgebra s = construct_special(3, f);
  CHECK(s.label() == "S(3)");
  AmbientWitt W(f, 2);
  // span(d1, x1^2 d1) is not closed
  auto bad = echelon_span(f, W.dim(), {unit_sparse(W.index(0, 0)), unit_sparse(W.index(0, 10))});
  CHECK_THROWS_AS(realize_subalgebra(W, bad, "bad"), ConstructionError);
}

TEST_CASE("direct sum and family dispatch") {
  Field f(5);
  LieAlgebra a = direct_sum(construct_sl(2, f), construct_witt(1, f), "sl2+W1");
  CHECK(a.dim() == 8);
  CHECK(jacobi_check(a));
  CHECK(construct(Family::Psl, 5, f) == construct_psl(5, f));
  CHECK(construct(Family::Witt, 1, f) == construct_witt(1, f));
}

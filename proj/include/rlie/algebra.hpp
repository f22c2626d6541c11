#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rlie/field.hpp"
#include "rlie/linalg.hpp"
#include "rlie/sparse.hpp"

namespace rlie {

/// [x_i, x_j] has coefficient `coeff` on x_k; only i < j is stored.
struct StructureConstant {
  std::uint32_t i, j, k;
  Scalar coeff;
  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

/// x_i^[p] has coefficient `coeff` on x_k.
struct PowerEntry {
  std::uint32_t i, k;
  Scalar coeff;
  friend bool operator==(const PowerEntry&, const PowerEntry&) = default;
};

inline std::size_t pair_count(std::size_t d) { return d < 2 ? 0 : d * (d - 1) / 2; }

// Lexicographic index of the pair (i, j), i < j.
inline std::size_t pair_index(std::size_t d, std::size_t i, std::size_t j) {
  return i * (2 * d - i - 1) / 2 + (j - i - 1);
}

inline std::pair<std::uint32_t, std::uint32_t> pair_from_index(std::size_t d, std::size_t idx) {
  std::size_t i = 0;
  while (idx >= d - i - 1) {
    idx -= d - i - 1;
    ++i;
  }
  return {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1 + idx)};
}

/// A restricted Lie algebra over GF(p) given by structure constants on a basis
/// x_0..x_{d-1} and the [p]-map on the basis vectors. Immutable.
class LieAlgebra {
 public:
  LieAlgebra(const Field& f, std::size_t dim, std::span<const StructureConstant> brackets,
             std::span<const PowerEntry> pmap, std::string label = {}, std::vector<std::string> names = {})
      : f_(f), dim_(dim), label_(std::move(label)), names_(std::move(names)) {
    if (!names_.empty() && names_.size() != dim_)
      throw std::invalid_argument("basis name count does not match dimension");
    std::vector<std::vector<Term>> pair_terms(pair_count(dim_));
    for (const auto& sc : brackets) {
      if (sc.i >= sc.j) throw std::invalid_argument("structure constant requires i < j");
      if (sc.j >= dim_ || sc.k >= dim_) throw std::out_of_range("structure constant index out of range");
      if (sc.coeff == 0 || sc.coeff >= f_.p()) throw std::invalid_argument("coefficient must lie in 1..p-1");
      pair_terms[pair_index(dim_, sc.i, sc.j)].push_back({sc.k, sc.coeff});
    }
    std::vector<std::vector<Term>> power_terms(dim_);
    for (const auto& pe : pmap) {
      if (pe.i >= dim_ || pe.k >= dim_) throw std::out_of_range("p-map index out of range");
      if (pe.coeff == 0 || pe.coeff >= f_.p()) throw std::invalid_argument("coefficient must lie in 1..p-1");
      power_terms[pe.i].push_back({pe.k, pe.coeff});
    }
    auto finish = [](std::vector<Term>& v, const char* what) {
      std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
      for (std::size_t n = 1; n < v.size(); ++n)
        if (v[n - 1].index == v[n].index) throw std::invalid_argument(std::string("duplicate ") + what + " entry");
    };
    brackets_.resize(pair_terms.size());
    for (std::size_t n = 0; n < pair_terms.size(); ++n) {
      finish(pair_terms[n], "bracket");
      brackets_[n] = std::move(pair_terms[n]);
    }
    pmap_.resize(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      finish(power_terms[i], "p-map");
      pmap_[i] = std::move(power_terms[i]);
    }
    index();
  }

  /// Builds from per-pair bracket vectors (indexed by pair_index) and per-basis
  /// p-powers; vectors must already be canonical sparse vectors.
  static LieAlgebra from_tables(const Field& f, std::size_t dim, std::vector<SparseVec> pair_brackets,
                                std::vector<SparseVec> pmap, std::string label = {},
                                std::vector<std::string> names = {}) {
    if (pair_brackets.size() != pair_count(dim) || pmap.size() != dim)
      throw std::invalid_argument("bracket or p-map table has the wrong size");
    LieAlgebra alg(f, dim, {}, {}, std::move(label), std::move(names));
    alg.brackets_ = std::move(pair_brackets);
    alg.pmap_ = std::move(pmap);
    for (const auto& v : alg.brackets_) check_canonical(f, dim, v);
    for (const auto& v : alg.pmap_) check_canonical(f, dim, v);
    alg.index();
    return alg;
  }

  const Field& field() const noexcept { return f_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<std::string>& basis_names() const noexcept { return names_; }
  std::string basis_name(std::size_t i) const {
    return names_.empty() ? "x" + std::to_string(i) : names_.at(i);
  }

  /// [x_i, x_j] for i < j.
  const SparseVec& ordered_bracket(std::size_t i, std::size_t j) const {
    return brackets_[pair_index(dim_, i, j)];
  }
  SparseVec basis_bracket(std::size_t i, std::size_t j) const {
    if (i == j) return {};
    if (i < j) return ordered_bracket(i, j);
    return scaled(f_, f_.neg(1), ordered_bracket(j, i));
  }
  const SparseVec& basis_power(std::size_t i) const { return pmap_.at(i); }
  /// Indices j with [x_i, x_j] != 0.
  const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& nonzero_pairs() const { return nonzero_pairs_; }

  /// Calls fn(k, c) for each term c*x_k of [x_i, x_j].
  template <class Fn>
  void for_each_bracket_term(std::size_t i, std::size_t j, Fn&& fn) const {
    if (i == j) return;
    if (i < j) {
      for (const auto& t : ordered_bracket(i, j)) fn(t.index, t.value);
    } else {
      for (const auto& t : ordered_bracket(j, i)) fn(t.index, f_.neg(t.value));
    }
  }

  std::vector<StructureConstant> structure_constants() const {
    std::vector<StructureConstant> out;
    for (auto [i, j] : nonzero_pairs_)
      for (const auto& t : ordered_bracket(i, j)) out.push_back({i, j, t.index, t.value});
    return out;
  }
  std::vector<PowerEntry> power_entries() const {
    std::vector<PowerEntry> out;
    for (std::uint32_t i = 0; i < dim_; ++i)
      for (const auto& t : pmap_[i]) out.push_back({i, t.index, t.value});
    return out;
  }

  LieAlgebra relabeled(std::string label, std::vector<std::string> names = {}) const {
    LieAlgebra copy = *this;
    if (!names.empty() && names.size() != dim_) throw std::invalid_argument("basis name count mismatch");
    copy.label_ = std::move(label);
    if (!names.empty()) copy.names_ = std::move(names);
    return copy;
  }

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.f_ == b.f_ && a.dim_ == b.dim_ && a.brackets_ == b.brackets_ && a.pmap_ == b.pmap_;
  }

 private:
  static void check_canonical(const Field& f, std::size_t dim, const SparseVec& v) {
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (v[n].index >= dim) throw std::out_of_range("table entry index out of range");
      if (v[n].value == 0 || v[n].value >= f.p()) throw std::invalid_argument("table entry not reduced");
      if (n > 0 && v[n - 1].index >= v[n].index) throw std::invalid_argument("table entries not sorted");
    }
  }

  void index() {
    neighbors_.assign(dim_, {});
    nonzero_pairs_.clear();
    for (std::uint32_t i = 0; i < dim_; ++i)
      for (std::uint32_t j = i + 1; j < dim_; ++j)
        if (!ordered_bracket(i, j).empty()) {
          nonzero_pairs_.emplace_back(i, j);
          neighbors_[i].push_back(j);
          neighbors_[j].push_back(i);
        }
    for (auto& n : neighbors_) std::sort(n.begin(), n.end());
  }

  Field f_;
  std::size_t dim_;
  std::string label_;
  std::vector<std::string> names_;
  std::vector<SparseVec> brackets_;
  std::vector<SparseVec> pmap_;
  std::vector<std::vector<std::uint32_t>> neighbors_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> nonzero_pairs_;
};

// ---------------------------------------------------------------------------
// Bracket evaluation

inline void check_element(const LieAlgebra& alg, std::span<const Scalar> v) {
  if (v.size() != alg.dim())
    throw std::invalid_argument("element has length " + std::to_string(v.size()) + ", algebra dimension is " +
                                std::to_string(alg.dim()));
}

/// Bilinear extension of the structure constants.
inline Vec bracket(const LieAlgebra& alg, std::span<const Scalar> u, std::span<const Scalar> v) {
  check_element(alg, u);
  check_element(alg, v);
  const Field& f = alg.field();
  Vec out(alg.dim(), 0);
  for (auto [i, j] : alg.nonzero_pairs()) {
    Scalar c = f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i]));
    if (c == 0) continue;
    for (const auto& t : alg.ordered_bracket(i, j)) out[t.index] = f.add(out[t.index], f.mul(c, t.value));
  }
  return out;
}

inline SparseVec bracket(const LieAlgebra& alg, const SparseVec& u, const SparseVec& v) {
  const Field& f = alg.field();
  Accumulator acc(f, alg.dim());
  for (const auto& a : u)
    for (const auto& b : v) {
      Scalar c = f.mul(a.value, b.value);
      alg.for_each_bracket_term(a.index, b.index, [&](std::uint32_t k, Scalar s) { acc.add(k, f.mul(c, s)); });
    }
  return acc.take();
}

/// [x_i, v] for a basis vector x_i.
inline Vec ad_basis_apply(const LieAlgebra& alg, std::size_t i, std::span<const Scalar> v, Scalar scale = 1) {
  const Field& f = alg.field();
  Vec out(alg.dim(), 0);
  if (scale == 0) return out;
  for (auto j : alg.neighbors(i)) {
    if (v[j] == 0) continue;
    Scalar c = f.mul(scale, v[j]);
    alg.for_each_bracket_term(i, j, [&](std::uint32_t k, Scalar s) { out[k] = f.add(out[k], f.mul(c, s)); });
  }
  return out;
}

inline SparseVec ad_basis_apply(const LieAlgebra& alg, std::size_t i, const SparseVec& v, Accumulator& acc) {
  const Field& f = alg.field();
  for (const auto& t : v)
    alg.for_each_bracket_term(i, t.index, [&](std::uint32_t k, Scalar s) { acc.add(k, f.mul(t.value, s)); });
  return acc.take();
}

/// Dense matrix of ad v: column j holds [v, x_j].
inline DenseMatrix ad_dense(const LieAlgebra& alg, std::span<const Scalar> v) {
  check_element(alg, v);
  const Field& f = alg.field();
  DenseMatrix m(f, alg.dim(), alg.dim());
  for (auto [a, b] : alg.nonzero_pairs()) {
    Scalar va = v[a], vb = v[b];
    if (va == 0 && vb == 0) continue;
    for (const auto& t : alg.ordered_bracket(a, b)) {
      if (va) m(t.index, b) = f.add(m(t.index, b), f.mul(va, t.value));
      if (vb) m(t.index, a) = f.sub(m(t.index, a), f.mul(vb, t.value));
    }
  }
  return m;
}

inline void add_ad_basis(const LieAlgebra& alg, DenseMatrix& m, std::size_t i, Scalar scale) {
  const Field& f = alg.field();
  for (auto j : alg.neighbors(i))
    alg.for_each_bracket_term(i, j, [&](std::uint32_t k, Scalar s) { m(k, j) = f.add(m(k, j), f.mul(scale, s)); });
}

/// ad v as a d x d sparse matrix (column j = [v, x_j]).
inline SparseMatrix ad_matrix(const LieAlgebra& alg, std::span<const Scalar> v) {
  DenseMatrix d = ad_dense(alg, v);
  std::vector<Triplet> entries;
  for (std::uint32_t r = 0; r < d.rows(); ++r)
    for (std::uint32_t c = 0; c < d.cols(); ++c)
      if (d(r, c)) entries.push_back({r, c, d(r, c)});
  return SparseMatrix::from_triplets(alg.field(), alg.dim(), alg.dim(), std::move(entries));
}

/// Left-nested [[..[g, h], h..], h] with k copies of h.
inline Vec iterated_bracket(const LieAlgebra& alg, std::span<const Scalar> g, std::span<const Scalar> h,
                            std::size_t k) {
  check_element(alg, g);
  check_element(alg, h);
  Vec cur(g.begin(), g.end());
  if (k == 0) return cur;
  DenseMatrix adh = ad_dense(alg, h);
  const Field& f = alg.field();
  for (std::size_t n = 0; n < k; ++n) {
    cur = adh.apply(cur);  // [h, w]
    for (auto& s : cur) s = f.neg(s);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Jacobson expansion

/// Coefficients c_0..c_steps of ad(t*x + y)^steps (start) as a polynomial in
/// t, given the actions of ad x and ad y.
template <class ApplyX, class ApplyY>
std::vector<Vec> ad_polynomial(const Field& f, ApplyX&& ad_x, ApplyY&& ad_y, Vec start, unsigned steps) {
  std::vector<Vec> poly{std::move(start)};
  const std::size_t n = poly.front().size();
  for (unsigned s = 0; s < steps; ++s) {
    std::vector<Vec> next(poly.size() + 1, Vec(n, 0));
    for (std::size_t m = 0; m < poly.size(); ++m) {
      if (is_zero(poly[m])) continue;
      Vec xs = ad_x(poly[m]);
      Vec ys = ad_y(poly[m]);
      for (std::size_t k = 0; k < n; ++k) {
        next[m + 1][k] = f.add(next[m + 1][k], xs[k]);
        next[m][k] = f.add(next[m][k], ys[k]);
      }
    }
    poly = std::move(next);
  }
  return poly;
}

/// s_1..s_{p-1} with i*s_i the coefficient of t^{i-1} in (ad(t x + y))^{p-1}(x).
inline std::vector<Vec> jacobson_terms(const LieAlgebra& alg, std::span<const Scalar> x, std::span<const Scalar> y) {
  check_element(alg, x);
  check_element(alg, y);
  const Field& f = alg.field();
  const unsigned p = f.p();
  DenseMatrix ax = ad_dense(alg, x), ay = ad_dense(alg, y);
  auto poly = ad_polynomial(
      f, [&](const Vec& v) { return ax.apply(v); }, [&](const Vec& v) { return ay.apply(v); },
      Vec(x.begin(), x.end()), p - 1);
  std::vector<Vec> s;
  for (unsigned i = 1; i < p; ++i) {
    Vec term = poly[i - 1];
    Scalar inv = f.inv(i);
    for (auto& c : term) c = f.mul(c, inv);
    s.push_back(std::move(term));
  }
  return s;
}

inline Vec jacobson_sum(const LieAlgebra& alg, std::span<const Scalar> x, std::span<const Scalar> y) {
  const Field& f = alg.field();
  Vec out(alg.dim(), 0);
  for (const auto& s : jacobson_terms(alg, x, y))
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = f.add(out[k], s[k]);
  return out;
}

/// v^[p] from the basis p-map: the support of v is folded in `order` (default
/// ascending) using (u + a x_j)^[p] = u^[p] + a^p x_j^[p] + sum_i s_i(u, a x_j).
inline Vec p_power(const LieAlgebra& alg, std::span<const Scalar> v, std::span<const std::uint32_t> order = {}) {
  check_element(alg, v);
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  const unsigned p = f.p();
  std::vector<std::uint32_t> seq(order.begin(), order.end());
  if (seq.empty()) {
    seq.resize(d);
    std::iota(seq.begin(), seq.end(), 0u);
  } else if (seq.size() != d) {
    throw std::invalid_argument("fold order must be a permutation of the basis");
  }
  Vec acc(d, 0), result(d, 0);
  DenseMatrix ad_acc(f, d, d);
  bool acc_zero = true;
  std::vector<Scalar> inv(p, 0);
  for (unsigned i = 1; i < p; ++i) inv[i] = f.inv(i);
  for (auto j : seq) {
    Scalar a = v[j];
    if (a == 0) continue;
    if (!acc_zero) {
      auto poly = ad_polynomial(
          f, [&](const Vec& w) { return ad_acc.apply(w); },
          [&](const Vec& w) { return ad_basis_apply(alg, j, w, a); }, acc, p - 1);
      for (unsigned i = 1; i < p; ++i)
        for (std::size_t k = 0; k < d; ++k)
          if (poly[i - 1][k]) result[k] = f.add(result[k], f.mul(inv[i], poly[i - 1][k]));
    }
    Scalar ap = f.pow(a, p);
    for (const auto& t : alg.basis_power(j)) result[t.index] = f.add(result[t.index], f.mul(ap, t.value));
    acc[j] = f.add(acc[j], a);
    add_ad_basis(alg, ad_acc, j, a);
    acc_zero = false;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Gates

struct CheckReport {
  std::string check;
  bool passed = true;
  std::string axiom;    // failing axiom, empty on success
  std::string witness;  // human readable description of the failure
  std::vector<std::uint32_t> indices;
  Vec residual;
  std::uint64_t seed = 0;

  explicit operator bool() const noexcept { return passed; }
  void fail(std::string ax, std::string wit) {
    passed = false;
    axiom = std::move(ax);
    witness = std::move(wit);
  }
};

inline std::string format_vec(const Field& f, std::span<const Scalar> v) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    if (!first) os << ", ";
    os << f.to_signed(v[i]) << "*x" << i;
    first = false;
  }
  os << ']';
  return os.str();
}

/// Cyclic Jacobi sum over every basis triple i < j < k; stops at the first
/// violation and reports the triple and the residual.
inline CheckReport jacobi_check(const LieAlgebra& alg) {
  CheckReport rep{.check = "jacobi"};
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  Accumulator acc(f, d);
  auto add_nested = [&](std::size_t a, std::size_t b, std::size_t c) {
    // [[x_a, x_b], x_c]
    alg.for_each_bracket_term(a, b, [&](std::uint32_t l, Scalar s) {
      alg.for_each_bracket_term(l, c, [&](std::uint32_t m, Scalar r) { acc.add(m, f.mul(s, r)); });
    });
  };
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = i + 1; j < d; ++j)
      for (std::uint32_t k = j + 1; k < d; ++k) {
        add_nested(i, j, k);
        add_nested(j, k, i);
        add_nested(k, i, j);
        SparseVec res = acc.take();
        if (!res.empty()) {
          rep.indices = {i, j, k};
          rep.residual = to_dense(res, d);
          rep.fail("jacobi", "triple (" + std::to_string(i) + ", " + std::to_string(j) + ", " + std::to_string(k) +
                                 ") residual " + format_vec(f, rep.residual));
          return rep;
        }
      }
  return rep;
}

inline Vec random_element(const Field& f, std::size_t d, std::mt19937_64& rng, bool nonzero = true) {
  std::uniform_int_distribution<Scalar> dist(0, f.p() - 1);
  Vec v(d);
  do {
    for (auto& s : v) s = dist(rng);
  } while (nonzero && d > 0 && is_zero(v));
  return v;
}

inline Vec add(const Field& f, std::span<const Scalar> a, std::span<const Scalar> b) {
  Vec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = f.add(a[k], b[k]);
  return out;
}
inline Vec scale(const Field& f, Scalar s, std::span<const Scalar> a) {
  Vec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = f.mul(s, a[k]);
  return out;
}

/// (a) ad(x_i^[p]) = (ad x_i)^p on every basis vector; (b) Jacobson
/// additivity on random pairs; (c) ad((a v)^[p]) = (ad(a v))^p and
/// (a v)^[p] = a^p v^[p] on random samples.
inline CheckReport restrictedness_check(const LieAlgebra& alg, std::size_t samples, std::uint64_t seed = 1) {
  CheckReport rep{.check = "restricted", .seed = seed};
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  const unsigned p = f.p();
  Accumulator acc(f, d);

  for (std::uint32_t i = 0; i < d; ++i) {
    const SparseVec& xp = alg.basis_power(i);
    for (std::uint32_t k = 0; k < d; ++k) {
      SparseVec cur = unit_sparse(k);
      for (unsigned n = 0; n < p && !cur.empty(); ++n) cur = ad_basis_apply(alg, i, cur, acc);
      SparseVec rhs;
      for (const auto& t : xp) acc.add(ad_basis_apply(alg, t.index, unit_sparse(k), acc), t.value);
      rhs = acc.take();
      if (cur != rhs) {
        rep.indices = {i, k};
        rep.fail("ad(x^[p]) = (ad x)^p", "basis x" + std::to_string(i) + " applied to x" + std::to_string(k));
        return rep;
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Scalar> scalar_dist(1, p - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Vec u = random_element(f, d, rng), w = random_element(f, d, rng);
    Vec lhs = p_power(alg, add(f, u, w));
    Vec rhs = add(f, add(f, p_power(alg, u), p_power(alg, w)), jacobson_sum(alg, u, w));
    if (lhs != rhs) {
      rep.residual = lhs;
      rep.fail("jacobson additivity", "sample " + std::to_string(s) + ": u=" + format_vec(f, u) + " w=" + format_vec(f, w));
      return rep;
    }
  }

  for (std::size_t s = 0; s < samples; ++s) {
    Scalar a = scalar_dist(rng);
    Vec v = random_element(f, d, rng);
    Vec av = scale(f, a, v);
    Vec q = p_power(alg, av);
    if (q != scale(f, f.pow(a, p), p_power(alg, v))) {
      rep.fail("p-semilinearity", "sample " + std::to_string(s) + ": v=" + format_vec(f, v));
      return rep;
    }
    DenseMatrix adv = ad_dense(alg, av), adq = ad_dense(alg, q);
    std::vector<Vec> probes;
    if (d <= 64) {
      for (std::size_t k = 0; k < d; ++k) probes.push_back(unit_vector(d, k));
    } else {
      for (int k = 0; k < 8; ++k) probes.push_back(random_element(f, d, rng));
    }
    for (const auto& z : probes) {
      Vec cur = z;
      for (unsigned n = 0; n < p; ++n) cur = adv.apply(cur);
      if (cur != adq.apply(z)) {
        rep.fail("ad((av)^[p]) = (ad av)^p", "sample " + std::to_string(s) + ": v=" + format_vec(f, v));
        return rep;
      }
    }
  }
  return rep;
}

/// Echelonized span of [u, v] over pairs of the given basis. With
/// check_closed, throws when some bracket leaves the span of the basis.
template <class Bracket>
std::vector<SparseVec> derived_span(const Field& f, std::size_t width, std::span<const SparseVec> basis,
                                    Bracket&& br, bool check_closed = true) {
  Echelon span(f, width), derived(f, width);
  if (check_closed)
    for (const auto& b : basis) span.insert(b);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      SparseVec c = br(basis[a], basis[b]);
      if (c.empty()) continue;
      if (check_closed && !span.contains(c))
        throw std::invalid_argument("subspace is not closed under the bracket (basis pair " + std::to_string(a) +
                                    ", " + std::to_string(b) + ")");
      derived.insert(c);
    }
  return derived.rref();
}

/// [S, S] for a bracket-closed subspace S, as an RREF basis.
inline std::vector<Vec> derived_subalgebra(const LieAlgebra& alg, std::span<const Vec> subspace) {
  std::vector<SparseVec> basis;
  for (const auto& v : subspace) {
    check_element(alg, v);
    basis.push_back(to_sparse(v));
  }
  auto rows = derived_span(alg.field(), alg.dim(), basis,
                           [&](const SparseVec& a, const SparseVec& b) { return bracket(alg, a, b); });
  std::vector<Vec> out;
  for (const auto& r : rows) out.push_back(to_dense(r, alg.dim()));
  return out;
}

/// Smallest subspace containing `seed_vec` and stable under ad x_i for every
/// basis x_i, i.e. the ideal it generates.
inline Echelon generated_ideal(const LieAlgebra& alg, std::span<const Scalar> seed_vec) {
  const std::size_t d = alg.dim();
  Echelon ech(alg.field(), d);
  std::vector<Vec> queue;
  if (ech.insert(seed_vec)) queue.emplace_back(seed_vec.begin(), seed_vec.end());
  while (!queue.empty() && !ech.full()) {
    Vec u = std::move(queue.back());
    queue.pop_back();
    for (std::size_t i = 0; i < d && !ech.full(); ++i) {
      Vec w = ad_basis_apply(alg, i, u);
      if (ech.insert(w)) queue.push_back(std::move(w));
    }
  }
  return ech;
}

struct SimplicityReport {
  enum class Verdict { Simple, NotSimple };
  Verdict verdict = Verdict::Simple;
  bool perfect = true;            // [g, g] = g
  std::size_t derived_dim = 0;
  std::size_t ideal_dim = 0;      // dimension of the proper ideal found, if any
  std::string witness;
  std::uint64_t seed = 0;

  bool simple() const noexcept { return verdict == Verdict::Simple; }
};

/// Randomized simplicity gate: [g, g] = g, then the ideal generated by each of
/// `trials` random nonzero elements and `trials` random basis vectors must be
/// the whole algebra. A proper ideal found this way is a certificate of
/// non-simplicity; passing is probabilistic evidence.
inline SimplicityReport simplicity_check(const LieAlgebra& alg, std::size_t trials, std::uint64_t seed = 1) {
  const std::size_t d = alg.dim();
  if (d < 2) throw std::invalid_argument("simplicity check needs dim >= 2");
  const Field& f = alg.field();
  SimplicityReport rep{.seed = seed};

  Echelon derived(f, d);
  for (auto [i, j] : alg.nonzero_pairs()) {
    derived.insert(alg.ordered_bracket(i, j));
    if (derived.full()) break;
  }
  rep.derived_dim = derived.rank();
  if (!derived.full()) {
    rep.perfect = false;
    rep.verdict = SimplicityReport::Verdict::NotSimple;
    rep.ideal_dim = derived.rank();
    rep.witness = "[g,g] has dimension " + std::to_string(derived.rank());
    return rep;
  }

  std::mt19937_64 rng(seed);
  std::vector<Vec> generators;
  for (std::size_t t = 0; t < trials; ++t) generators.push_back(random_element(f, d, rng));
  std::vector<std::uint32_t> basis(d);
  std::iota(basis.begin(), basis.end(), 0u);
  std::shuffle(basis.begin(), basis.end(), rng);
  for (std::size_t t = 0; t < std::min(trials, d); ++t) generators.push_back(unit_vector(d, basis[t]));

  for (const auto& g : generators) {
    Echelon ideal = generated_ideal(alg, g);
    if (!ideal.full()) {
      rep.verdict = SimplicityReport::Verdict::NotSimple;
      rep.ideal_dim = ideal.rank();
      rep.witness = "element " + format_vec(f, g) + " generates an ideal of dimension " + std::to_string(ideal.rank());
      return rep;
    }
  }
  return rep;
}

/// g / span(z) for a central element z whose p-power lies in span(z). The
/// basis vector with the last nonzero coordinate of z is dropped; the others
/// keep their order and names.
inline LieAlgebra quotient_by_central(const LieAlgebra& alg, std::span<const Scalar> z, std::string label = {}) {
  check_element(alg, z);
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  if (is_zero(z)) throw std::invalid_argument("cannot quotient by the zero element");
  for (std::size_t i = 0; i < d; ++i)
    if (!is_zero(ad_basis_apply(alg, i, z))) throw std::invalid_argument("element is not central");
  std::size_t q = d;
  for (std::size_t k = d; k-- > 0;)
    if (z[k]) {
      q = k;
      break;
    }
  const Scalar zq_inv = f.inv(z[q]);
  {
    Vec zp = p_power(alg, z);
    Scalar c = f.mul(zp[q], zq_inv);
    for (std::size_t k = 0; k < d; ++k)
      if (zp[k] != f.mul(c, z[k])) throw std::invalid_argument("span of the central element is not p-closed");
  }
  std::vector<std::uint32_t> new_index(d, UINT32_MAX);
  for (std::size_t k = 0, n = 0; k < d; ++k)
    if (k != q) new_index[k] = static_cast<std::uint32_t>(n++);
  auto project = [&](const SparseVec& v) {
    Scalar c = f.mul(lookup(v, static_cast<std::uint32_t>(q)), zq_inv);
    Vec dense = to_dense(v, d);
    if (c)
      for (std::size_t k = 0; k < d; ++k) dense[k] = f.sub_mul(dense[k], c, z[k]);
    SparseVec out;
    for (std::size_t k = 0; k < d; ++k)
      if (k != q && dense[k]) out.push_back({new_index[k], dense[k]});
    return out;
  };
  const std::size_t nd = d - 1;
  std::vector<SparseVec> brackets(pair_count(nd)), pmap(nd);
  for (std::size_t i = 0; i < d; ++i) {
    if (i == q) continue;
    pmap[new_index[i]] = project(alg.basis_power(i));
    for (std::size_t j = i + 1; j < d; ++j) {
      if (j == q) continue;
      brackets[pair_index(nd, new_index[i], new_index[j])] = project(alg.ordered_bracket(i, j));
    }
  }
  std::vector<std::string> names;
  if (!alg.basis_names().empty())
    for (std::size_t k = 0; k < d; ++k)
      if (k != q) names.push_back(alg.basis_names()[k]);
  return LieAlgebra::from_tables(f, nd, std::move(brackets), std::move(pmap), std::move(label), std::move(names));
}

}  // namespace rlie

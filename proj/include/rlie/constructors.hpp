#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlie/algebra.hpp"
#include "rlie/field.hpp"
#include "rlie/linalg.hpp"
#include "rlie/sparse.hpp"

namespace rlie {

class ResourceGuardError : public std::runtime_error {
 public:
  ResourceGuardError(const std::string& what, std::size_t requested, std::size_t limit)
      : std::runtime_error(what + ": " + std::to_string(requested) + " exceeds the limit " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}
  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t requested_, limit_;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConstructOptions {
  std::size_t max_dim = 2000;
};

inline std::size_t ipow(std::size_t b, unsigned e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

inline void guard_dim(const std::string& what, std::size_t dim, const ConstructOptions& opt) {
  if (dim > opt.max_dim) throw ResourceGuardError(what + " dimension", dim, opt.max_dim);
}

/// Monomial basis of O(n) = F[x_1..x_n]/(x_1^p, ..., x_n^p) in lexicographic
/// order of the exponent sequence; x_1 is the most significant digit.
class Monomials {
 public:
  Monomials(unsigned n, unsigned p) : n_(n), p_(p), size_(ipow(p, n)), stride_(n), exps_(size_ * n) {
    for (unsigned i = 0; i < n; ++i) stride_[i] = static_cast<std::uint32_t>(ipow(p, n - 1 - i));
    for (std::uint32_t m = 0; m < size_; ++m)
      for (unsigned i = 0; i < n; ++i) exps_[m * n + i] = static_cast<std::uint8_t>((m / stride_[i]) % p);
  }

  unsigned n() const noexcept { return n_; }
  unsigned p() const noexcept { return p_; }
  std::size_t size() const noexcept { return size_; }
  unsigned exponent(std::uint32_t m, unsigned i) const { return exps_[m * n_ + i]; }
  std::uint32_t variable(unsigned i) const { return stride_[i]; }  // x_{i+1}
  std::uint32_t stride(unsigned i) const { return stride_[i]; }

  std::optional<std::uint32_t> product(std::uint32_t a, std::uint32_t b) const {
    for (unsigned i = 0; i < n_; ++i)
      if (exponent(a, i) + exponent(b, i) >= p_) return std::nullopt;
    return a + b;
  }

  unsigned degree(std::uint32_t m) const {
    unsigned d = 0;
    for (unsigned i = 0; i < n_; ++i) d += exponent(m, i);
    return d;
  }

  std::string name(std::uint32_t m) const {
    std::string s = "(";
    for (unsigned i = 0; i < n_; ++i) s += (i ? "," : "") + std::to_string(exponent(m, i));
    return s + ")";
  }

 private:
  unsigned n_, p_;
  std::size_t size_;
  std::vector<std::uint32_t> stride_;
  std::vector<std::uint8_t> exps_;
};

/// W(n) = Der O(n) with basis x^a d_i ordered by (direction, monomial).
/// Polynomials and derivations are sparse vectors over monomial and W(n)
/// basis indices respectively.
class AmbientWitt {
 public:
  AmbientWitt(const Field& f, unsigned n) : f_(f), mon_(n, f.p()) {}

  const Field& field() const noexcept { return f_; }
  const Monomials& monomials() const noexcept { return mon_; }
  unsigned n() const noexcept { return mon_.n(); }
  std::size_t dim() const noexcept { return mon_.n() * mon_.size(); }
  std::uint32_t index(unsigned dir, std::uint32_t mono) const {
    return static_cast<std::uint32_t>(dir * mon_.size() + mono);
  }
  unsigned dir(std::uint32_t idx) const { return static_cast<unsigned>(idx / mon_.size()); }
  std::uint32_t mono(std::uint32_t idx) const { return static_cast<std::uint32_t>(idx % mon_.size()); }

  std::string basis_name(std::uint32_t idx) const {
    return "x" + mon_.name(mono(idx)) + "d" + std::to_string(dir(idx) + 1);
  }

  /// [x^a d_i, x^b d_j] = x^a d_i(x^b) d_j - x^b d_j(x^a) d_i, scaled.
  void bracket_basis(std::uint32_t u, std::uint32_t v, Scalar scale, Accumulator& acc) const {
    const unsigned i = dir(u), j = dir(v);
    const std::uint32_t a = mono(u), b = mono(v);
    if (unsigned bi = mon_.exponent(b, i)) {
      if (auto m = mon_.product(a, b - mon_.stride(i))) acc.add(index(j, *m), f_.mul(scale, bi));
    }
    if (unsigned aj = mon_.exponent(a, j)) {
      if (auto m = mon_.product(b, a - mon_.stride(j))) acc.add(index(i, *m), f_.neg(f_.mul(scale, aj)));
    }
  }

  SparseVec bracket(const SparseVec& x, const SparseVec& y, Accumulator& acc) const {
    for (const auto& s : x)
      for (const auto& t : y) bracket_basis(s.index, t.index, f_.mul(s.value, t.value), acc);
    return acc.take();
  }
  SparseVec bracket(const SparseVec& x, const SparseVec& y) const {
    Accumulator acc(f_, dim());
    return bracket(x, y, acc);
  }

  /// D(g) for a derivation D and a polynomial g.
  SparseVec apply(const SparseVec& D, const SparseVec& g, Accumulator& poly_acc) const {
    for (const auto& s : D) {
      const unsigned i = dir(s.index);
      const std::uint32_t a = mono(s.index);
      for (const auto& t : g) {
        unsigned bi = mon_.exponent(t.index, i);
        if (!bi) continue;
        if (auto m = mon_.product(a, t.index - mon_.stride(i))) poly_acc.add(*m, f_.mul(f_.mul(s.value, t.value), bi));
      }
    }
    return poly_acc.take();
  }

  SparseVec partial(unsigned i, const SparseVec& g) const {
    SparseVec out;
    for (const auto& t : g)
      if (unsigned e = mon_.exponent(t.index, i)) {
        Scalar c = f_.mul(t.value, e);
        if (c) out.push_back({t.index - mon_.stride(i), c});
      }
    return out;
  }

  /// g * h in O(n).
  SparseVec multiply(const SparseVec& g, const SparseVec& h) const {
    Accumulator acc(f_, mon_.size());
    for (const auto& s : g)
      for (const auto& t : h)
        if (auto m = mon_.product(s.index, t.index)) acc.add(*m, f_.mul(s.value, t.value));
    return acc.take();
  }

  /// sum_i comps[i] d_i
  SparseVec field_from_components(const std::vector<SparseVec>& comps) const {
    SparseVec out;
    for (unsigned i = 0; i < comps.size(); ++i)
      for (const auto& t : comps[i]) out.push_back({index(i, t.index), t.value});
    return out;  // directions ascending, monomials ascending within
  }

  /// D^p, itself a derivation, read off from D^p(x_k) for each coordinate.
  SparseVec power(const SparseVec& D) const {
    Accumulator poly_acc(f_, mon_.size());
    std::vector<SparseVec> comps(n());
    for (unsigned k = 0; k < n(); ++k) {
      SparseVec g = unit_sparse(mon_.variable(k));
      for (unsigned s = 0; s < f_.p() && !g.empty(); ++s) g = apply(D, g, poly_acc);
      comps[k] = std::move(g);
    }
    return field_from_components(comps);
  }

 private:
  Field f_;
  Monomials mon_;
};

/// Structure constants of the subalgebra spanned by an RREF basis of
/// derivations. Brackets and p-powers are computed in W(n) and expressed in the
/// basis; leaving the span is a ConstructionError.
inline LieAlgebra realize_subalgebra(const AmbientWitt& W, const std::vector<SparseVec>& basis, std::string label,
                                     std::vector<std::string> names = {}) {
  const Field& f = W.field();
  const std::size_t d = basis.size();
  std::vector<std::int32_t> row_of(W.dim(), -1);
  for (std::size_t r = 0; r < d; ++r) {
    if (basis[r].empty() || basis[r].front().value != 1) throw std::invalid_argument("basis is not in RREF");
    row_of[basis[r].front().index] = static_cast<std::int32_t>(r);
  }
  Accumulator acc(f, W.dim());
  auto express = [&](const SparseVec& v, const char* what) {
    SparseVec coords;
    for (const auto& t : v)
      if (row_of[t.index] >= 0) coords.push_back({static_cast<std::uint32_t>(row_of[t.index]), t.value});
    for (const auto& c : coords) acc.add(basis[c.index], c.value);
    if (acc.take() != v) throw ConstructionError(std::string(what) + " leaves the subalgebra " + label);
    return coords;
  };
  std::vector<SparseVec> brackets(pair_count(d)), pmap(d);
  for (std::size_t i = 0; i < d; ++i) {
    pmap[i] = express(W.power(basis[i]), "p-power");
    for (std::size_t j = i + 1; j < d; ++j)
      brackets[pair_index(d, i, j)] = express(W.bracket(basis[i], basis[j], acc), "bracket");
  }
  return LieAlgebra::from_tables(f, d, std::move(brackets), std::move(pmap), std::move(label), std::move(names));
}

/// W(n). For n = 1 the basis is e_{-1}..e_{p-2} with e_j = x^{j+1} d.
inline LieAlgebra construct_witt(unsigned n, const Field& f, const ConstructOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("W(n) needs n >= 1");
  const std::size_t d = n * ipow(f.p(), n);
  guard_dim("W(" + std::to_string(n) + ")", d, opt);
  AmbientWitt W(f, n);
  std::vector<SparseVec> basis;
  std::vector<std::string> names;
  for (std::uint32_t k = 0; k < d; ++k) {
    basis.push_back(unit_sparse(k));
    names.push_back(n == 1 ? "e" + std::to_string(static_cast<int>(k) - 1) : W.basis_name(k));
  }
  return realize_subalgebra(W, basis, "W(" + std::to_string(n) + ")", std::move(names));
}

inline std::vector<SparseVec> derived_in_ambient(const AmbientWitt& W, const std::vector<SparseVec>& basis) {
  Accumulator acc(W.field(), W.dim());
  return derived_span(W.field(), W.dim(), std::span<const SparseVec>(basis),
                      [&](const SparseVec& a, const SparseVec& b) { return W.bracket(a, b, acc); });
}

inline std::vector<SparseVec> echelon_span(const Field& f, std::size_t width, const std::vector<SparseVec>& vecs) {
  Echelon e(f, width);
  for (const auto& v : vecs) e.insert(v);
  return e.rref();
}

/// S(n): derived subalgebra of the divergence-free vector fields.
inline LieAlgebra construct_special(unsigned n, const Field& f, const ConstructOptions& opt = {}) {
  if (n < 3) throw std::invalid_argument("S(n) needs n >= 3");
  const std::size_t P = ipow(f.p(), n);
  const std::size_t expected = (n - 1) * (P - 1);
  const std::string label = "S(" + std::to_string(n) + ")";
  guard_dim(label, expected, opt);
  AmbientWitt W(f, n);
  const auto& mon = W.monomials();
  std::vector<SparseVec> div_rows(P);
  for (std::uint32_t c = 0; c < W.dim(); ++c) {
    unsigned i = W.dir(c);
    std::uint32_t a = W.mono(c);
    if (unsigned e = mon.exponent(a, i)) div_rows[a - mon.stride(i)].push_back({c, static_cast<Scalar>(e)});
  }
  auto kernel = kernel_basis_sparse(f, W.dim(), div_rows);
  auto basis = echelon_span(f, W.dim(), kernel);
  auto derived = derived_in_ambient(W, basis);
  if (derived.size() != expected)
    throw ConstructionError(label + " has dimension " + std::to_string(derived.size()) + ", expected " +
                            std::to_string(expected));
  return realize_subalgebra(W, derived, label);
}

/// H(n), n = 2r: iterated derived algebra of the span of
/// D_H(f) = sum_i (d_i f d_{i+r} - d_{i+r} f d_i).
inline LieAlgebra construct_hamiltonian(unsigned n, const Field& f, const ConstructOptions& opt = {}) {
  if (n < 2 || n % 2) throw std::invalid_argument("H(n) needs an even n >= 2");
  const std::size_t P = ipow(f.p(), n);
  const std::size_t expected = P - 2;
  const std::string label = "H(" + std::to_string(n) + ")";
  guard_dim(label, expected, opt);
  AmbientWitt W(f, n);
  const unsigned r = n / 2;
  std::vector<SparseVec> images;
  for (std::uint32_t m = 0; m < P; ++m) {
    std::vector<SparseVec> comps(n);
    SparseVec g = unit_sparse(m);
    for (unsigned i = 0; i < r; ++i) {
      comps[i + r] = W.partial(i, g);
      comps[i] = scaled(f, f.neg(1), W.partial(i + r, g));
    }
    images.push_back(W.field_from_components(comps));
  }
  auto basis = echelon_span(f, W.dim(), images);
  for (;;) {
    auto derived = derived_in_ambient(W, basis);
    if (derived.size() == basis.size()) break;
    basis = std::move(derived);
  }
  if (basis.size() != expected)
    throw ConstructionError(label + " has dimension " + std::to_string(basis.size()) + ", expected " +
                            std::to_string(expected));
  return realize_subalgebra(W, basis, label);
}

/// Contact vector field of a generating function f in coordinates
/// q_1..q_r, p_1..p_r, t (form dt - sum p_i dq_i).
inline SparseVec contact_field(const AmbientWitt& W, const SparseVec& gen) {
  const Field& f = W.field();
  const unsigned n = W.n(), r = (n - 1) / 2, t = n - 1;
  std::vector<SparseVec> comps(n);
  SparseVec ft = W.partial(t, gen);
  SparseVec last = gen;
  for (unsigned i = 0; i < r; ++i) {
    SparseVec fp = W.partial(r + i, gen);
    SparseVec pi = unit_sparse(W.monomials().variable(r + i));
    comps[i] = scaled(f, f.neg(1), fp);
    comps[r + i] = combine(f, 1, W.partial(i, gen), 1, W.multiply(pi, ft));
    last = combine(f, 1, last, f.neg(1), W.multiply(pi, fp));
  }
  comps[t] = std::move(last);
  return W.field_from_components(comps);
}

/// K(n), n = 2r + 1: derived algebra of the contact vector fields.
inline LieAlgebra construct_contact(unsigned n, const Field& f, const ConstructOptions& opt = {}) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("K(n) needs an odd n >= 3");
  const std::size_t P = ipow(f.p(), n);
  const std::size_t expected = (n + 3) % f.p() == 0 ? P - 1 : P;
  const std::string label = "K(" + std::to_string(n) + ")";
  guard_dim(label, expected, opt);
  AmbientWitt W(f, n);
  std::vector<SparseVec> fields;
  for (std::uint32_t m = 0; m < P; ++m) fields.push_back(contact_field(W, unit_sparse(m)));
  auto basis = echelon_span(f, W.dim(), fields);
  auto derived = derived_in_ambient(W, basis);
  if (derived.size() != expected)
    throw ConstructionError(label + " has dimension " + std::to_string(derived.size()) + ", expected " +
                            std::to_string(expected));
  return realize_subalgebra(W, derived, label);
}

namespace detail {

// Traceless m x m matrices; basis E_ij (i != j, lexicographic) then
// H_k = E_kk - E_{k+1,k+1}.
inline LieAlgebra build_sl(unsigned m, const Field& f, std::string label) {
  const std::size_t d = m * m - 1;
  const std::size_t off = m * m - m;
  std::vector<std::string> names;
  std::vector<DenseMatrix> mats;
  std::vector<std::uint32_t> off_index(m * m, 0);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) {
      if (i == j) continue;
      off_index[i * m + j] = static_cast<std::uint32_t>(mats.size());
      DenseMatrix e(f, m, m);
      e(i, j) = 1;
      mats.push_back(e);
      names.push_back(m == 2 ? (i == 0 ? "e" : "f") : "E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  for (unsigned k = 0; k + 1 < m; ++k) {
    DenseMatrix h(f, m, m);
    h(k, k) = 1;
    h(k + 1, k + 1) = f.neg(1);
    mats.push_back(h);
    names.push_back(m == 2 ? "h" : "H" + std::to_string(k + 1));
  }
  auto coords = [&](const DenseMatrix& a, const char* what) {
    Vec v(d, 0);
    Scalar partial = 0;
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j)
        if (i != j) v[off_index[i * m + j]] = a(i, j);
    for (unsigned k = 0; k < m; ++k) {
      partial = f.add(partial, a(k, k));
      if (k + 1 < m) v[off + k] = partial;
    }
    if (partial != 0) throw ConstructionError(std::string(what) + " is not traceless");
    return to_sparse(v);
  };
  std::vector<SparseVec> brackets(pair_count(d)), pmap(d);
  for (std::size_t a = 0; a < d; ++a) {
    pmap[a] = coords(mats[a].power(f.p()), "matrix p-th power");
    for (std::size_t b = a + 1; b < d; ++b) {
      DenseMatrix x = mats[a] * mats[b], y = mats[b] * mats[a];
      DenseMatrix c(f, m, m);
      for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < m; ++j) c(i, j) = f.sub(x(i, j), y(i, j));
      brackets[pair_index(d, a, b)] = coords(c, "commutator");
    }
  }
  return LieAlgebra::from_tables(f, d, std::move(brackets), std::move(pmap), std::move(label), std::move(names));
}

}  // namespace detail

inline LieAlgebra construct_sl(unsigned m, const Field& f, const ConstructOptions& opt = {}) {
  if (m < 2) throw std::invalid_argument("sl(m) needs m >= 2");
  if (m % f.p() == 0) throw std::invalid_argument("sl(m) needs p not dividing m; use psl");
  guard_dim("sl(" + std::to_string(m) + ")", m * m - 1, opt);
  return detail::build_sl(m, f, "sl(" + std::to_string(m) + ")");
}

/// sl(m) modulo the scalar matrices, p | m.
inline LieAlgebra construct_psl(unsigned m, const Field& f, const ConstructOptions& opt = {}) {
  if (m < 2 || m % f.p() != 0) throw std::invalid_argument("psl(m) needs p dividing m");
  const std::string label = "psl(" + std::to_string(m) + ")";
  guard_dim(label, m * m - 2, opt);
  LieAlgebra sl = detail::build_sl(m, f, label);
  Vec identity(sl.dim(), 0);
  const std::size_t off = m * m - m;
  for (unsigned k = 0; k + 1 < m; ++k) identity[off + k] = f.from_int(k + 1);
  return quotient_by_central(sl, identity, label);
}

/// a (+) b with the basis of a first.
inline LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, std::string label = {}) {
  if (!(a.field() == b.field())) throw std::invalid_argument("direct sum over different fields");
  const std::uint32_t s = static_cast<std::uint32_t>(a.dim());
  auto sc = a.structure_constants();
  for (auto c : b.structure_constants()) sc.push_back({c.i + s, c.j + s, c.k + s, c.coeff});
  auto pm = a.power_entries();
  for (auto e : b.power_entries()) pm.push_back({e.i + s, e.k + s, e.coeff});
  return LieAlgebra(a.field(), a.dim() + b.dim(), sc, pm, std::move(label));
}

enum class Family { Witt, Special, Hamiltonian, Contact, Sl, Psl };

inline Family parse_family(const std::string& s) {
  if (s == "witt") return Family::Witt;
  if (s == "special") return Family::Special;
  if (s == "hamiltonian") return Family::Hamiltonian;
  if (s == "contact") return Family::Contact;
  if (s == "sl") return Family::Sl;
  if (s == "psl") return Family::Psl;
  throw std::invalid_argument("unknown family '" + s + "'");
}

inline LieAlgebra construct(Family fam, unsigned n, const Field& f, const ConstructOptions& opt = {}) {
  switch (fam) {
    case Family::Witt: return construct_witt(n, f, opt);
    case Family::Special: return construct_special(n, f, opt);
    case Family::Hamiltonian: return construct_hamiltonian(n, f, opt);
    case Family::Contact: return construct_contact(n, f, opt);
    case Family::Sl: return construct_sl(n, f, opt);
    case Family::Psl: return construct_psl(n, f, opt);
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace rlie

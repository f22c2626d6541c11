#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "rlie/algebra.hpp"
#include "rlie/constructors.hpp"
#include "rlie/grading.hpp"
#include "rlie/linalg.hpp"

namespace rlie {

using OneCochain = Vec;

/// Alternating bilinear form stored on pairs i < j (sparse over pair_index).
class TwoCochain {
 public:
  TwoCochain(const Field& f, std::size_t dim) : f_(f), dim_(dim) {}

  static TwoCochain from_sparse(const Field& f, std::size_t dim, SparseVec values) {
    TwoCochain c(f, dim);
    const std::size_t np = pair_count(dim);
    for (std::size_t n = 0; n < values.size(); ++n) {
      if (values[n].index >= np) throw std::out_of_range("cochain pair index out of range");
      if (values[n].value == 0 || values[n].value >= f.p()) throw std::invalid_argument("cochain value not reduced");
      if (n && values[n - 1].index >= values[n].index) throw std::invalid_argument("cochain values not sorted");
    }
    c.values_ = std::move(values);
    return c;
  }

  /// Entries (i, j, v); i > j is stored as -v on (j, i); repeated pairs add up.
  static TwoCochain from_entries(const Field& f, std::size_t dim,
                                 const std::vector<std::tuple<std::uint32_t, std::uint32_t, Scalar>>& entries) {
    Accumulator acc(f, pair_count(dim));
    for (auto [i, j, v] : entries) {
      if (i >= dim || j >= dim) throw std::out_of_range("cochain index out of range");
      if (i == j) {
        if (v % f.p()) throw std::invalid_argument("alternating cochain has nonzero diagonal value");
        continue;
      }
      if (i < j) acc.add(static_cast<std::uint32_t>(pair_index(dim, i, j)), v % f.p());
      else acc.add(static_cast<std::uint32_t>(pair_index(dim, j, i)), f.neg(v % f.p()));
    }
    TwoCochain c(f, dim);
    c.values_ = acc.take();
    return c;
  }

  const Field& field() const noexcept { return f_; }
  std::size_t dim() const noexcept { return dim_; }
  const SparseVec& values() const noexcept { return values_; }
  bool is_zero() const noexcept { return values_.empty(); }

  Scalar at(std::size_t i, std::size_t j) const {
    if (i == j) return 0;
    if (i < j) return lookup(values_, static_cast<std::uint32_t>(pair_index(dim_, i, j)));
    return f_.neg(lookup(values_, static_cast<std::uint32_t>(pair_index(dim_, j, i))));
  }

  std::vector<std::tuple<std::uint32_t, std::uint32_t, Scalar>> entries() const {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Scalar>> out;
    for (const auto& t : values_) {
      auto [i, j] = pair_from_index(dim_, t.index);
      out.emplace_back(i, j, t.value);
    }
    return out;
  }

  /// phi(u, v) for arbitrary elements.
  Scalar evaluate(std::span<const Scalar> u, std::span<const Scalar> v) const {
    if (u.size() != dim_ || v.size() != dim_) throw std::invalid_argument("cochain argument has the wrong length");
    std::uint64_t acc = 0;
    std::size_t i = 0, row_end = dim_ - 1, row_start = 0;
    for (const auto& t : values_) {
      while (t.index >= row_end) {
        row_start = row_end;
        ++i;
        row_end += dim_ - i - 1;
      }
      std::size_t j = i + 1 + (t.index - row_start);
      Scalar w = f_.sub(f_.mul(u[i], v[j]), f_.mul(u[j], v[i]));
      acc = (acc + std::uint64_t{w} * t.value) % f_.p();
    }
    return static_cast<Scalar>(acc);
  }

  Vec dense() const { return to_dense(values_, pair_count(dim_)); }

  TwoCochain scaled_by(Scalar a) const { return from_sparse(f_, dim_, scaled(f_, a, values_)); }
  TwoCochain plus(const TwoCochain& o, Scalar a = 1) const {
    return from_sparse(f_, dim_, combine(f_, 1, values_, a, o.values_));
  }

  friend bool operator==(const TwoCochain& a, const TwoCochain& b) {
    return a.f_ == b.f_ && a.dim_ == b.dim_ && a.values_ == b.values_;
  }

 private:
  Field f_;
  std::size_t dim_;
  SparseVec values_;
};

inline void check_cochain(const LieAlgebra& alg, const TwoCochain& phi) {
  if (phi.dim() != alg.dim() || !(phi.field() == alg.field()))
    throw std::invalid_argument("cochain does not belong to this algebra");
}

/// Rows indexed by pairs (i, j), row = coordinates of [x_i, x_j].
inline SparseMatrix delta1_matrix(const LieAlgebra& alg) {
  SparseMatrix m(alg.field(), 0, alg.dim());
  const std::size_t d = alg.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) m.push_row(alg.ordered_bracket(i, j));
  return m;
}

inline TwoCochain delta1(const LieAlgebra& alg, std::span<const Scalar> psi) {
  check_element(alg, psi);
  const Field& f = alg.field();
  SparseVec out;
  for (auto [i, j] : alg.nonzero_pairs()) {
    std::uint64_t acc = 0;
    for (const auto& t : alg.ordered_bracket(i, j)) acc = (acc + std::uint64_t{t.value} * psi[t.index]) % f.p();
    if (acc) out.push_back({static_cast<std::uint32_t>(pair_index(alg.dim(), i, j)), static_cast<Scalar>(acc)});
  }
  return TwoCochain::from_sparse(f, alg.dim(), std::move(out));
}

namespace detail {

// Adds sign * phi([x_a, x_b], x_c) as column contributions; col(l, c) maps a
// pair to a column (or -1 to drop it).
template <class ColOf>
void add_delta2_term(const LieAlgebra& alg, std::uint32_t a, std::uint32_t b, std::uint32_t c, bool negate,
                     ColOf&& col, Accumulator& acc) {
  const Field& f = alg.field();
  alg.for_each_bracket_term(a, b, [&](std::uint32_t l, Scalar s) {
    if (l == c) return;
    Scalar v = negate ? f.neg(s) : s;
    if (l < c) {
      auto k = col(l, c);
      if (k >= 0) acc.add(static_cast<std::uint32_t>(k), v);
    } else {
      auto k = col(c, l);
      if (k >= 0) acc.add(static_cast<std::uint32_t>(k), f.neg(v));
    }
  });
}

template <class ColOf>
SparseVec delta2_row(const LieAlgebra& alg, std::uint32_t i, std::uint32_t j, std::uint32_t k, ColOf&& col,
                     Accumulator& acc) {
  add_delta2_term(alg, i, j, k, false, col, acc);
  add_delta2_term(alg, i, k, j, true, col, acc);
  add_delta2_term(alg, j, k, i, false, col, acc);
  return acc.take();
}

inline std::size_t choose3(std::size_t d) { return d < 3 ? 0 : d * (d - 1) * (d - 2) / 6; }

}  // namespace detail

/// Rows indexed by triples i < j < k (lexicographic), columns by pairs:
/// (delta phi)(x_i, x_j, x_k) = phi([x_i,x_j],x_k) - phi([x_i,x_k],x_j) + phi([x_j,x_k],x_i).
inline SparseMatrix delta2_matrix(const LieAlgebra& alg, std::size_t max_rows = 3'000'000) {
  const std::size_t d = alg.dim();
  if (detail::choose3(d) > max_rows) throw ResourceGuardError("delta2 rows", detail::choose3(d), max_rows);
  SparseMatrix m(alg.field(), 0, pair_count(d));
  Accumulator acc(alg.field(), pair_count(d));
  auto col = [d](std::uint32_t a, std::uint32_t b) { return static_cast<std::int64_t>(pair_index(d, a, b)); };
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = i + 1; j < d; ++j)
      for (std::uint32_t k = j + 1; k < d; ++k) m.push_row(detail::delta2_row(alg, i, j, k, col, acc));
  return m;
}

/// First triple on which delta^2 phi is nonzero.
inline std::optional<std::array<std::uint32_t, 3>> cocycle_violation(const LieAlgebra& alg, const TwoCochain& phi) {
  check_cochain(alg, phi);
  if (phi.is_zero()) return std::nullopt;
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  Vec dense = phi.dense();
  auto val = [&](std::uint32_t a, std::uint32_t b) -> Scalar {
    if (a == b) return 0;
    return a < b ? dense[pair_index(d, a, b)] : f.neg(dense[pair_index(d, b, a)]);
  };
  auto term = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::uint64_t acc = 0;
    for (const auto& t : alg.ordered_bracket(a, b)) acc += std::uint64_t{t.value} * val(t.index, c) % f.p();
    return static_cast<Scalar>(acc % f.p());
  };
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = i + 1; j < d; ++j) {
      if (alg.ordered_bracket(i, j).empty() && alg.neighbors(i).empty() && alg.neighbors(j).empty()) continue;
      for (std::uint32_t k = j + 1; k < d; ++k) {
        Scalar s = f.add(f.sub(term(i, j, k), term(i, k, j)), term(j, k, i));
        if (s) return std::array<std::uint32_t, 3>{i, j, k};
      }
    }
  return std::nullopt;
}

inline bool is_cocycle(const LieAlgebra& alg, const TwoCochain& phi) { return !cocycle_violation(alg, phi); }

/// psi with delta^1 psi = phi, or nullopt when phi is not a coboundary.
inline std::optional<OneCochain> is_coboundary(const LieAlgebra& alg, const TwoCochain& phi) {
  check_cochain(alg, phi);
  if (!is_cocycle(alg, phi)) throw std::invalid_argument("cochain is not a cocycle");
  const std::size_t d = alg.dim();
  const Field& f = alg.field();
  if (phi.is_zero()) return OneCochain(d, 0);
  Echelon ech(f, d + 1);
  Vec dense = phi.dense();
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = i + 1; j < d; ++j) {
      SparseVec row = alg.ordered_bracket(i, j);
      Scalar rhs = dense[pair_index(d, i, j)];
      if (row.empty() && !rhs) continue;
      if (rhs) row.push_back({static_cast<std::uint32_t>(d), rhs});
      ech.insert(row);
    }
  OneCochain psi(d, 0);
  for (const auto& r : ech.rref()) {
    if (r.front().index == d) return std::nullopt;
    psi[r.front().index] = lookup(r, static_cast<std::uint32_t>(d));
  }
  return psi;
}

/// phi(g, h^[p]) - phi([g, h, ..., h], h) with p - 1 copies of h.
inline Scalar delta_map(const LieAlgebra& alg, const TwoCochain& phi, std::span<const Scalar> g,
                        std::span<const Scalar> h) {
  check_cochain(alg, phi);
  if (phi.is_zero()) return 0;
  const Field& f = alg.field();
  Vec hp = p_power(alg, h);
  Vec it = iterated_bracket(alg, g, h, f.p() - 1);
  return f.sub(phi.evaluate(g, hp), phi.evaluate(it, h));
}

struct DeltaMapReport {
  bool vanishes = true;
  std::size_t basis_pairs = 0, random_pairs = 0;
  std::optional<std::pair<Vec, Vec>> witness;
  Scalar value = 0;
  std::uint64_t seed = 0;
};

/// Evaluates the delta map on every basis pair (g, h) and `samples` seeded
/// random pairs; stops at the first nonzero value.
inline DeltaMapReport delta_map_scan(const LieAlgebra& alg, const TwoCochain& phi, std::size_t samples,
                                     std::uint64_t seed = 1) {
  check_cochain(alg, phi);
  DeltaMapReport rep{.seed = seed};
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  if (phi.is_zero()) {
    rep.basis_pairs = d * d;
    rep.random_pairs = samples;
    return rep;
  }
  Accumulator acc(f, d);
  for (std::uint32_t h = 0; h < d; ++h) {
    Vec hv = unit_vector(d, h);
    Vec hp = to_dense(alg.basis_power(h), d);
    for (std::uint32_t g = 0; g < d; ++g) {
      // [g, h, ..., h] = (ad h)^{p-1} g because p - 1 is even
      SparseVec cur = unit_sparse(g);
      for (unsigned n = 0; n + 1 < f.p() && !cur.empty(); ++n) cur = ad_basis_apply(alg, h, cur, acc);
      Vec gv = unit_vector(d, g);
      Scalar v = f.sub(phi.evaluate(gv, hp), phi.evaluate(to_dense(cur, d), hv));
      ++rep.basis_pairs;
      if (v) {
        rep.vanishes = false;
        rep.value = v;
        rep.witness = {gv, hv};
        return rep;
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Vec g = random_element(f, d, rng), h = random_element(f, d, rng);
    Scalar v = delta_map(alg, phi, g, h);
    ++rep.random_pairs;
    if (v) {
      rep.vanishes = false;
      rep.value = v;
      rep.witness = {g, h};
      return rep;
    }
  }
  return rep;
}

struct CohomologyOptions {
  std::size_t max_dim = 2000;
  std::size_t max_block_rows = 20'000'000;  // delta^2 rows materialized for a single weight block
  bool use_grading = true;
  unsigned threads = 1;
};

struct CohomologyReport {
  std::size_t dim = 0;
  std::size_t h1_dim = 0;
  std::size_t h2_dim = 0;
  std::vector<TwoCochain> h2_reps;
  std::size_t delta1_rank = 0;
  std::size_t delta2_kernel_dim = 0;
  std::size_t blocks = 0;
};

namespace detail {

struct BlockResult {
  std::size_t rank1 = 0, kernel = 0;
  std::vector<SparseVec> reps;  // global pair indices
};

}  // namespace detail

/// H^2 with trivial coefficients. The complex splits along the weights found by
/// detect_weights; each block contributes ker(delta^2) reduced modulo
/// im(delta^1), and the representatives are the canonical RREF of the
/// reduced kernel (sorted by leading pair).
inline CohomologyReport h2_basis(const LieAlgebra& alg, const CohomologyOptions& opt = {}) {
  const std::size_t d = alg.dim();
  const Field& f = alg.field();
  if (d > opt.max_dim) throw ResourceGuardError("cohomology dimension", d, opt.max_dim);
  CohomologyReport rep{.dim = d};
  const std::size_t np = pair_count(d);

  std::vector<std::uint64_t> w = opt.use_grading ? detect_weights(alg) : std::vector<std::uint64_t>(d, 0);
  auto buckets = weight_buckets(w);
  std::map<std::uint64_t, std::vector<std::uint32_t>> pair_blocks;  // weight -> pair indices ascending
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = i + 1; j < d; ++j)
      pair_blocks[weight_sum(w[i], w[j])].push_back(static_cast<std::uint32_t>(pair_index(d, i, j)));

  // delta^1 images of the dual basis: e_l^* -> (pair -> c_ij^l)
  std::vector<SparseVec> d1_image(d);
  for (auto [i, j] : alg.nonzero_pairs())
    for (const auto& t : alg.ordered_bracket(i, j))
      d1_image[t.index].push_back({static_cast<std::uint32_t>(pair_index(d, i, j)), t.value});

  std::vector<std::pair<std::uint64_t, const std::vector<std::uint32_t>*>> blocks;
  for (const auto& [lam, pairs] : pair_blocks) blocks.emplace_back(lam, &pairs);
  rep.blocks = blocks.size();
  std::vector<detail::BlockResult> results(blocks.size());

  auto process = [&](std::size_t b, std::vector<std::int32_t>& local) {
    const std::uint64_t lam = blocks[b].first;
    const auto& pairs = *blocks[b].second;
    const std::size_t ncols = pairs.size();
    for (std::size_t c = 0; c < ncols; ++c) local[pairs[c]] = static_cast<std::int32_t>(c);
    auto col = [&](std::uint32_t a, std::uint32_t c) -> std::int64_t { return local[pair_index(d, a, c)]; };

    std::size_t triples = 0;
    std::vector<SparseVec> rows;
    Accumulator acc(f, ncols);
    for (std::uint32_t k = 0; k < d; ++k) {
      auto it = pair_blocks.find(weight_diff(lam, w[k]));
      if (it == pair_blocks.end()) continue;
      for (auto pidx : it->second) {
        auto [i, j] = pair_from_index(d, pidx);
        if (j >= k) continue;
        if (++triples > opt.max_block_rows)
          throw ResourceGuardError("delta2 rows in one weight block", triples, opt.max_block_rows);
        SparseVec row = detail::delta2_row(alg, i, j, k, col, acc);
        if (!row.empty()) rows.push_back(std::move(row));
      }
    }
    auto kernel = kernel_basis_sparse(f, ncols, rows);
    rows.clear();
    rows.shrink_to_fit();

    Echelon image(f, ncols);
    auto lam_bucket = buckets.find(lam);
    if (lam_bucket != buckets.end())
      for (auto l : lam_bucket->second) {
        SparseVec v;
        for (const auto& t : d1_image[l]) v.push_back({static_cast<std::uint32_t>(local[t.index]), t.value});
        std::sort(v.begin(), v.end(), [](const Term& a, const Term& c) { return a.index < c.index; });
        image.insert(v);
      }
    Echelon classes(f, ncols);
    for (const auto& z : kernel) classes.insert(image.reduce(z));

    detail::BlockResult res;
    res.rank1 = image.rank();
    res.kernel = kernel.size();
    for (auto& r : classes.rref()) {
      for (auto& t : r) t.index = pairs[t.index];
      res.reps.push_back(std::move(r));
    }
    for (auto pidx : pairs) local[pidx] = -1;
    results[b] = std::move(res);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(blocks.size())));
  if (threads == 1) {
    std::vector<std::int32_t> local(np, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) process(b, local);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          std::vector<std::int32_t> local(np, -1);
          for (std::size_t b = next++; b < blocks.size(); b = next++) process(b, local);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<SparseVec> reps;
  for (auto& r : results) {
    rep.delta1_rank += r.rank1;
    rep.delta2_kernel_dim += r.kernel;
    for (auto& v : r.reps) reps.push_back(std::move(v));
  }
  std::sort(reps.begin(), reps.end(),
            [](const SparseVec& a, const SparseVec& b) { return a.front().index < b.front().index; });
  for (auto& v : reps) rep.h2_reps.push_back(TwoCochain::from_sparse(f, d, std::move(v)));
  rep.h1_dim = d - rep.delta1_rank;
  rep.h2_dim = rep.h2_reps.size();
  if (rep.h2_dim != rep.delta2_kernel_dim - rep.delta1_rank)
    throw std::logic_error("cohomology bookkeeping mismatch");
  return rep;
}

}  // namespace rlie

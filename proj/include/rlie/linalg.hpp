#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rlie/field.hpp"
#include "rlie/sparse.hpp"

namespace rlie {

struct Triplet {
  std::uint32_t row, col;
  Scalar value;
};

/// Exact sparse matrix over GF(p), stored by rows.
class SparseMatrix {
 public:
  SparseMatrix(const Field& f, std::size_t rows, std::size_t cols)
      : f_(f), cols_(cols), rows_(rows) {}

  /// Duplicate (row, col) pairs, zero values and out-of-range scalars are
  /// rejected rather than merged.
  static SparseMatrix from_triplets(const Field& f, std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    SparseMatrix m(f, rows, cols);
    for (std::size_t n = 0; n < entries.size(); ++n) {
      const auto& e = entries[n];
      if (e.row >= rows || e.col >= cols) throw std::out_of_range("matrix entry index out of range");
      if (e.value == 0 || e.value >= f.p())
        throw std::invalid_argument("matrix entries must be nonzero and reduced mod p");
      if (n > 0 && entries[n - 1].row == e.row && entries[n - 1].col == e.col)
        throw std::invalid_argument("duplicate matrix entry (" + std::to_string(e.row) + ", " +
                                    std::to_string(e.col) + ")");
      m.rows_[e.row].push_back({e.col, e.value});
    }
    return m;
  }

  static SparseMatrix from_rows(const Field& f, std::size_t cols, std::vector<SparseVec> rows) {
    SparseMatrix m(f, 0, cols);
    for (auto& r : rows) m.push_row(std::move(r));
    return m;
  }

  void push_row(SparseVec row) {
    for (std::size_t n = 0; n < row.size(); ++n) {
      if (row[n].index >= cols_) throw std::out_of_range("row entry beyond column count");
      if (row[n].value == 0 || row[n].value >= f_.p())
        throw std::invalid_argument("matrix entries must be nonzero and reduced mod p");
      if (n > 0 && row[n - 1].index >= row[n].index)
        throw std::invalid_argument("row entries must be strictly increasing");
    }
    rows_.push_back(std::move(row));
  }

  const Field& field() const noexcept { return f_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const SparseVec& row(std::size_t r) const { return rows_.at(r); }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  std::vector<Triplet> entries() const {
    std::vector<Triplet> out;
    for (std::uint32_t r = 0; r < rows_.size(); ++r)
      for (const auto& t : rows_[r]) out.push_back({r, t.index, t.value});
    return out;
  }

  Vec apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vec out(rows_.size(), 0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Scalar acc = 0;
      for (const auto& t : rows_[r]) acc = f_.add(acc, f_.mul(t.value, v[t.index]));
      out[r] = acc;
    }
    return out;
  }

  SparseMatrix transpose() const {
    std::vector<SparseVec> cols(cols_);
    for (std::uint32_t r = 0; r < rows_.size(); ++r)
      for (const auto& t : rows_[r]) cols[t.index].push_back({r, t.value});
    SparseMatrix out(f_, 0, rows_.size());
    out.rows_ = std::move(cols);
    return out;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(f_, rows_.size(), cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& t : rows_[r]) d(r, t.index) = t.value;
    return d;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.f_ == b.f_ && a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

 private:
  Field f_;
  std::size_t cols_;
  std::vector<SparseVec> rows_;
};

/// Incremental row echelon basis of a subspace of GF(p)^width.
///
/// Stored rows have a leading 1 at their pivot column and zeros in every pivot
/// column that existed when they were inserted. `reduce` eliminates every pivot
/// column, so the result is independent of insertion order; `rref` returns the
/// canonical reduced row echelon basis.
class Echelon {
 public:
  Echelon(const Field& f, std::size_t width)
      : f_(f), width_(width), row_of_col_(width, -1), acc_(width, 0), queued_(width, 0) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  bool full() const noexcept { return rows_.size() == width_; }
  const Field& field() const noexcept { return f_; }

  bool is_pivot(std::size_t col) const { return row_of_col_.at(col) >= 0; }

  SparseVec reduce(const SparseVec& v) const {
    using MinHeap = std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>>;
    MinHeap heap;
    for (const auto& t : v) {
      if (t.index >= width_) throw std::invalid_argument("vector length exceeds echelon width");
      acc_[t.index] = f_.add(acc_[t.index], t.value);
      if (!queued_[t.index]) {
        queued_[t.index] = 1;
        heap.push(t.index);
      }
    }
    SparseVec out;
    while (!heap.empty()) {
      std::uint32_t c = heap.top();
      heap.pop();
      queued_[c] = 0;
      Scalar a = acc_[c];
      acc_[c] = 0;
      if (a == 0) continue;
      int r = row_of_col_[c];
      if (r < 0) {
        out.push_back({c, a});
        continue;
      }
      const auto& row = rows_[r];
      for (std::size_t n = 1; n < row.size(); ++n) {
        auto col = row[n].index;
        acc_[col] = f_.sub_mul(acc_[col], a, row[n].value);
        if (!queued_[col]) {
          queued_[col] = 1;
          heap.push(col);
        }
      }
    }
    return out;
  }

  Vec reduce(std::span<const Scalar> v) const {
    if (v.size() != width_) throw std::invalid_argument("dimension mismatch in reduction");
    return to_dense(reduce(to_sparse(v)), width_);
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  /// Returns true when v was independent of the stored rows (and stores it).
  bool insert(const SparseVec& v) {
    if (full()) return false;
    SparseVec r = reduce(v);
    if (r.empty()) return false;
    Scalar lead_inv = f_.inv(r.front().value);
    for (auto& t : r) t.value = f_.mul(t.value, lead_inv);
    row_of_col_[r.front().index] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }
  bool insert(std::span<const Scalar> v) {
    if (v.size() != width_) throw std::invalid_argument("dimension mismatch in insertion");
    return insert(to_sparse(v));
  }

  std::vector<std::uint32_t> pivots() const {
    std::vector<std::uint32_t> out;
    for (const auto& r : rows_) out.push_back(r.front().index);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Canonical reduced row echelon basis, sorted by pivot column.
  std::vector<SparseVec> rref() const {
    std::vector<SparseVec> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
      SparseVec tail(row.begin() + 1, row.end());
      SparseVec reduced = reduce(tail);
      reduced.insert(reduced.begin(), row.front());
      out.push_back(std::move(reduced));
    }
    std::sort(out.begin(), out.end(),
              [](const SparseVec& a, const SparseVec& b) { return a.front().index < b.front().index; });
    return out;
  }

  /// Coordinates of v with respect to rref(), or nullopt when v is outside
  /// the span. For an RREF basis the coordinate on a row is the entry of v at
  /// that row's pivot.
  std::optional<SparseVec> coordinates(const SparseVec& v) const {
    if (!contains(v)) return std::nullopt;
    auto piv = pivots();
    SparseVec out;
    for (const auto& t : v) {
      auto it = std::lower_bound(piv.begin(), piv.end(), t.index);
      if (it != piv.end() && *it == t.index)
        out.push_back({static_cast<std::uint32_t>(it - piv.begin()), t.value});
    }
    return out;
  }

 private:
  Field f_;
  std::size_t width_;
  std::vector<SparseVec> rows_;
  std::vector<int> row_of_col_;
  mutable Vec acc_;
  mutable std::vector<char> queued_;
};

struct EliminationOptions {
  // Remaining active block switches to dense elimination above this density.
  double dense_threshold = 0.20;
  // Worker threads for the dense phase; 0 means hardware concurrency.
  unsigned threads = 1;
};

namespace detail {

inline std::size_t dense_rank(const Field& f, std::vector<Vec> rows, std::size_t cols, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    Scalar inv = f.inv(rows[rank][c]);
    for (std::size_t k = c; k < cols; ++k) rows[rank][k] = f.mul(rows[rank][k], inv);
    const Vec& prow = rows[rank];
    auto eliminate = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        Scalar a = rows[r][c];
        if (a == 0) continue;
        for (std::size_t k = c; k < cols; ++k)
          if (prow[k]) rows[r][k] = f.sub_mul(rows[r][k], a, prow[k]);
      }
    };
    std::size_t lo = rank + 1, hi = rows.size();
    if (threads <= 1 || hi - lo < 256) {
      eliminate(lo, hi);
    } else {
      // Rows are disjoint per worker, so the result does not depend on scheduling.
      std::vector<std::thread> pool;
      std::size_t chunk = (hi - lo + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        std::size_t a = lo + t * chunk, b = std::min(hi, a + chunk);
        if (a < b) pool.emplace_back(eliminate, a, b);
      }
      for (auto& th : pool) th.join();
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Rank by sparse elimination with Markowitz pivoting; the trailing active
/// block is finished densely once its density exceeds the threshold.
inline std::size_t rank(const SparseMatrix& m, const EliminationOptions& opt = {}) {
  const Field& f = m.field();
  const std::size_t ncols = m.cols();
  std::vector<SparseVec> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));

  std::vector<char> row_active(rows.size(), 1), col_active(ncols, 1);
  std::vector<std::size_t> col_count(ncols, 0);
  std::vector<std::vector<std::uint32_t>> col_rows(ncols);
  std::size_t nnz = 0, active_rows = 0, active_cols = ncols;
  for (std::uint32_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) {
      row_active[r] = 0;
      continue;
    }
    ++active_rows;
    for (const auto& t : rows[r]) {
      ++col_count[t.index];
      col_rows[t.index].push_back(r);
      ++nnz;
    }
  }

  std::size_t rank = 0;
  while (active_rows > 0 && active_cols > 0 && nnz > 0) {
    double density = static_cast<double>(nnz) / (static_cast<double>(active_rows) * active_cols);
    if (density > opt.dense_threshold) break;

    // Candidate columns: the few with the smallest nonzero counts.
    constexpr std::size_t kCandidates = 4;
    std::vector<std::uint32_t> cand;
    for (std::uint32_t c = 0; c < ncols; ++c) {
      if (!col_active[c] || col_count[c] == 0) continue;
      cand.push_back(c);
      std::sort(cand.begin(), cand.end(), [&](auto a, auto b) {
        return std::tie(col_count[a], a) < std::tie(col_count[b], b);
      });
      if (cand.size() > kCandidates) cand.pop_back();
    }
    if (cand.empty()) break;

    std::size_t best_cost = SIZE_MAX;
    std::uint32_t prow = 0, pcol = 0;
    for (auto c : cand) {
      for (auto r : col_rows[c]) {
        if (!row_active[r] || lookup(rows[r], c) == 0) continue;
        std::size_t cost = (rows[r].size() - 1) * (col_count[c] - 1);
        if (cost < best_cost || (cost == best_cost && std::tie(c, r) < std::tie(pcol, prow))) {
          best_cost = cost;
          prow = r;
          pcol = c;
        }
      }
    }

    const SparseVec pivot_row = rows[prow];
    Scalar pinv = f.inv(lookup(pivot_row, pcol));
    std::vector<std::uint32_t> targets = col_rows[pcol];
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (auto r : targets) {
      if (r == prow || !row_active[r]) continue;
      Scalar a = lookup(rows[r], pcol);
      if (a == 0) continue;
      Scalar factor = f.mul(a, pinv);
      SparseVec updated = combine(f, 1, rows[r], f.neg(factor), pivot_row);
      // Adjust column bookkeeping for cancellations and fill-in.
      std::size_t i = 0, j = 0;
      const auto& old = rows[r];
      while (i < old.size() || j < updated.size()) {
        if (j == updated.size() || (i < old.size() && old[i].index < updated[j].index)) {
          --col_count[old[i].index];
          --nnz;
          ++i;
        } else if (i == old.size() || updated[j].index < old[i].index) {
          ++col_count[updated[j].index];
          col_rows[updated[j].index].push_back(r);
          ++nnz;
          ++j;
        } else {
          ++i;
          ++j;
        }
      }
      rows[r] = std::move(updated);
      if (rows[r].empty()) {
        row_active[r] = 0;
        --active_rows;
      }
    }
    for (const auto& t : pivot_row) {
      --col_count[t.index];
      --nnz;
    }
    row_active[prow] = 0;
    --active_rows;
    col_active[pcol] = 0;
    --active_cols;
    col_rows[pcol].clear();
    ++rank;
  }

  if (active_rows > 0 && active_cols > 0 && nnz > 0) {
    std::vector<std::uint32_t> col_map(ncols, UINT32_MAX);
    std::size_t width = 0;
    for (std::uint32_t c = 0; c < ncols; ++c)
      if (col_active[c]) col_map[c] = static_cast<std::uint32_t>(width++);
    std::vector<Vec> dense;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!row_active[r] || rows[r].empty()) continue;
      Vec d(width, 0);
      for (const auto& t : rows[r]) d[col_map[t.index]] = t.value;
      dense.push_back(std::move(d));
    }
    rank += detail::dense_rank(f, std::move(dense), width, opt.threads);
  }
  return rank;
}

/// Canonical null-space basis: one vector per free column of the RREF (in
/// ascending order), carrying a 1 at that column, zeros at the other free
/// columns and the solved values at pivot columns.
inline std::vector<SparseVec> kernel_basis_sparse(const Field& f, std::size_t cols,
                                                  std::span<const SparseVec> rows) {
  Echelon ech(f, cols);
  for (const auto& r : rows) {
    ech.insert(r);
    if (ech.full()) break;
  }
  auto rref = ech.rref();
  std::vector<char> pivot(cols, 0);
  for (const auto& r : rref) pivot[r.front().index] = 1;
  std::vector<std::int64_t> slot(cols, -1);
  std::vector<SparseVec> out;
  for (std::uint32_t c = 0; c < cols; ++c)
    if (!pivot[c]) {
      slot[c] = static_cast<std::int64_t>(out.size());
      out.push_back({});
    }
  for (const auto& r : rref) {
    std::uint32_t pc = r.front().index;
    for (std::size_t n = 1; n < r.size(); ++n)
      out[slot[r[n].index]].push_back({pc, f.neg(r[n].value)});
  }
  for (std::uint32_t c = 0; c < cols; ++c) {
    if (pivot[c]) continue;
    auto& v = out[slot[c]];
    v.push_back({c, 1});
    std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  }
  return out;
}

inline std::vector<Vec> kernel_basis(const SparseMatrix& m) {
  std::vector<SparseVec> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  std::vector<Vec> out;
  for (const auto& v : kernel_basis_sparse(m.field(), m.cols(), rows)) out.push_back(to_dense(v, m.cols()));
  return out;
}

/// v minus its combination of `image_basis` rows eliminated at their pivots
/// (first nonzero entries). The basis must be in echelon form: distinct pivots
/// and each row zero at the pivots of the others.
inline Vec reduce_mod_image(const Field& f, Vec v, std::span<const Vec> image_basis) {
  for (const auto& b : image_basis) {
    if (b.size() != v.size()) throw std::invalid_argument("dimension mismatch in reduce_mod_image");
    auto it = std::find_if(b.begin(), b.end(), [](Scalar s) { return s != 0; });
    if (it == b.end()) throw std::invalid_argument("zero vector in image basis");
    std::size_t piv = static_cast<std::size_t>(it - b.begin());
    Scalar a = f.div(v[piv], *it);
    if (a == 0) continue;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (b[k]) v[k] = f.sub_mul(v[k], a, b[k]);
  }
  return v;
}

}  // namespace rlie

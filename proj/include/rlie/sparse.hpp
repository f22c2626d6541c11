#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rlie/field.hpp"

namespace rlie {

struct Term {
  std::uint32_t index;
  Scalar value;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse vector: terms sorted by index, no zero values.
using SparseVec = std::vector<Term>;

inline SparseVec to_sparse(std::span<const Scalar> v) {
  SparseVec out;
  for (std::uint32_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.push_back({i, v[i]});
  return out;
}

inline Vec to_dense(const SparseVec& v, std::size_t n) {
  Vec out(n, 0);
  for (const auto& t : v) {
    if (t.index >= n) throw std::out_of_range("sparse index exceeds dense length");
    out[t.index] = t.value;
  }
  return out;
}

inline SparseVec unit_sparse(std::uint32_t i) { return {{i, 1}}; }

inline Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v.at(i) = 1;
  return v;
}

inline bool is_zero(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](Scalar s) { return s == 0; });
}

// a*x + b*y for sorted sparse vectors
inline SparseVec combine(const Field& f, Scalar a, const SparseVec& x, Scalar b, const SparseVec& y) {
  SparseVec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].index < y[j].index)) {
      if (Scalar v = f.mul(a, x[i].value)) out.push_back({x[i].index, v});
      ++i;
    } else if (i == x.size() || y[j].index < x[i].index) {
      if (Scalar v = f.mul(b, y[j].value)) out.push_back({y[j].index, v});
      ++j;
    } else {
      if (Scalar v = f.add(f.mul(a, x[i].value), f.mul(b, y[j].value))) out.push_back({x[i].index, v});
      ++i;
      ++j;
    }
  }
  return out;
}

inline SparseVec scaled(const Field& f, Scalar a, const SparseVec& x) {
  if (a == 0) return {};
  SparseVec out = x;
  for (auto& t : out) t.value = f.mul(a, t.value);
  return out;
}

inline Scalar lookup(const SparseVec& v, std::uint32_t index) {
  auto it = std::lower_bound(v.begin(), v.end(), index,
                             [](const Term& t, std::uint32_t i) { return t.index < i; });
  return (it != v.end() && it->index == index) ? it->value : 0;
}

/// Dense accumulator for building sparse vectors out of many scattered
/// contributions. Reusable; `take` resets it.
class Accumulator {
 public:
  Accumulator(const Field& f, std::size_t n) : f_(f), acc_(n, 0), seen_(n, 0) {}

  void add(std::uint32_t i, Scalar v) {
    if (v == 0) return;
    if (!seen_[i]) {
      seen_[i] = 1;
      touched_.push_back(i);
    }
    acc_[i] = f_.add(acc_[i], v);
  }
  void add(const SparseVec& v, Scalar scale = 1) {
    if (scale == 0) return;
    for (const auto& t : v) add(t.index, f_.mul(scale, t.value));
  }

  SparseVec take() {
    std::sort(touched_.begin(), touched_.end());
    SparseVec out;
    out.reserve(touched_.size());
    for (auto i : touched_) {
      if (acc_[i]) out.push_back({i, acc_[i]});
      acc_[i] = 0;
      seen_[i] = 0;
    }
    touched_.clear();
    return out;
  }

 private:
  Field f_;
  Vec acc_;
  std::vector<char> seen_;
  std::vector<std::uint32_t> touched_;
};

/// Row-major dense matrix over GF(p).
class DenseMatrix {
 public:
  DenseMatrix(const Field& f, std::size_t rows, std::size_t cols)
      : f_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static DenseMatrix identity(const Field& f, std::size_t n) {
    DenseMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Field& field() const noexcept { return f_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vec apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vec out(rows_, 0);
    const std::uint64_t batch = f_.lazy_batch();
    for (std::size_t r = 0; r < rows_; ++r) {
      const Scalar* row = data_.data() + r * cols_;
      std::uint64_t acc = 0, pending = 0;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (row[c] == 0 || v[c] == 0) continue;
        acc += std::uint64_t{row[c]} * v[c];
        if (++pending == batch) {
          acc %= f_.p();
          pending = 0;
        }
      }
      out[r] = static_cast<Scalar>(acc % f_.p());
    }
    return out;
  }

  DenseMatrix operator*(const DenseMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    DenseMatrix out(f_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        Scalar a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          if (Scalar b = o(k, j)) out(i, j) = f_.add(out(i, j), f_.mul(a, b));
      }
    return out;
  }

  DenseMatrix power(std::uint64_t e) const {
    if (rows_ != cols_) throw std::invalid_argument("power of a non-square matrix");
    DenseMatrix acc = identity(f_, rows_), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Field f_;
  std::size_t rows_, cols_;
  Vec data_;
};

}  // namespace rlie

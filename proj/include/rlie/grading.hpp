#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "rlie/algebra.hpp"
#include "rlie/linalg.hpp"

namespace rlie {

/// Scalar weights w with w_k = w_i + w_j whenever [x_i, x_j] has a nonzero
/// x_k coefficient. The solution space of these equations is computed over
/// GF(2^31 - 1) and collapsed by a fixed random combination; equal weights
/// only merge homogeneous blocks, so any solution is a valid grading.
inline std::vector<std::uint64_t> detect_weights(const LieAlgebra& alg, std::uint64_t seed = 0x9e3779b97f4a7c15ULL) {
  const Field q(Field::kMaxPrime);
  const std::size_t d = alg.dim();
  Echelon eqs(q, d);
  Accumulator acc(q, d);
  for (auto [i, j] : alg.nonzero_pairs()) {
    for (const auto& t : alg.ordered_bracket(i, j)) {
      acc.add(i, 1);
      acc.add(j, 1);
      acc.add(t.index, q.neg(1));
      eqs.insert(acc.take());
      if (eqs.full()) break;
    }
    if (eqs.full()) break;
  }
  auto rows = eqs.rref();
  auto kernel = kernel_basis_sparse(q, d, rows);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Scalar> dist(1, q.p() - 1);
  std::vector<std::uint64_t> w(d, 0);
  for (const auto& k : kernel) {
    Scalar r = dist(rng);
    for (const auto& t : k) w[t.index] = q.add(static_cast<Scalar>(w[t.index]), q.mul(r, t.value));
  }
  return w;
}

inline std::uint64_t weight_sum(std::uint64_t a, std::uint64_t b) { return (a + b) % Field::kMaxPrime; }
inline std::uint64_t weight_diff(std::uint64_t a, std::uint64_t b) {
  return (a + Field::kMaxPrime - b) % Field::kMaxPrime;
}

/// Basis indices grouped by weight, ascending within each group.
inline std::map<std::uint64_t, std::vector<std::uint32_t>> weight_buckets(const std::vector<std::uint64_t>& w) {
  std::map<std::uint64_t, std::vector<std::uint32_t>> out;
  for (std::uint32_t i = 0; i < w.size(); ++i) out[w[i]].push_back(i);
  return out;
}

}  // namespace rlie

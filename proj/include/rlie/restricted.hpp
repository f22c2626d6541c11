#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlie/algebra.hpp"
#include "rlie/cohomology.hpp"

namespace rlie {

/// omega: g -> F given by its values on the basis; values elsewhere follow
/// from the star rule relative to the partner cochain.
struct FrobeniusCochain {
  Vec base_values;
  TwoCochain partner;
};

/// (phi, omega) with omega.partner = phi.
struct RestrictedTwoCochain {
  FrobeniusCochain omega;

  RestrictedTwoCochain(TwoCochain phi, Vec base) : omega{std::move(base), std::move(phi)} {}

  const TwoCochain& phi() const noexcept { return omega.partner; }
  const Vec& base_values() const noexcept { return omega.base_values; }

  friend bool operator==(const RestrictedTwoCochain& a, const RestrictedTwoCochain& b) {
    return a.phi() == b.phi() && a.base_values() == b.base_values();
  }
};

namespace detail {

// Sum over i of (1/i) [t^{i-1}] phi(tu + w, ad(tu + w)^{p-2}(u)).
template <class AdU, class AdW>
Scalar star_defect_impl(const Field& f, const TwoCochain& phi, const Vec& u, const Vec& w, AdU&& ad_u, AdW&& ad_w) {
  const unsigned p = f.p();
  auto q = ad_polynomial(f, ad_u, ad_w, u, p - 2);  // q[0..p-2]
  Scalar total = 0;
  for (unsigned i = 1; i < p; ++i) {
    Scalar c = 0;
    if (i >= 2) c = f.add(c, phi.evaluate(u, q[i - 2]));
    if (i - 1 <= p - 2) c = f.add(c, phi.evaluate(w, q[i - 1]));
    if (c) total = f.add(total, f.mul(f.inv(i), c));
  }
  return total;
}

}  // namespace detail

/// Central coordinate of sum_i s_i(u, w) in g (+) Fc with bracket twisted by phi.
inline Scalar star_defect(const LieAlgebra& alg, const TwoCochain& phi, std::span<const Scalar> u,
                          std::span<const Scalar> w) {
  check_cochain(alg, phi);
  check_element(alg, u);
  check_element(alg, w);
  if (phi.is_zero()) return 0;
  DenseMatrix au = ad_dense(alg, u), aw = ad_dense(alg, w);
  return detail::star_defect_impl(
      alg.field(), phi, Vec(u.begin(), u.end()), Vec(w.begin(), w.end()),
      [&](const Vec& v) { return au.apply(v); }, [&](const Vec& v) { return aw.apply(v); });
}

/// omega(v), folding the support of v in `order` (default ascending) with
/// omega(u + a x_j) = omega(u) + a^p omega(x_j) + star_defect(phi, u, a x_j).
inline Scalar star_evaluate(const LieAlgebra& alg, const FrobeniusCochain& omega, std::span<const Scalar> v,
                            std::span<const std::uint32_t> order = {}) {
  check_element(alg, v);
  check_cochain(alg, omega.partner);
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  if (omega.base_values.size() != d) throw std::invalid_argument("omega base values have the wrong length");
  std::vector<std::uint32_t> seq(order.begin(), order.end());
  if (seq.empty()) {
    seq.resize(d);
    std::iota(seq.begin(), seq.end(), 0u);
  } else if (seq.size() != d) {
    throw std::invalid_argument("fold order must be a permutation of the basis");
  }
  Scalar result = 0;
  if (omega.partner.is_zero()) {
    for (auto j : seq) result = f.add(result, f.mul(f.pow(v[j], f.p()), omega.base_values[j]));
    return result;
  }
  Vec acc(d, 0);
  DenseMatrix ad_acc(f, d, d);
  bool acc_zero = true;
  for (auto j : seq) {
    Scalar a = v[j];
    if (a == 0) continue;
    if (!acc_zero) {
      Vec w(d, 0);
      w[j] = a;
      result = f.add(result, detail::star_defect_impl(
                                 f, omega.partner, acc, w, [&](const Vec& x) { return ad_acc.apply(x); },
                                 [&](const Vec& x) { return ad_basis_apply(alg, j, x, a); }));
    }
    result = f.add(result, f.mul(f.pow(a, f.p()), omega.base_values[j]));
    acc[j] = f.add(acc[j], a);
    add_ad_basis(alg, ad_acc, j, a);
    acc_zero = false;
  }
  return result;
}

inline FrobeniusCochain star_extend(const LieAlgebra& alg, const TwoCochain& phi, Vec base_values) {
  check_cochain(alg, phi);
  if (base_values.size() != alg.dim()) throw std::invalid_argument("omega base values have the wrong length");
  if (!is_cocycle(alg, phi)) throw std::invalid_argument("partner cochain is not a cocycle");
  return FrobeniusCochain{std::move(base_values), phi};
}

/// The pairs (0, omega_i), omega_i(x_j) = delta_ij.
inline std::vector<RestrictedTwoCochain> frobenius_basis(const LieAlgebra& alg) {
  std::vector<RestrictedTwoCochain> out;
  for (std::size_t i = 0; i < alg.dim(); ++i)
    out.emplace_back(TwoCochain(alg.field(), alg.dim()), unit_vector(alg.dim(), i));
  return out;
}

struct RestrictedCheckReport {
  bool cocycle = true;  // delta^2 phi = 0
  bool delta = true;    // delta map vanishes
  bool star = true;     // star property and p-semilinearity on samples
  std::string failure;
  std::uint64_t seed = 0;

  bool passed() const noexcept { return cocycle && delta && star; }
  explicit operator bool() const noexcept { return passed(); }
};

inline RestrictedCheckReport restricted_cocycle_check(const LieAlgebra& alg, const RestrictedTwoCochain& rc,
                                                      std::size_t samples, std::uint64_t seed = 1) {
  RestrictedCheckReport rep{.seed = seed};
  const Field& f = alg.field();
  const std::size_t d = alg.dim();
  auto note = [&](const std::string& s) { rep.failure += (rep.failure.empty() ? "" : "; ") + s; };

  if (auto t = cocycle_violation(alg, rc.phi())) {
    rep.cocycle = false;
    note("delta2 phi != 0 on triple (" + std::to_string((*t)[0]) + ", " + std::to_string((*t)[1]) + ", " +
         std::to_string((*t)[2]) + ")");
  }
  auto dm = delta_map_scan(alg, rc.phi(), samples, seed);
  if (!dm.vanishes) {
    rep.delta = false;
    note("delta map is " + std::to_string(f.to_signed(dm.value)) + " on " + format_vec(f, dm.witness->first) + ", " +
         format_vec(f, dm.witness->second));
  }
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_int_distribution<Scalar> scalar_dist(1, f.p() - 1);
  for (std::size_t s = 0; s < samples && rep.star; ++s) {
    Vec u = random_element(f, d, rng), w = random_element(f, d, rng);
    Scalar lhs = f.sub(f.sub(star_evaluate(alg, rc.omega, add(f, u, w)), star_evaluate(alg, rc.omega, u)),
                       star_evaluate(alg, rc.omega, w));
    if (lhs != star_defect(alg, rc.phi(), u, w)) {
      rep.star = false;
      note("star property fails on sample " + std::to_string(s));
      break;
    }
    Scalar a = scalar_dist(rng);
    if (star_evaluate(alg, rc.omega, scale(f, a, u)) != f.mul(f.pow(a, f.p()), star_evaluate(alg, rc.omega, u))) {
      rep.star = false;
      note("p-semilinearity fails on sample " + std::to_string(s));
    }
  }
  return rep;
}

/// (delta^1 psi, omega_psi) with omega_psi(x_i) = psi(x_i^[p]).
inline RestrictedTwoCochain restricted_coboundary(const LieAlgebra& alg, std::span<const Scalar> psi) {
  check_element(alg, psi);
  const Field& f = alg.field();
  Vec base(alg.dim(), 0);
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    std::uint64_t acc = 0;
    for (const auto& t : alg.basis_power(i)) acc = (acc + std::uint64_t{t.value} * psi[t.index]) % f.p();
    base[i] = static_cast<Scalar>(acc);
  }
  return RestrictedTwoCochain(delta1(alg, psi), std::move(base));
}

/// Evaluation vector (phi on all pairs, then omega on all basis vectors).
inline SparseVec restricted_evaluation_vector(const RestrictedTwoCochain& rc) {
  SparseVec v = rc.phi().values();
  const std::uint32_t off = static_cast<std::uint32_t>(pair_count(rc.phi().dim()));
  for (std::uint32_t i = 0; i < rc.base_values().size(); ++i)
    if (rc.base_values()[i]) v.push_back({off + i, rc.base_values()[i]});
  return v;
}

struct RestrictedOptions {
  CohomologyOptions cohomology;
  std::size_t check_samples = 20;
  std::uint64_t seed = 1;
};

struct RestrictedReport {
  CohomologyReport ordinary;
  std::size_t h2star_dim = 0;
  std::vector<RestrictedTwoCochain> basis;  // d Frobenius pairs, then one lift per H^2 class
  std::size_t frobenius_count = 0;
  std::vector<RestrictedCheckReport> checks;
  std::size_t coboundary_rank = 0;
  std::size_t total_rank = 0;  // coboundaries together with the basis

  std::span<const RestrictedTwoCochain> frobenius_part() const { return {basis.data(), frobenius_count}; }
  std::span<const RestrictedTwoCochain> lifted_part() const {
    return {basis.data() + frobenius_count, basis.size() - frobenius_count};
  }
  bool all_checks_passed() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
};

/// Frobenius pairs plus the zero-base lift of each H^2 representative;
/// independence modulo restricted coboundaries is verified by rank.
inline RestrictedReport h2star_basis(const LieAlgebra& alg, const RestrictedOptions& opt = {}) {
  RestrictedReport rep;
  rep.ordinary = h2_basis(alg, opt.cohomology);
  const std::size_t d = alg.dim();
  const Field& f = alg.field();
  rep.basis = frobenius_basis(alg);
  rep.frobenius_count = rep.basis.size();
  for (const auto& phi : rep.ordinary.h2_reps) rep.basis.emplace_back(phi, Vec(d, 0));
  for (std::size_t k = 0; k < rep.basis.size(); ++k)
    rep.checks.push_back(restricted_cocycle_check(alg, rep.basis[k], opt.check_samples, opt.seed + k));

  Echelon span(f, pair_count(d) + d);
  for (std::size_t l = 0; l < d; ++l) span.insert(restricted_evaluation_vector(restricted_coboundary(alg, unit_vector(d, l))));
  rep.coboundary_rank = span.rank();
  for (std::size_t k = 0; k < rep.basis.size(); ++k)
    if (!span.insert(restricted_evaluation_vector(rep.basis[k])))
      throw std::logic_error("restricted basis element " + std::to_string(k) +
                             " is dependent modulo restricted coboundaries");
  rep.total_rank = span.rank();
  rep.h2star_dim = rep.basis.size();
  return rep;
}

}  // namespace rlie

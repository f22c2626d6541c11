#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlie/algebra.hpp"
#include "rlie/cohomology.hpp"
#include "rlie/constructors.hpp"
#include "rlie/restricted.hpp"

namespace rlie {

/// E = g (+) Fc with the central element last.
struct CentralExtension {
  LieAlgebra algebra;
  RestrictedTwoCochain source;
  std::shared_ptr<const LieAlgebra> base;
  std::string provenance;  // e.g. "frobenius 3" or "cocycle file.coc"

  std::uint32_t central_index() const { return static_cast<std::uint32_t>(algebra.dim() - 1); }
};

class ExtensionError : public std::runtime_error {
 public:
  ExtensionError(const std::string& axiom, const std::string& detail)
      : std::runtime_error("extension fails " + axiom + (detail.empty() ? "" : ": " + detail)), axiom_(axiom) {}
  const std::string& axiom() const noexcept { return axiom_; }

 private:
  std::string axiom_;
};

struct ExtensionReport {
  CheckReport jacobi, restricted;
  bool central = true;
  bool c_power_zero = true;
  bool quotient_recovers = true;
  bool omega_agrees = true;  // central part of p-powers matches star evaluation
  std::string failure;

  bool passed() const noexcept {
    return jacobi.passed && restricted.passed && central && c_power_zero && quotient_recovers && omega_agrees;
  }
  explicit operator bool() const noexcept { return passed(); }
  std::string first_failed_axiom() const {
    if (!jacobi.passed) return "jacobi";
    if (!restricted.passed) return "restricted (" + restricted.axiom + ")";
    if (!central) return "centrality";
    if (!c_power_zero) return "c^[p] = 0";
    if (!quotient_recovers) return "quotient recovery";
    if (!omega_agrees) return "omega agreement";
    return {};
  }
};

/// Jacobi, restrictedness, [x, c] = 0, c^[p] = 0, recovery of the base algebra
/// by striking c, and agreement of the central part of p-powers with omega.
inline ExtensionReport verify_extension_axioms(const CentralExtension& ext, std::size_t samples,
                                               std::uint64_t seed = 1) {
  ExtensionReport rep;
  const LieAlgebra& E = ext.algebra;
  const Field& f = E.field();
  const std::uint32_t c = ext.central_index();
  auto note = [&](const std::string& s) { rep.failure += (rep.failure.empty() ? "" : "; ") + s; };

  rep.jacobi = jacobi_check(E);
  if (!rep.jacobi.passed) note(rep.jacobi.witness);
  rep.restricted = restrictedness_check(E, samples, seed);
  if (!rep.restricted.passed) note(rep.restricted.axiom + ": " + rep.restricted.witness);
  if (!E.neighbors(c).empty()) {
    rep.central = false;
    note("c does not commute with x" + std::to_string(E.neighbors(c).front()));
  }
  if (!E.basis_power(c).empty()) {
    rep.c_power_zero = false;
    note("c^[p] is nonzero");
  }
  if (ext.base) {
    const LieAlgebra& g = *ext.base;
    const std::size_t d = g.dim();
    auto strip = [&](SparseVec v) {
      if (!v.empty() && v.back().index == c) v.pop_back();
      return v;
    };
    bool ok = d + 1 == E.dim();
    for (std::size_t i = 0; ok && i < d; ++i) {
      if (strip(E.basis_power(i)) != g.basis_power(i)) ok = false;
      for (std::size_t j = i + 1; ok && j < d; ++j)
        if (strip(E.ordered_bracket(i, j)) != g.ordered_bracket(i, j)) ok = false;
    }
    if (!ok) {
      rep.quotient_recovers = false;
      note("quotient by c differs from the base algebra");
    }
    if (ok) {
      std::mt19937_64 rng(seed ^ 0xa5a5a5a5ULL);
      for (std::size_t s = 0; s < samples; ++s) {
        Vec v = random_element(f, d, rng);
        Vec ve = v;
        ve.push_back(0);
        Scalar central = p_power(E, ve)[c];
        if (central != star_evaluate(g, ext.source.omega, v)) {
          rep.omega_agrees = false;
          note("central part of a p-power differs from omega on sample " + std::to_string(s));
          break;
        }
      }
    }
  }
  return rep;
}

/// [x, y]_E = [x, y] + phi(x, y) c and x^[p]_E = x^[p] + omega(x) c on the basis.
inline CentralExtension build_extension(std::shared_ptr<const LieAlgebra> base, const RestrictedTwoCochain& rc,
                                        std::string provenance = {}, std::size_t verify_samples = 50,
                                        std::uint64_t seed = 1) {
  const LieAlgebra& g = *base;
  check_cochain(g, rc.phi());
  const std::size_t d = g.dim();
  const Field& f = g.field();
  if (rc.base_values().size() != d) throw std::invalid_argument("omega base values have the wrong length");
  const std::uint32_t c = static_cast<std::uint32_t>(d);
  std::vector<SparseVec> brackets(pair_count(d + 1)), pmap(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    pmap[i] = g.basis_power(i);
    if (Scalar w = rc.base_values()[i]) pmap[i].push_back({c, w});
    for (std::size_t j = i + 1; j < d; ++j) {
      SparseVec v = g.ordered_bracket(i, j);
      if (Scalar s = rc.phi().at(i, j)) v.push_back({c, s});
      brackets[pair_index(d + 1, i, j)] = std::move(v);
    }
  }
  std::vector<std::string> names;
  if (!g.basis_names().empty()) {
    names = g.basis_names();
    names.push_back("c");
  }
  std::string label = (g.label().empty() ? std::string("g") : g.label()) + "+c";
  CentralExtension ext{LieAlgebra::from_tables(f, d + 1, std::move(brackets), std::move(pmap), label, names), rc,
                       std::move(base), std::move(provenance)};
  if (verify_samples > 0) {
    auto rep = verify_extension_axioms(ext, verify_samples, seed);
    if (!rep.passed()) throw ExtensionError(rep.first_failed_axiom(), rep.failure);
  }
  return ext;
}

inline CentralExtension build_extension(const LieAlgebra& g, const RestrictedTwoCochain& rc,
                                        std::string provenance = {}, std::size_t verify_samples = 50,
                                        std::uint64_t seed = 1) {
  return build_extension(std::make_shared<const LieAlgebra>(g), rc, std::move(provenance), verify_samples, seed);
}

/// E_i from (0, omega_i); i is 0-based.
inline CentralExtension corollary_extension(const LieAlgebra& g, std::size_t i, std::size_t verify_samples = 50,
                                            std::uint64_t seed = 1) {
  if (i >= g.dim())
    throw std::out_of_range("basis index " + std::to_string(i) + " out of range 0.." + std::to_string(g.dim() - 1));
  RestrictedTwoCochain rc(TwoCochain(g.field(), g.dim()), unit_vector(g.dim(), i));
  auto ext = build_extension(g, rc, "frobenius " + std::to_string(i), verify_samples, seed);
  return ext;
}

/// Central term of the explicit W(1) display: [e_j, e_k] gets j(j^2 - 4)/3 c
/// when j + k = 0 as integers (basis index of e_j is j + 1).
inline TwoCochain witt1_formula_cochain(const Field& f) {
  const int p = static_cast<int>(f.p());
  std::vector<std::tuple<std::uint32_t, std::uint32_t, Scalar>> entries;
  const Scalar third = f.inv(3);
  for (int j = -1; j <= p - 2; ++j)
    for (int k = j + 1; k <= p - 2; ++k) {
      if (j + k != 0) continue;
      Scalar v = f.mul(f.from_int(static_cast<std::int64_t>(j) * (j * j - 4)), third);
      if (v) entries.emplace_back(static_cast<std::uint32_t>(j + 1), static_cast<std::uint32_t>(k + 1), v);
    }
  return TwoCochain::from_entries(f, f.p(), entries);
}

/// The displayed extension of W(1): bracket twisted by witt1_formula_cochain,
/// e_j^[p] = delta_{0,j} e_0, c^[p] = 0.
inline CentralExtension witt1_extension(const Field& f, std::size_t verify_samples = 50, std::uint64_t seed = 1) {
  LieAlgebra w1 = construct_witt(1, f);
  RestrictedTwoCochain rc(witt1_formula_cochain(f), Vec(w1.dim(), 0));
  return build_extension(w1, rc, "witt1 display", verify_samples, seed);
}

}  // namespace rlie

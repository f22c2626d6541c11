// Acceptance gate: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion that ran passed. --skip-long skips the S(3) tier.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "alg_oracles.hpp"
#include "rlie/rlie.hpp"

using namespace rlie;

namespace {

// Budgets in seconds.
constexpr double kW1Budget = 1.0;
constexpr double kW2Budget = 10.0;
constexpr double kK3Budget = 120.0;
constexpr double kH2Budget = 10.0;
constexpr double kS3Budget = 1800.0;
constexpr double kPropertyBudget = 60.0;

constexpr std::size_t kCheckSamples = 20;
constexpr std::size_t kJacobsonSamples = 50;
constexpr std::size_t kDeltaSamples = 100;
constexpr std::size_t kStarPairs = 25;
constexpr std::size_t kOrderSamples = 100;
constexpr std::uint64_t kSeed = 20240531;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

struct Computed {
  std::string key;
  LieAlgebra g;
  RestrictedReport rep;
  double seconds;
};

class Gate {
 public:
  explicit Gate(bool skip_long) : skip_long_(skip_long) {}

  const Computed& compute(const std::string& key, const std::function<LieAlgebra()>& build) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto t0 = Clock::now();
    LieAlgebra g = build();
    RestrictedOptions opt;
    opt.check_samples = kCheckSamples;
    opt.seed = kSeed;
    auto rep = h2star_basis(g, opt);
    double s = since(t0);
    return cache_.emplace(key, Computed{key, std::move(g), std::move(rep), s}).first->second;
  }

  void detail(const std::string& line) { details_.push_back(line); }

  void verdict(int n, bool pass, const std::string& summary) {
    for (const auto& d : details_) std::printf("    %s\n", d.c_str());
    details_.clear();
    std::printf("criterion %d: %s  %s\n", n, pass ? "PASS" : "FAIL", summary.c_str());
    std::fflush(stdout);
    if (!pass) ++failures_;
  }

  void skipped(int n, const std::string& why) {
    std::printf("criterion %d: SKIP  %s\n", n, why.c_str());
    std::fflush(stdout);
  }

  bool skip_long() const { return skip_long_; }
  int failures() const { return failures_; }

 private:
  bool skip_long_;
  int failures_ = 0;
  std::map<std::string, Computed> cache_;
  std::vector<std::string> details_;
};

struct Spec {
  std::string key;
  std::function<LieAlgebra()> build;
  std::size_t dim, h2, h2star;
  double budget;
};

std::vector<Spec> criterion1() {
  return {{"W(1) p=5", [] { return construct_witt(1, Field(5)); }, 5, 1, 6, kW1Budget},
          {"W(1) p=7", [] { return construct_witt(1, Field(7)); }, 7, 1, 8, kW1Budget}};
}

std::vector<Spec> criterion2() {
  const double none = 0;
  return {{"sl(2) p=5", [] { return construct_sl(2, Field(5)); }, 3, 0, 3, none},
          {"sl(3) p=5", [] { return construct_sl(3, Field(5)); }, 8, 0, 8, none},
          {"sl(4) p=5", [] { return construct_sl(4, Field(5)); }, 15, 0, 15, none},
          {"psl(5) p=5", [] { return construct_psl(5, Field(5)); }, 23, 0, 23, none},
          {"W(2) p=5", [] { return construct_witt(2, Field(5)); }, 50, 0, 50, kW2Budget},
          {"K(3) p=5", [] { return construct_contact(3, Field(5)); }, 125, 0, 125, kK3Budget}};
}

std::vector<Spec> criterion3() {
  return {{"H(2) p=5", [] { return construct_hamiltonian(2, Field(5)); }, 23, 3, 26, kH2Budget},
          {"H(2) p=7", [] { return construct_hamiltonian(2, Field(7)); }, 47, 3, 50, kH2Budget}};
}

std::vector<Spec> criterion4() {
  return {{"S(3) p=5", [] { return construct_special(3, Field(5)); }, 248, 3, 251, kS3Budget}};
}

// Exact table check for a list of rows.
void table_criterion(Gate& gate, int n, const std::vector<Spec>& rows) {
  bool all = true;
  for (const auto& s : rows) {
    const auto& c = gate.compute(s.key, s.build);
    bool ok = c.g.dim() == s.dim && c.rep.ordinary.h2_dim == s.h2 && c.rep.h2star_dim == s.h2star;
    bool fast = s.budget == 0 || c.seconds < s.budget;
    gate.detail(s.key + ": dim " + std::to_string(c.g.dim()) + ", dim H2 " + std::to_string(c.rep.ordinary.h2_dim) +
                ", dim H2* " + std::to_string(c.rep.h2star_dim) + " (expected " + std::to_string(s.dim) + ", " +
                std::to_string(s.h2) + ", " + std::to_string(s.h2star) + ") in " + fmt(c.seconds) +
                (s.budget > 0 ? " (budget " + fmt(s.budget) + ")" : "") + (ok && fast ? "" : "  <-- fails"));
    all = all && ok && fast;
  }
  gate.verdict(n, all, all ? "all rows exact and within budget" : "some rows differ from the table or exceed budget");
}

std::vector<Spec> algebras_1_to(int last, const Gate& gate) {
  std::vector<Spec> out;
  for (auto v : {criterion1(), criterion2(), criterion3()}) out.insert(out.end(), v.begin(), v.end());
  if (last >= 4 && !gate.skip_long()) {
    auto v = criterion4();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

void criterion5(Gate& gate) {
  ReportOptions ro;
  ro.p = 5;
  ro.max_dim = 0;  // formula rows only; computed rows are covered by criteria 1-4
  auto rows = build_report(ro);
  auto find = [&](const std::string& name) -> const ReportRow* {
    for (const auto& r : rows)
      if (r.name == name) return &r;
    return nullptr;
  };
  bool ok = true;
  for (auto [name, d, h2, h2s] : std::vector<std::tuple<std::string, std::string, std::string, std::string>>{
           {"K(7) (n+3=0 mod p)", "78124", "8", "78132"}, {"H(6) (n+4=0 mod p)", "15623", "8", "15631"}}) {
    const ReportRow* r = find(name);
    bool row_ok = r && r->kind == ReportRow::Kind::Formula && r->status == "formula" && r->exp_dim == d &&
                  r->exp_h2 == h2 && r->exp_h2s == h2s;
    gate.detail("report row " + name + (row_ok ? " printed as formula (" + d + ", " + h2 + ", " + h2s + ")" : " missing or wrong"));
    ok = ok && row_ok;
  }
  std::size_t n = 0;
  for (const auto& s : algebras_1_to(4, gate)) {
    const auto& c = gate.compute(s.key, s.build);
    bool id = c.rep.h2star_dim == c.rep.ordinary.h2_dim + c.g.dim();
    if (!id) gate.detail(s.key + ": dim H2* != dim H2 + dim g");
    ok = ok && id;
    ++n;
  }
  gate.detail("dim H2* = dim H2 + dim g on " + std::to_string(n) + " algebras" +
              (gate.skip_long() ? " (S(3) skipped)" : ""));
  gate.verdict(5, ok, ok ? "formula rows present, identity holds constructively" : "see details");
}

void criterion6(Gate& gate) {
  bool ok = true;
  for (const auto& s : algebras_1_to(3, gate)) {
    const auto& c = gate.compute(s.key, s.build);
    const auto& r = c.rep;
    bool count = r.basis.size() == c.g.dim() + r.ordinary.h2_dim;
    bool checks = r.checks.size() == r.basis.size() && r.all_checks_passed();
    bool indep = r.total_rank == r.coboundary_rank + r.basis.size();
    gate.detail(s.key + ": " + std::to_string(r.basis.size()) + " restricted cocycles, checks " +
                (checks ? "pass" : "FAIL") + ", rank " + std::to_string(r.coboundary_rank) + " -> " +
                std::to_string(r.total_rank) + (indep ? "" : " (dependent)"));
    ok = ok && count && checks && indep;
  }
  gate.verdict(6, ok, ok ? "bases have dim g + dim H2 independent restricted cocycles" : "see details");
}

void criterion7(Gate& gate) {
  bool axioms = true;
  struct Case {
    std::string key;
    LieAlgebra g;
  };
  std::vector<Case> cases{{"W(1) p=5", construct_witt(1, Field(5))},
                          {"W(1) p=7", construct_witt(1, Field(7))},
                          {"sl(2) p=5", construct_sl(2, Field(5))},
                          {"H(2) p=5", construct_hamiltonian(2, Field(5))}};
  auto ok_rep = [](const ExtensionReport& r) {
    return r.jacobi.passed && r.restricted.passed && r.central && r.c_power_zero && r.quotient_recovers &&
           r.omega_agrees;
  };
  for (const auto& c : cases) {
    std::size_t good = 0;
    for (std::size_t i = 0; i < c.g.dim(); ++i) {
      auto ext = corollary_extension(c.g, i, 0);
      auto r = verify_extension_axioms(ext, kJacobsonSamples, kSeed + i);
      if (ok_rep(r)) ++good;
      else gate.detail(c.key + " E_" + std::to_string(i) + ": " + r.first_failed_axiom());
    }
    gate.detail(c.key + ": " + std::to_string(good) + "/" + std::to_string(c.g.dim()) +
                " corollary extensions pass jacobi, restrictedness (" + std::to_string(kJacobsonSamples) +
                " samples), centrality, c^[p] = 0");
    axioms = axioms && good == c.g.dim();
  }
  bool non_coboundary = true;
  for (unsigned p : {5u, 7u}) {
    Field f(p);
    auto ext = witt1_extension(f, 0);
    auto r = verify_extension_axioms(ext, kJacobsonSamples, kSeed);
    gate.detail("witt1_extension p=" + std::to_string(p) + ": axioms " + (ok_rep(r) ? "pass" : "FAIL " + r.first_failed_axiom()));
    axioms = axioms && ok_rep(r);
    LieAlgebra w = construct_witt(1, f);
    const TwoCochain& phi = ext.source.phi();
    auto psi = is_coboundary(w, phi);
    if (psi) {
      non_coboundary = false;
      gate.detail("witt1_extension p=" + std::to_string(p) + ": phi part IS a coboundary, phi = delta1(" +
                  format_vec(f, *psi) + ")");
    } else {
      gate.detail("witt1_extension p=" + std::to_string(p) + ": phi part is not a coboundary");
    }
    // agreement with the computed representative up to a nonzero scalar and a coboundary
    auto reps = h2_basis(w).h2_reps;
    bool matched = false;
    for (Scalar a = 1; a < f.p() && !reps.empty(); ++a)
      if (is_coboundary(w, phi.plus(reps.front(), f.neg(a)))) matched = true;
    gate.detail("witt1_extension p=" + std::to_string(p) + ": phi " + (matched ? "equals" : "does not equal") +
                " a nonzero multiple of the H2 representative modulo coboundaries");
    non_coboundary = non_coboundary && matched;
  }
  bool ok = axioms && non_coboundary;
  gate.verdict(7, ok,
               std::string("extension axioms ") + (axioms ? "pass" : "fail") + "; witt1 phi non-coboundary clause " +
                   (non_coboundary ? "holds" : "fails"));
}

void criterion8(Gate& gate) {
  bool ok = true;
  std::size_t reps = 0;
  for (const auto& s : algebras_1_to(4, gate)) {
    const auto& c = gate.compute(s.key, s.build);
    for (std::size_t k = 0; k < c.rep.ordinary.h2_reps.size(); ++k) {
      auto t0 = Clock::now();
      auto scan = delta_map_scan(c.g, c.rep.ordinary.h2_reps[k], kDeltaSamples, kSeed + k);
      bool v = scan.vanishes && scan.basis_pairs == c.g.dim() * c.g.dim() && scan.random_pairs == kDeltaSamples;
      gate.detail(s.key + " rep " + std::to_string(k) + ": " + (v ? "zero" : "NONZERO") + " on " +
                  std::to_string(scan.basis_pairs) + " basis pairs and " + std::to_string(scan.random_pairs) +
                  " random pairs (" + fmt(since(t0)) + ")");
      ok = ok && v;
      ++reps;
    }
  }
  gate.verdict(8, ok, "delta map on " + std::to_string(reps) + " representatives" +
                          (gate.skip_long() ? " (S(3) skipped)" : ""));
}

void criterion9(Gate& gate) {
  Field f(5);
  LieAlgebra w = construct_witt(1, f);
  auto dense = oracle::dense_counts(oracle::table_of(w));
  auto rep = h2_basis(w);
  SparseMatrix d2 = delta2_matrix(w);
  std::vector<SparseVec> rows;
  for (std::size_t r = 0; r < d2.rows(); ++r) rows.push_back(d2.row(r));
  std::size_t sparse_kernel = kernel_basis_sparse(f, d2.cols(), rows).size();
  bool kernel_ok = rep.delta2_kernel_dim == dense.kernel2 && sparse_kernel == dense.kernel2 && dense.kernel2 == 6;
  gate.detail("dim ker delta2: engine " + std::to_string(rep.delta2_kernel_dim) + ", sparse kernel basis " +
              std::to_string(sparse_kernel) + ", dense brute force " + std::to_string(dense.kernel2));

  auto t = oracle::table_of(w);
  const TwoCochain& phi = rep.h2_reps.at(0);
  oracle::Mat pm(5, oracle::V(5, 0));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) pm[i][j] = phi.at(i, j);
  std::mt19937_64 rng(kSeed);
  std::size_t agree = 0;
  for (std::size_t s = 0; s < kStarPairs; ++s) {
    Vec u = random_element(f, 5, rng), v = random_element(f, 5, rng);
    if (std::int64_t(star_defect(w, phi, u, v)) == oracle::star_defect(t, pm, oracle::widen(u), oracle::widen(v)))
      ++agree;
  }
  gate.detail("star_defect agrees with the t-expansion oracle on " + std::to_string(agree) + "/" +
              std::to_string(kStarPairs) + " pairs");
  bool ok = kernel_ok && agree == kStarPairs;
  gate.verdict(9, ok, ok ? "sparse engine and star defect match the oracles" : "see details");
}

void criterion10(Gate& gate) {
  auto t0 = Clock::now();
  bool ok = true;
  std::vector<Computed const*> algs;
  for (const auto& s : algebras_1_to(3, gate)) algs.push_back(&gate.compute(s.key, s.build));

  // delta2 o delta1 = 0
  bool dd = true;
  for (const auto* c : algs) {
    SparseMatrix d1 = delta1_matrix(c->g), d2 = delta2_matrix(c->g);
    for (std::size_t l = 0; l < c->g.dim() && dd; ++l) dd = is_zero(d2.apply(d1.apply(unit_vector(c->g.dim(), l))));
    if (!dd) gate.detail(c->key + ": delta2 o delta1 != 0");
  }
  gate.detail(std::string("delta2 o delta1 = 0: ") + (dd ? "yes" : "no"));

  // H1 = 0 on simple algebras
  bool h1 = true;
  for (const auto* c : algs) h1 = h1 && c->rep.ordinary.h1_dim == 0;
  gate.detail(std::string("H1 = 0 on all simple algebras: ") + (h1 ? "yes" : "no"));

  // star evaluation order independence
  bool order = true;
  for (const auto* c : algs) {
    if (c->g.dim() > 50) continue;
    const Field& f = c->g.field();
    std::mt19937_64 rng(kSeed);
    const auto& reps = c->rep.ordinary.h2_reps;
    TwoCochain phi = reps.empty() ? delta1(c->g, random_element(f, c->g.dim(), rng)) : reps.front();
    auto omega = star_extend(c->g, phi, random_element(f, c->g.dim(), rng, false));
    std::vector<std::uint32_t> perm(c->g.dim());
    for (std::uint32_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<std::uint32_t>(perm.size() - 1 - k);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t s = 0; s < kOrderSamples && order; ++s) {
      Vec v = random_element(f, c->g.dim(), rng);
      order = star_evaluate(c->g, omega, v) == star_evaluate(c->g, omega, v, perm);
    }
    if (!order) gate.detail(c->key + ": star evaluation depends on the order");
  }
  gate.detail(std::string("star evaluation order independent (") + std::to_string(kOrderSamples) +
              " samples per algebra): " + (order ? "yes" : "no"));

  // file round trips
  bool files = true;
  for (const auto* c : algs) {
    std::string text = write_algebra(c->g);
    LieAlgebra back = parse_algebra(text);
    files = files && back == c->g && write_algebra(back) == text;
    for (const auto& phi : c->rep.ordinary.h2_reps) {
      std::string ct = write_cocycle(phi);
      files = files && parse_cocycle(ct).cochain.phi() == phi && write_cocycle(parse_cocycle(ct).cochain.phi()) == ct;
    }
  }
  gate.detail(std::string("algebra and cocycle files round trip: ") + (files ? "yes" : "no"));

  double s = since(t0);
  ok = dd && h1 && order && files && s < kPropertyBudget;
  gate.verdict(10, ok, "property suites in " + fmt(s) + " (budget " + fmt(kPropertyBudget) + ")");
}

}  // namespace

int main(int argc, char** argv) {
  bool skip_long = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--skip-long") == 0) {
      skip_long = true;
    } else {
      std::fprintf(stderr, "usage: %s [--skip-long]\n", argv[0]);
      return 2;
    }
  }
  Gate gate(skip_long);
  try {
    table_criterion(gate, 1, criterion1());
    table_criterion(gate, 2, criterion2());
    table_criterion(gate, 3, criterion3());
    if (skip_long) gate.skipped(4, "long-running tier (--skip-long)");
    else table_criterion(gate, 4, criterion4());
    criterion5(gate);
    criterion6(gate);
    criterion7(gate);
    criterion8(gate);
    criterion9(gate);
    criterion10(gate);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", gate.failures());
  return gate.failures() == 0 ? 0 : 1;
}

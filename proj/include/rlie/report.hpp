#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rlie/constructors.hpp"
#include "rlie/restricted.hpp"

namespace rlie {

struct ReportOptions {
  unsigned p = 5;
  std::size_t max_dim = 300;
  unsigned threads = 1;
  std::size_t check_samples = 3;
  std::uint64_t seed = 1;
};

struct ReportRow {
  enum class Kind { Computed, Skipped, Formula };
  Kind kind = Kind::Computed;
  int table = 1;  // 1: H^2 = 0, 2: H^2 != 0
  std::string name;
  std::string dim, h2, h2star;           // printed values
  std::string exp_dim, exp_h2, exp_h2s;  // closed forms evaluated (or symbolic for formula rows)
  std::string status;
};

namespace detail {

struct RowSpec {
  std::string name;
  std::size_t dim, h2, h2star;
  std::function<LieAlgebra(const Field&, const ConstructOptions&)> build;
};

inline std::vector<RowSpec> computed_specs(unsigned p) {
  std::vector<RowSpec> rows;
  auto P = [p](unsigned n) { return ipow(p, n); };
  rows.push_back({"W(1)", p, 1, p + 1, [](const Field& f, const ConstructOptions& o) { return construct_witt(1, f, o); }});
  for (unsigned n : {2u, 3u})
    rows.push_back({"W(" + std::to_string(n) + ")", n * P(n), 0, n * P(n),
                    [n](const Field& f, const ConstructOptions& o) { return construct_witt(n, f, o); }});
  for (unsigned m : {2u, 3u, 4u}) {
    if (m % p == 0) continue;
    rows.push_back({"sl(" + std::to_string(m) + ")", m * m - 1, 0, m * m - 1,
                    [m](const Field& f, const ConstructOptions& o) { return construct_sl(m, f, o); }});
  }
  rows.push_back({"psl(" + std::to_string(p) + ")", std::size_t{p} * p - 2, 0, std::size_t{p} * p - 2,
                  [p](const Field& f, const ConstructOptions& o) { return construct_psl(p, f, o); }});
  for (unsigned n : {2u, 4u}) {
    bool special = (n + 4) % p == 0;
    rows.push_back({"H(" + std::to_string(n) + ")", P(n) - 2, special ? n + 2 : n + 1, special ? P(n) + n : P(n) + n - 1,
                    [n](const Field& f, const ConstructOptions& o) { return construct_hamiltonian(n, f, o); }});
  }
  for (unsigned n : {3u, 5u}) {
    bool special = (n + 3) % p == 0;
    rows.push_back({"K(" + std::to_string(n) + ")", special ? P(n) - 1 : P(n), special ? n + 1 : 0,
                    special ? P(n) + n : P(n),
                    [n](const Field& f, const ConstructOptions& o) { return construct_contact(n, f, o); }});
  }
  rows.push_back({"S(3)", 2 * P(3) - 2, 3, 2 * P(3) + 1,
                  [](const Field& f, const ConstructOptions& o) { return construct_special(3, f, o); }});
  rows.push_back({"S(4)", 3 * (P(4) - 1), 6, 3 * (2 * P(4) + 2) / 2,
                  [](const Field& f, const ConstructOptions& o) { return construct_special(4, f, o); }});
  return rows;
}

}  // namespace detail

inline std::vector<ReportRow> build_report(const ReportOptions& opt) {
  const Field f(opt.p);
  std::vector<ReportRow> rows;
  for (const auto& spec : detail::computed_specs(opt.p)) {
    ReportRow r;
    r.name = spec.name;
    r.table = spec.h2 == 0 ? 1 : 2;
    r.exp_dim = std::to_string(spec.dim);
    r.exp_h2 = std::to_string(spec.h2);
    r.exp_h2s = std::to_string(spec.h2star);
    if (spec.dim > opt.max_dim) {
      r.kind = ReportRow::Kind::Skipped;
      r.status = "skipped (dim " + std::to_string(spec.dim) + " > budget)";
      rows.push_back(std::move(r));
      continue;
    }
    ConstructOptions co{.max_dim = opt.max_dim};
    LieAlgebra g = spec.build(f, co);
    RestrictedOptions ro;
    ro.cohomology.max_dim = opt.max_dim;
    ro.cohomology.threads = opt.threads;
    ro.check_samples = opt.check_samples;
    ro.seed = opt.seed;
    auto rep = h2star_basis(g, ro);
    r.dim = std::to_string(g.dim());
    r.h2 = std::to_string(rep.ordinary.h2_dim);
    r.h2star = std::to_string(rep.h2star_dim);
    bool ok = g.dim() == spec.dim && rep.ordinary.h2_dim == spec.h2 && rep.h2star_dim == spec.h2star &&
              rep.all_checks_passed();
    r.status = ok ? "ok" : "MISMATCH";
    rows.push_back(std::move(r));
  }

  auto formula = [&](int table, std::string name, std::string d, std::string h2, std::string h2s) {
    ReportRow r;
    r.kind = ReportRow::Kind::Formula;
    r.table = table;
    r.name = std::move(name);
    r.exp_dim = std::move(d);
    r.exp_h2 = std::move(h2);
    r.exp_h2s = std::move(h2s);
    r.status = "formula";
    rows.push_back(std::move(r));
  };
  formula(1, "B_l (l>=2)", "2l^2+l", "0", "2l^2+l");
  formula(1, "C_l (l>=3)", "2l^2+l", "0", "2l^2+l");
  formula(1, "D_l (l>=4)", "2l^2-l", "0", "2l^2-l");
  formula(1, "G_2", "14", "0", "14");
  formula(1, "F_4", "52", "0", "52");
  formula(1, "E_6", "78", "0", "78");
  formula(1, "E_7", "133", "0", "133");
  formula(1, "E_8", "248", "0", "248");
  if (opt.p == 5) formula(1, "M", "125", "0", "125");
  {
    unsigned n = 3;
    while ((n + 3) % opt.p != 0) n += 2;
    std::size_t P = ipow(opt.p, n);
    formula(2, "K(" + std::to_string(n) + ") (n+3=0 mod p)", std::to_string(P - 1), std::to_string(n + 1),
            std::to_string(P + n));
  }
  {
    unsigned n = 2;
    while ((n + 4) % opt.p != 0) n += 2;
    std::size_t P = ipow(opt.p, n);
    formula(2, "H(" + std::to_string(n) + ") (n+4=0 mod p)", std::to_string(P - 2), std::to_string(n + 2),
            std::to_string(P + n));
  }
  return rows;
}

inline std::string format_report(const std::vector<ReportRow>& rows, const ReportOptions& opt) {
  std::ostringstream os;
  char buf[256];
  os << "restricted simple Lie algebras over GF(" << opt.p << "), dimension budget " << opt.max_dim << "\n";
  for (int table : {1, 2}) {
    os << '\n' << (table == 1 ? "H^2 = 0" : "H^2 != 0") << '\n';
    std::snprintf(buf, sizeof buf, "%-24s %8s %8s %8s   %-24s %s\n", "algebra", "dim", "dim H2", "dim H2*",
                  "table (dim, H2, H2*)", "status");
    os << buf;
    for (const auto& r : rows) {
      if (r.table != table) continue;
      std::string expected = r.exp_dim + ", " + r.exp_h2 + ", " + r.exp_h2s;
      const bool computed = r.kind == ReportRow::Kind::Computed;
      std::snprintf(buf, sizeof buf, "%-24s %8s %8s %8s   %-24s %s\n", r.name.c_str(),
                    computed ? r.dim.c_str() : "-", computed ? r.h2.c_str() : "-", computed ? r.h2star.c_str() : "-",
                    expected.c_str(), r.status.c_str());
      os << buf;
    }
  }
  return os.str();
}

}  // namespace rlie

// Command-line driver: construct, verify, h2, h2star, extend, delta-map, report.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rlie/rlie.hpp"

namespace fs = std::filesystem;
using namespace rlie;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kGuard = 3 };

LieAlgebra load_algebra(const std::string& path) {
  try {
    return parse_algebra(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string numbered_path(const std::string& path, std::size_t i) {
  fs::path p(path);
  fs::path name = p.stem().string() + "_" + std::to_string(i) + p.extension().string();
  return (p.parent_path() / name).string();
}

struct ConstructArgs {
  std::string family, out;
  unsigned n = 0, p = 0;
  std::size_t max_dim = 2000;
};

int run_construct(const ConstructArgs& a) {
  Field f(a.p);
  LieAlgebra g = construct(parse_family(a.family), a.n, f, {.max_dim = a.max_dim});
  std::string text = write_algebra(g);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
    std::cout << "wrote " << g.label() << " (dim " << g.dim() << ") to " << a.out << "\n";
  }
  return kOk;
}

struct VerifyArgs {
  std::string file, checks = "jacobi,restricted";
  std::uint64_t seed = 1;
  std::size_t samples = 50, trials = 5;
};

int run_verify(const VerifyArgs& a) {
  LieAlgebra g = load_algebra(a.file);
  auto names = split(a.checks, ',');
  for (const auto& c : names)
    if (c != "jacobi" && c != "restricted" && c != "simple") throw CLI::ValidationError("--checks", "unknown check '" + c + "'");
  bool ok = true;
  std::cout << "algebra " << (g.label().empty() ? a.file : g.label()) << ", dim " << g.dim() << ", p " << g.field().p()
            << "\n";
  for (const auto& c : names) {
    if (c == "jacobi") {
      auto r = jacobi_check(g);
      std::cout << "jacobi: " << (r.passed ? "PASS" : "FAIL (" + r.witness + ")") << "\n";
      ok = ok && r.passed;
    } else if (c == "restricted") {
      auto r = restrictedness_check(g, a.samples, a.seed);
      std::cout << "restricted: "
                << (r.passed ? "PASS" : "FAIL (" + r.axiom + ": " + r.witness + ")") << " [seed " << a.seed << ", "
                << a.samples << " samples]\n";
      ok = ok && r.passed;
    } else {
      if (g.dim() < 2) {
        std::cout << "simple: FAIL (dimension below 2)\n";
        ok = false;
        continue;
      }
      auto r = simplicity_check(g, a.trials, a.seed);
      std::cout << "simple: " << (r.simple() ? "PASS" : "FAIL (" + r.witness + ")") << " [seed " << a.seed << ", "
                << a.trials << " trials]\n";
      ok = ok && r.simple();
    }
  }
  return ok ? kOk : kVerifyFailed;
}

struct CohArgs {
  std::string file, out;
  std::size_t max_dim = 2000, samples = 20;
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

CohomologyOptions coh_options(const CohArgs& a) {
  CohomologyOptions o;
  o.max_dim = a.max_dim;
  o.threads = a.threads;
  return o;
}

int run_h2(const CohArgs& a) {
  LieAlgebra g = load_algebra(a.file);
  auto rep = h2_basis(g, coh_options(a));
  std::cout << "dim H1 = " << rep.h1_dim << "\n";
  std::cout << "dim H2 = " << rep.h2_dim << "\n";
  if (!a.out.empty()) {
    for (std::size_t i = 0; i < rep.h2_reps.size(); ++i) {
      std::string path = rep.h2_reps.size() == 1 ? a.out : numbered_path(a.out, i);
      write_file(path, write_cocycle(rep.h2_reps[i], {"H2 representative " + std::to_string(i) + " of " +
                                                      (g.label().empty() ? a.file : g.label())}));
      std::cout << "wrote " << path << "\n";
    }
  }
  return kOk;
}

int run_h2star(const CohArgs& a) {
  LieAlgebra g = load_algebra(a.file);
  RestrictedOptions o;
  o.cohomology = coh_options(a);
  o.check_samples = a.samples;
  o.seed = a.seed;
  auto rep = h2star_basis(g, o);
  std::cout << "dim H2 = " << rep.ordinary.h2_dim << "\n";
  std::cout << "dim H2* = " << rep.h2star_dim << "\n";
  std::cout << "frobenius classes = " << rep.frobenius_count << ", lifted classes = " << rep.lifted_part().size() << "\n";
  std::cout << "rank of restricted coboundaries = " << rep.coboundary_rank << ", with basis = " << rep.total_rank
            << "\n";
  bool ok = rep.all_checks_passed();
  for (std::size_t k = 0; k < rep.checks.size(); ++k)
    if (!rep.checks[k].passed()) std::cout << "restricted cocycle check failed for element " << k << ": " << rep.checks[k].failure << "\n";
  std::cout << "restricted cocycle checks: " << (ok ? "PASS" : "FAIL") << "\n";
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    for (std::size_t k = 0; k < rep.basis.size(); ++k) {
      bool frob = k < rep.frobenius_count;
      std::string name = frob ? "frob_" + std::to_string(k) + ".coc" : "lift_" + std::to_string(k - rep.frobenius_count) + ".coc";
      write_file((fs::path(a.out) / name).string(), write_cocycle(rep.basis[k]));
    }
    std::cout << "wrote " << rep.basis.size() << " cocycle files to " << a.out << "\n";
  }
  return ok ? kOk : kVerifyFailed;
}

struct ExtendArgs {
  std::string file, cocycle, out;
  std::optional<std::size_t> frobenius;
  std::size_t samples = 50;
  std::uint64_t seed = 1;
};

int run_extend(const ExtendArgs& a) {
  LieAlgebra g = load_algebra(a.file);
  auto base = std::make_shared<const LieAlgebra>(g);
  std::optional<CentralExtension> ext;
  try {
    if (a.frobenius) {
      ext = corollary_extension(g, *a.frobenius, a.samples, a.seed);
    } else {
      CocycleFile cf = parse_cocycle(read_file(a.cocycle));
      if (!(cf.field == g.field()) || cf.dim != g.dim())
        throw std::invalid_argument("cocycle file does not match the algebra (p or dim differs)");
      RestrictedTwoCochain rc = cf.cochain;
      if (!is_cocycle(g, rc.phi())) {
        std::cout << "cochain in " << a.cocycle << " is not a cocycle\n";
        return kVerifyFailed;
      }
      ext = build_extension(base, rc, "cocycle " + fs::path(a.cocycle).filename().string(), a.samples, a.seed);
    }
  } catch (const ExtensionError& e) {
    std::cout << e.what() << "\n";
    return kVerifyFailed;
  }
  write_file(a.out, write_extension(*ext));
  std::cout << "wrote extension (dim " << ext->algebra.dim() << ", central index " << ext->central_index() << ") to "
            << a.out << "\n";
  return kOk;
}

struct DeltaArgs {
  std::string file, cocycle;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
};

int run_delta(const DeltaArgs& a) {
  LieAlgebra g = load_algebra(a.file);
  CocycleFile cf = parse_cocycle(read_file(a.cocycle));
  if (!(cf.field == g.field()) || cf.dim != g.dim())
    throw std::invalid_argument("cocycle file does not match the algebra (p or dim differs)");
  const TwoCochain& phi = cf.cochain.phi();
  bool cocycle = is_cocycle(g, phi);
  std::cout << "cocycle: " << (cocycle ? "yes" : "no") << "\n";
  auto rep = delta_map_scan(g, phi, a.samples, a.seed);
  if (rep.vanishes) {
    std::cout << "delta map vanishes on " << rep.basis_pairs << " basis pairs and " << rep.random_pairs
              << " random pairs [seed " << a.seed << "]\n";
    return kOk;
  }
  const Field& f = g.field();
  std::cout << "delta map = " << f.to_signed(rep.value) << " at g = " << format_vec(f, rep.witness->first)
            << ", h = " << format_vec(f, rep.witness->second) << "\n";
  return cocycle ? kVerifyFailed : kOk;
}

struct ReportArgs {
  unsigned p = 5;
  std::size_t max_dim = 300, samples = 3;
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

int run_report(const ReportArgs& a) {
  ReportOptions o{.p = a.p, .max_dim = a.max_dim, .threads = a.threads, .check_samples = a.samples, .seed = a.seed};
  Field check(a.p);  // validates p
  (void)check;
  auto rows = build_report(o);
  std::cout << format_report(rows, o);
  for (const auto& r : rows)
    if (r.status == "MISMATCH") return kVerifyFailed;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"restricted Lie algebras over GF(p): construction, cohomology, central extensions"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "build an algebra and write its structure constants");
  construct_cmd->add_option("--family", ca.family, "witt|special|hamiltonian|contact|sl|psl")->required();
  construct_cmd->add_option("--n", ca.n, "rank parameter (n for Cartan type, m for sl/psl)")->required();
  construct_cmd->add_option("--p", ca.p, "field characteristic")->required();
  construct_cmd->add_option("--out", ca.out, "output file (stdout if omitted)");
  construct_cmd->add_option("--max-dim", ca.max_dim, "refuse larger algebras")->capture_default_str();

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "run the Jacobi, restrictedness and simplicity gates");
  verify_cmd->add_option("file", va.file)->required();
  verify_cmd->add_option("--checks", va.checks, "comma separated subset of jacobi,restricted,simple")->capture_default_str();
  verify_cmd->add_option("--seed", va.seed)->capture_default_str();
  verify_cmd->add_option("--samples", va.samples, "random samples for the restrictedness check")->capture_default_str();
  verify_cmd->add_option("--trials", va.trials, "random generators for the simplicity check")->capture_default_str();

  CohArgs ha;
  auto* h2_cmd = app.add_subcommand("h2", "ordinary second cohomology");
  h2_cmd->add_option("file", ha.file)->required();
  h2_cmd->add_option("--cocycles-out", ha.out, "write representatives (PATH, or PATH_<i> when several)");
  h2_cmd->add_option("--max-dim", ha.max_dim)->capture_default_str();
  h2_cmd->add_option("--threads", ha.threads)->capture_default_str();

  CohArgs sa;
  auto* h2star_cmd = app.add_subcommand("h2star", "restricted second cohomology");
  h2star_cmd->add_option("file", sa.file)->required();
  h2star_cmd->add_option("--basis-out", sa.out, "directory for frob_<i>.coc and lift_<k>.coc");
  h2star_cmd->add_option("--max-dim", sa.max_dim)->capture_default_str();
  h2star_cmd->add_option("--threads", sa.threads)->capture_default_str();
  h2star_cmd->add_option("--samples", sa.samples, "samples per restricted cocycle check")->capture_default_str();
  h2star_cmd->add_option("--seed", sa.seed)->capture_default_str();

  ExtendArgs ea;
  auto* extend_cmd = app.add_subcommand("extend", "build a restricted central extension");
  extend_cmd->add_option("file", ea.file)->required();
  auto* frob_opt = extend_cmd->add_option("--frobenius", ea.frobenius, "0-based basis index i for (0, omega_i)");
  auto* coc_opt = extend_cmd->add_option("--cocycle", ea.cocycle, "cocycle file (kind phi or pair)");
  frob_opt->excludes(coc_opt);
  coc_opt->excludes(frob_opt);
  extend_cmd->add_option("--out", ea.out)->required();
  extend_cmd->add_option("--samples", ea.samples, "samples for the axiom verification")->capture_default_str();
  extend_cmd->add_option("--seed", ea.seed)->capture_default_str();

  DeltaArgs da;
  auto* delta_cmd = app.add_subcommand("delta-map", "evaluate the delta map of a 2-cochain");
  delta_cmd->add_option("file", da.file)->required();
  delta_cmd->add_option("--cocycle", da.cocycle)->required();
  delta_cmd->add_option("--samples", da.samples, "random pairs")->capture_default_str();
  delta_cmd->add_option("--seed", da.seed)->capture_default_str();

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "dimension table for all families within the budget");
  report_cmd->add_option("--p", ra.p)->required();
  report_cmd->add_option("--max-dim", ra.max_dim)->capture_default_str();
  report_cmd->add_option("--threads", ra.threads)->capture_default_str();
  report_cmd->add_option("--samples", ra.samples, "samples per restricted cocycle check")->capture_default_str();
  report_cmd->add_option("--seed", ra.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (extend_cmd->parsed() && !ea.frobenius && ea.cocycle.empty()) {
    std::cerr << "extend: one of --frobenius or --cocycle is required\n";
    return kUsage;
  }

  try {
    if (construct_cmd->parsed()) return run_construct(ca);
    if (verify_cmd->parsed()) return run_verify(va);
    if (h2_cmd->parsed()) return run_h2(ha);
    if (h2star_cmd->parsed()) return run_h2star(sa);
    if (extend_cmd->parsed()) return run_extend(ea);
    if (delta_cmd->parsed()) return run_delta(da);
    if (report_cmd->parsed()) return run_report(ra);
  } catch (const ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kGuard;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlie/algebra.hpp"
#include "rlie/extensions.hpp"
#include "rlie/restricted.hpp"

namespace rlie {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
  std::string rest;  // text after the keyword, trimmed
};

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string body = trim(raw);
    if (body.empty()) continue;
    Line l{n, {}, {}};
    std::istringstream ls(body);
    std::string tok;
    while (ls >> tok) l.tokens.push_back(tok);
    auto sp = body.find_first_of(" \t");
    l.rest = sp == std::string::npos ? std::string{} : trim(std::string_view(body).substr(sp));
    out.push_back(std::move(l));
  }
  return out;
}

inline std::uint64_t parse_uint(const Line& l, std::size_t k, const char* what) {
  if (k >= l.tokens.size()) throw ParseError(l.number, std::string("missing ") + what);
  const std::string& s = l.tokens[k];
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(l.number, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

inline void expect_count(const Line& l, std::size_t n) {
  if (l.tokens.size() != n)
    throw ParseError(l.number, "'" + l.tokens[0] + "' expects " + std::to_string(n - 1) + " fields, got " +
                                   std::to_string(l.tokens.size() - 1));
}

struct Header {
  std::optional<Field> field;
  std::optional<std::size_t> dim;
};

// Handles p and dim lines; returns false for other keywords.
inline bool header_line(const Line& l, Header& h) {
  const std::string& kw = l.tokens[0];
  if (kw == "p") {
    expect_count(l, 2);
    if (h.field) throw ParseError(l.number, "duplicate 'p' line");
    try {
      h.field.emplace(parse_uint(l, 1, "prime"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(l.number, e.what());
    }
    return true;
  }
  if (kw == "dim") {
    expect_count(l, 2);
    if (h.dim) throw ParseError(l.number, "duplicate 'dim' line");
    h.dim = parse_uint(l, 1, "dimension");
    return true;
  }
  return false;
}

inline void need_header(const Line& l, const Header& h) {
  if (!h.field) throw ParseError(l.number, "'p' must precede entries");
  if (!h.dim) throw ParseError(l.number, "'dim' must precede entries");
}

inline std::uint32_t index_field(const Line& l, std::size_t k, const Header& h) {
  auto v = parse_uint(l, k, "index");
  if (v >= *h.dim)
    throw ParseError(l.number, "index " + std::to_string(v) + " out of range 0.." + std::to_string(*h.dim - 1));
  return static_cast<std::uint32_t>(v);
}

inline Scalar coeff_field(const Line& l, std::size_t k, const Header& h) {
  auto v = parse_uint(l, k, "coefficient");
  if (v == 0 || v >= h.field->p())
    throw ParseError(l.number, "coefficient " + std::to_string(v) + " outside 1.." + std::to_string(h.field->p() - 1));
  return static_cast<Scalar>(v);
}

}  // namespace detail

/// Parses the structure-constant format:
///   p <prime> / dim <d> / [label <text>] / [basis <name>...]
///   b <i> <j> <k> <coeff>   [x_i, x_j] has coeff on x_k, i < j
///   pm <i> <k> <coeff>      x_i^[p] has coeff on x_k
inline LieAlgebra parse_algebra(const std::string& text) {
  using namespace detail;
  Header h;
  std::string label;
  std::vector<std::string> names;
  std::vector<StructureConstant> sc;
  std::vector<PowerEntry> pm;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> seen_b;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen_pm;
  bool have_label = false, have_basis = false;
  for (const auto& l : tokenize(text)) {
    const std::string& kw = l.tokens[0];
    if (header_line(l, h)) continue;
    if (kw == "label") {
      if (have_label) throw ParseError(l.number, "duplicate 'label' line");
      have_label = true;
      label = l.rest;
    } else if (kw == "basis") {
      if (!h.dim) throw ParseError(l.number, "'dim' must precede 'basis'");
      if (have_basis) throw ParseError(l.number, "duplicate 'basis' line");
      have_basis = true;
      names.assign(l.tokens.begin() + 1, l.tokens.end());
      if (names.size() != *h.dim)
        throw ParseError(l.number, "basis lists " + std::to_string(names.size()) + " names for dimension " +
                                       std::to_string(*h.dim));
    } else if (kw == "b") {
      need_header(l, h);
      expect_count(l, 5);
      auto i = index_field(l, 1, h), j = index_field(l, 2, h), k = index_field(l, 3, h);
      if (i >= j) throw ParseError(l.number, "bracket entry requires i < j");
      Scalar c = coeff_field(l, 4, h);
      if (!seen_b.insert({i, j, k}).second) throw ParseError(l.number, "duplicate bracket entry");
      sc.push_back({i, j, k, c});
    } else if (kw == "pm") {
      need_header(l, h);
      expect_count(l, 4);
      auto i = index_field(l, 1, h), k = index_field(l, 2, h);
      Scalar c = coeff_field(l, 3, h);
      if (!seen_pm.insert({i, k}).second) throw ParseError(l.number, "duplicate p-map entry");
      pm.push_back({i, k, c});
    } else {
      throw ParseError(l.number, "unknown keyword '" + kw + "'");
    }
  }
  if (!h.field) throw ParseError(0, "missing 'p' line");
  if (!h.dim) throw ParseError(0, "missing 'dim' line");
  return LieAlgebra(*h.field, *h.dim, sc, pm, label, names);
}

/// Canonical text: header, b-lines by (i, j, k), pm-lines by (i, k).
/// `comments` are emitted first, each prefixed with "# ".
inline std::string write_algebra(const LieAlgebra& alg, const std::vector<std::string>& comments = {}) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "p " << alg.field().p() << '\n' << "dim " << alg.dim() << '\n';
  if (!alg.label().empty()) os << "label " << alg.label() << '\n';
  if (!alg.basis_names().empty()) {
    os << "basis";
    for (const auto& n : alg.basis_names()) os << ' ' << n;
    os << '\n';
  }
  for (const auto& s : alg.structure_constants()) os << "b " << s.i << ' ' << s.j << ' ' << s.k << ' ' << s.coeff << '\n';
  for (const auto& e : alg.power_entries()) os << "pm " << e.i << ' ' << e.k << ' ' << e.coeff << '\n';
  return os.str();
}

enum class CocycleKind { Phi, Pair };

struct CocycleFile {
  Field field;
  std::size_t dim;
  CocycleKind kind;
  RestrictedTwoCochain cochain;
};

/// p / dim / kind phi|pair, then `c2 <i> <j> <coeff>` (i < j) and, for
/// kind pair, `om <i> <coeff>`.
inline CocycleFile parse_cocycle(const std::string& text) {
  using namespace detail;
  Header h;
  std::optional<CocycleKind> kind;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, Scalar>> c2;
  std::vector<std::pair<std::uint32_t, Scalar>> om;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen_c2;
  std::set<std::uint32_t> seen_om;
  for (const auto& l : tokenize(text)) {
    const std::string& kw = l.tokens[0];
    if (header_line(l, h)) continue;
    if (kw == "kind") {
      expect_count(l, 2);
      if (kind) throw ParseError(l.number, "duplicate 'kind' line");
      if (l.tokens[1] == "phi") kind = CocycleKind::Phi;
      else if (l.tokens[1] == "pair") kind = CocycleKind::Pair;
      else throw ParseError(l.number, "kind must be 'phi' or 'pair'");
    } else if (kw == "c2") {
      need_header(l, h);
      expect_count(l, 4);
      auto i = index_field(l, 1, h), j = index_field(l, 2, h);
      if (i >= j) throw ParseError(l.number, "cochain entry requires i < j");
      Scalar c = coeff_field(l, 3, h);
      if (!seen_c2.insert({i, j}).second) throw ParseError(l.number, "duplicate cochain entry");
      c2.emplace_back(i, j, c);
    } else if (kw == "om") {
      need_header(l, h);
      if (!kind) throw ParseError(l.number, "'kind' must precede 'om' lines");
      if (*kind != CocycleKind::Pair) throw ParseError(l.number, "'om' lines need kind pair");
      expect_count(l, 3);
      auto i = index_field(l, 1, h);
      Scalar c = coeff_field(l, 2, h);
      if (!seen_om.insert(i).second) throw ParseError(l.number, "duplicate omega entry");
      om.emplace_back(i, c);
    } else {
      throw ParseError(l.number, "unknown keyword '" + kw + "'");
    }
  }
  if (!h.field) throw ParseError(0, "missing 'p' line");
  if (!h.dim) throw ParseError(0, "missing 'dim' line");
  if (!kind) throw ParseError(0, "missing 'kind' line");
  Vec base(*h.dim, 0);
  for (auto [i, c] : om) base[i] = c;
  return CocycleFile{*h.field, *h.dim, *kind,
                     RestrictedTwoCochain(TwoCochain::from_entries(*h.field, *h.dim, c2), std::move(base))};
}

inline std::string write_cocycle(const TwoCochain& phi, const std::vector<std::string>& comments = {}) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "p " << phi.field().p() << "\ndim " << phi.dim() << "\nkind phi\n";
  for (auto [i, j, v] : phi.entries()) os << "c2 " << i << ' ' << j << ' ' << v << '\n';
  return os.str();
}

inline std::string write_cocycle(const RestrictedTwoCochain& rc, const std::vector<std::string>& comments = {}) {
  std::ostringstream os;
  const TwoCochain& phi = rc.phi();
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "p " << phi.field().p() << "\ndim " << phi.dim() << "\nkind pair\n";
  for (auto [i, j, v] : phi.entries()) os << "c2 " << i << ' ' << j << ' ' << v << '\n';
  for (std::size_t i = 0; i < rc.base_values().size(); ++i)
    if (rc.base_values()[i]) os << "om " << i << ' ' << rc.base_values()[i] << '\n';
  return os.str();
}

/// Algebra file of the extension with its provenance as a comment block.
inline std::string write_extension(const CentralExtension& ext) {
  std::vector<std::string> comments{"central extension, central element is basis index " +
                                    std::to_string(ext.central_index())};
  if (ext.base && !ext.base->label().empty()) comments.push_back("source algebra: " + ext.base->label());
  if (!ext.provenance.empty()) comments.push_back("source cocycle: " + ext.provenance);
  for (auto [i, j, v] : ext.source.phi().entries())
    comments.push_back("  c2 " + std::to_string(i) + " " + std::to_string(j) + " " + std::to_string(v));
  for (std::size_t i = 0; i < ext.source.base_values().size(); ++i)
    if (ext.source.base_values()[i])
      comments.push_back("  om " + std::to_string(i) + " " + std::to_string(ext.source.base_values()[i]));
  return write_algebra(ext.algebra, comments);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace rlie

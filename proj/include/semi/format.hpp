#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/grassmann.hpp"
#include "semi/semihomotopy.hpp"
#include "semi/supermap.hpp"

namespace semi {

inline constexpr int kMaxDocumentGenerators = 16;

struct SpaceDecl {
  std::string name;
  SuperDomainSignature signature;
  friend bool operator==(const SpaceDecl&, const SpaceDecl&) = default;
};

struct BundleDecl {
  std::string total;
  std::string base;
  std::string fiber;
  friend bool operator==(const BundleDecl&, const BundleDecl&) = default;
};

struct ChartDecl {
  std::string name;
  bool semi = false;
  bool second = false;
  friend bool operator==(const ChartDecl&, const ChartDecl&) = default;
};

enum class MapRole { Plain, Coordinate, Transition, Projection, Section, Trivialization, BundleTransition, Cross, Homotopy };

inline const char* to_string(MapRole r) {
  switch (r) {
    case MapRole::Plain: return "plain";
    case MapRole::Coordinate: return "coordinate";
    case MapRole::Transition: return "transition";
    case MapRole::Projection: return "projection";
    case MapRole::Section: return "section";
    case MapRole::Trivialization: return "trivialization";
    case MapRole::BundleTransition: return "bundle-transition";
    case MapRole::Cross: return "cross";
    case MapRole::Homotopy: return "homotopy";
  }
  return "?";
}

inline std::optional<MapRole> parse_role(std::string_view s) {
  for (MapRole r : {MapRole::Plain, MapRole::Coordinate, MapRole::Transition, MapRole::Projection, MapRole::Section,
                    MapRole::Trivialization, MapRole::BundleTransition, MapRole::Cross, MapRole::Homotopy}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

/// Role implied by the number of charts in the bracket.
inline MapRole default_role(std::size_t charts) {
  return charts == 0 ? MapRole::Plain : charts == 1 ? MapRole::Coordinate : MapRole::Transition;
}

inline std::size_t role_arity(MapRole r) {
  switch (r) {
    case MapRole::Coordinate:
    case MapRole::Section:
    case MapRole::Trivialization: return 1;
    case MapRole::Transition:
    case MapRole::BundleTransition:
    case MapRole::Cross: return 2;
    default: return 0;
  }
}

struct MapDecl {
  std::string name;
  std::vector<std::string> charts;
  MapRole role = MapRole::Plain;
  SuperMap map;
  friend bool operator==(const MapDecl& a, const MapDecl& b) {
    return a.name == b.name && a.charts == b.charts && a.role == b.role && a.map == b.map;
  }
};

struct Task {
  enum class Kind { Check, Solve, SolveMap, Berezinian, Semigroup, Homotopy, HomotopyAverage };
  Kind kind = Kind::Check;
  std::optional<int> n_max;
  bool reflexive = false;
  std::optional<GrassmannElement> coefficient;
  std::optional<GrassmannElement> rhs;
  std::string map;
  std::string inner;
  std::string target;
  std::optional<int> degree;
  std::vector<Rational> at;
  std::string chart;
  ParameterKind parameter = ParameterKind::Even;
  std::string f;
  std::string g;
  std::optional<GrassmannElement> start;
  std::optional<GrassmannElement> end;
  int line = 0;

  friend bool operator==(const Task& a, const Task& b) {
    return a.kind == b.kind && a.n_max == b.n_max && a.reflexive == b.reflexive && a.coefficient == b.coefficient &&
           a.rhs == b.rhs && a.map == b.map && a.inner == b.inner && a.target == b.target && a.degree == b.degree &&
           a.at == b.at && a.chart == b.chart && a.parameter == b.parameter && a.f == b.f && a.g == b.g &&
           a.start == b.start && a.end == b.end;
  }
};

struct Document {
  int n_generators = 0;
  std::vector<SpaceDecl> spaces;
  std::optional<BundleDecl> bundle;
  std::vector<ChartDecl> charts;
  std::vector<std::vector<std::string>> overlaps;
  std::vector<MapDecl> maps;
  std::vector<Task> tasks;

  [[nodiscard]] const SpaceDecl* find_space(std::string_view name) const {
    for (const auto& s : spaces) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
  [[nodiscard]] const ChartDecl* find_chart(std::string_view name) const {
    for (const auto& c : charts) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  [[nodiscard]] const MapDecl* find_map(std::string_view name) const {
    for (const auto& m : maps) {
      if (m.name == name) return &m;
    }
    return nullptr;
  }
  [[nodiscard]] SuperDomainSignature space(std::string_view name) const { return find_space(name)->signature; }

  friend bool operator==(const Document&, const Document&) = default;
};

namespace format {

/// Largest variable indices used by a set of polynomials.
struct VariableUse {
  int max_x = 0;
  int max_t = 0;
};

inline VariableUse variables_used(const std::vector<SuperPolynomial>& polys) {
  VariableUse u;
  for (const auto& p : polys) {
    for (const auto& [k, c] : p.terms()) {
      for (int i = 0; i < kMaxEvenVariables; ++i) {
        if (k.exponent(i) != 0) u.max_x = std::max(u.max_x, i + 1);
      }
      const Mask t = k.t();
      if (t != 0) u.max_t = std::max(u.max_t, 32 - std::countl_zero(t));
    }
  }
  return u;
}

/// Signature a map statement gets when none is written: from the role and
/// the bundle, else the first space, else from the variables and assigned
/// components.
inline std::pair<SuperDomainSignature, SuperDomainSignature> default_signature(
    const Document& doc, MapRole role, VariableUse used, SuperDomainSignature assigned) {
  if (doc.bundle) {
    const auto total = doc.space(doc.bundle->total);
    const auto base = doc.space(doc.bundle->base);
    const auto local = base + doc.space(doc.bundle->fiber);
    switch (role) {
      case MapRole::Coordinate:
      case MapRole::Transition: return {base, base};
      case MapRole::Projection: return {total, base};
      case MapRole::Section: return {base, total};
      case MapRole::Trivialization: return {total, local};
      case MapRole::BundleTransition:
      case MapRole::Cross: return {local, local};
      default: break;
    }
  }
  if (!doc.spaces.empty() &&
      (role == MapRole::Coordinate || role == MapRole::Transition || role == MapRole::Plain)) {
    return {doc.spaces.front().signature, doc.spaces.front().signature};
  }
  const SuperDomainSignature src{used.max_x, used.max_t};
  if (role == MapRole::Homotopy) return {src, assigned};
  const SuperDomainSignature both{std::max(src.n_even, assigned.n_even), std::max(src.n_odd, assigned.n_odd)};
  return {both, both};
}

struct Token {
  enum class Kind { Name, Int, Punct, Newline, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::Newline: return "end of line";
    case Token::Kind::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

inline Error positioned(ErrorKind kind, int line, int column, const std::string& message) {
  return Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + message);
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string s, int l, int c) { out.push_back({k, std::move(s), l, c}); };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      push(Token::Kind::Newline, "\n", line, col);
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    const int start_col = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      push(Token::Kind::Name, std::string(text.substr(i, j - i)), line, start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Token::Kind::Int, std::string(text.substr(i, j - i)), line, start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Token::Kind::Punct, "->", line, start_col);
      i += 2;
      col += 2;
      continue;
    }
    if (std::string_view("[],:;=+-*/^()'|").find(ch) != std::string_view::npos) {
      push(Token::Kind::Punct, std::string(1, ch), line, start_col);
      ++i;
      ++col;
      continue;
    }
    throw positioned(ErrorKind::SyntaxError, line, start_col,
                     "unexpected character '" + std::string(1, ch) + "'");
  }
  push(Token::Kind::End, "", line, col);
  return out;
}

/// `g3`, `x1`, `t12`: letter and index without leading zeros.
inline std::optional<std::pair<char, int>> variable_token(const Token& t) {
  if (t.kind != Token::Kind::Name || t.text.size() < 2) return std::nullopt;
  const char c = t.text[0];
  if (c != 'g' && c != 'x' && c != 't') return std::nullopt;
  if (t.text[1] == '0') return std::nullopt;
  int v = 0;
  for (std::size_t i = 1; i < t.text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) return std::nullopt;
    if (v > 100000) return std::nullopt;
    v = v * 10 + (t.text[i] - '0');
  }
  return std::make_pair(c, v);
}

/// Widest domain; parsed polynomials live here until their map's signature
/// is known.
inline constexpr SuperDomainSignature kWide{kMaxEvenVariables, kMaxOddVariables};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Document run() {
    while (true) {
      skip_newlines();
      if (peek().kind == Token::Kind::End) break;
      statement();
    }
    if (!have_algebra_) throw positioned(ErrorKind::SemanticError, peek().line, peek().column, "missing algebra declaration");
    return std::move(doc_);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool is(std::string_view text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Token::Kind::Punct || t.kind == Token::Kind::Name) && t.text == text;
  }
  void skip_newlines() {
    while (peek().kind == Token::Kind::Newline) next();
  }

  [[noreturn]] void fail_expected(const std::vector<std::string>& options) const {
    std::vector<std::string> sorted = options;
    std::sort(sorted.begin(), sorted.end());
    std::string list;
    for (std::size_t i = 0; i < sorted.size(); ++i) list += (i ? ", " : "") + sorted[i];
    throw positioned(ErrorKind::SyntaxError, peek().line, peek().column,
                     (sorted.size() == 1 ? "expected " : "expected one of ") + list + ", found " + describe(peek()));
  }
  [[noreturn]] static void semantic(const Token& at, const std::string& message) {
    throw positioned(ErrorKind::SemanticError, at.line, at.column, message);
  }

  const Token& expect(std::string_view text) {
    if (!is(text)) fail_expected({"'" + std::string(text) + "'"});
    return next();
  }
  const Token& expect_name(const char* what) {
    if (peek().kind != Token::Kind::Name) fail_expected({what});
    return next();
  }
  int expect_int(const char* what, int lo, int hi) {
    if (peek().kind != Token::Kind::Int) fail_expected({what});
    const Token& t = next();
    if (t.text.size() > 9 || std::stoi(t.text) < lo || std::stoi(t.text) > hi) {
      semantic(t, std::string(what) + " " + t.text + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return std::stoi(t.text);
  }
  void end_of_statement() {
    if (peek().kind != Token::Kind::Newline && peek().kind != Token::Kind::End) fail_expected({"end of line"});
  }
  void require_algebra(const Token& at) {
    if (!have_algebra_) semantic(at, "algebra must be declared first");
  }
  void require_fresh_name(const Token& t) {
    if (doc_.find_space(t.text) || doc_.find_chart(t.text) || doc_.find_map(t.text)) {
      semantic(t, "name " + t.text + " already declared");
    }
    if (variable_token(t)) semantic(t, "name " + t.text + " is reserved for variables");
  }

  void statement() {
    const Token& kw = peek();
    if (is("algebra")) return algebra();
    if (is("space")) return space();
    if (is("bundle")) return bundle();
    if (is("chart")) return chart();
    if (is("overlap")) return overlap();
    if (is("map")) return map_statement();
    if (is("task")) return task();
    (void)kw;
    fail_expected({"'algebra'", "'bundle'", "'chart'", "'map'", "'overlap'", "'space'", "'task'"});
  }

  void algebra() {
    const Token& kw = next();
    if (have_algebra_) semantic(kw, "algebra declared twice");
    doc_.n_generators = expect_int("INT", 0, kMaxDocumentGenerators);
    have_algebra_ = true;
    end_of_statement();
  }

  void space() {
    require_algebra(next());
    const Token& name = expect_name("NAME");
    require_fresh_name(name);
    const int ne = expect_int("INT", 0, kMaxEvenVariables);
    const int no = expect_int("INT", 0, kMaxOddVariables);
    doc_.spaces.push_back({name.text, {ne, no}});
    end_of_statement();
  }

  std::string space_ref() {
    const Token& t = expect_name("NAME");
    if (!doc_.find_space(t.text)) semantic(t, "undeclared space " + t.text);
    return t.text;
  }

  void bundle() {
    const Token& kw = next();
    require_algebra(kw);
    if (doc_.bundle) semantic(kw, "bundle declared twice");
    BundleDecl b;
    b.total = space_ref();
    b.base = space_ref();
    b.fiber = space_ref();
    const auto local = doc_.space(b.base) + doc_.space(b.fiber);
    if (local.n_even > kMaxEvenVariables || local.n_odd > kMaxOddVariables) semantic(kw, "base and fiber too large");
    doc_.bundle = b;
    end_of_statement();
  }

  void chart() {
    require_algebra(next());
    const Token& name = expect_name("NAME");
    require_fresh_name(name);
    ChartDecl c{name.text, false, false};
    if (is("semi")) {
      next();
      c.semi = true;
    }
    if (is("second")) {
      next();
      c.second = true;
    }
    doc_.charts.push_back(c);
    end_of_statement();
  }

  std::string chart_ref() {
    const Token& t = expect_name("NAME");
    if (!doc_.find_chart(t.text)) semantic(t, "undeclared chart " + t.text);
    return t.text;
  }

  void overlap() {
    const Token& kw = next();
    require_algebra(kw);
    std::vector<std::string> names{chart_ref()};
    while (peek().kind == Token::Kind::Name) names.push_back(chart_ref());
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size()) semantic(kw, "chart repeated in overlap");
    doc_.overlaps.push_back(std::move(names));
    end_of_statement();
  }

  SuperDomainSignature signature_ref() {
    if (is("(")) {
      next();
      const int ne = expect_int("INT", 0, kMaxEvenVariables);
      expect("|");
      const int no = expect_int("INT", 0, kMaxOddVariables);
      expect(")");
      return {ne, no};
    }
    if (peek().kind != Token::Kind::Name) fail_expected({"'('", "NAME"});
    return doc_.space(space_ref());
  }

  void map_statement() {
    const Token& kw = next();
    require_algebra(kw);
    const Token& name = expect_name("NAME");
    require_fresh_name(name);
    MapDecl decl;
    decl.name = name.text;
    if (is("[")) {
      next();
      decl.charts.push_back(chart_ref());
      while (is(",")) {
        next();
        decl.charts.push_back(chart_ref());
      }
      expect("]");
    }
    decl.role = default_role(decl.charts.size());
    if (is("as")) {
      next();
      const Token& r = expect_name("role");
      std::string text = r.text;
      while (is("-") && peek(1).kind == Token::Kind::Name) {
        next();
        text += "-" + next().text;
      }
      auto role = parse_role(text);
      if (!role) semantic(r, "unknown role " + text);
      decl.role = *role;
    }
    check_role(name, decl);
    std::optional<std::pair<SuperDomainSignature, SuperDomainSignature>> sig;
    if (!is(":")) {
      const SuperDomainSignature src = signature_ref();
      expect("->");
      sig = std::make_pair(src, signature_ref());
    }
    expect(":");
    // Components, in source order of appearance.
    std::vector<std::pair<std::pair<char, int>, SuperPolynomial>> assigns;
    std::vector<Token> where;
    while (true) {
      const Token& var = peek();
      auto v = variable_token(var);
      if (!v || v->first == 'g') fail_expected({"component name"});
      next();
      expect("'");
      expect("=");
      for (const auto& a : assigns) {
        if (a.first == *v) semantic(var, "component " + var.text + "' assigned twice");
      }
      assigns.emplace_back(*v, expr());
      where.push_back(var);
      if (!is(";")) break;
      next();
      skip_newlines();
    }
    end_of_statement();

    SuperDomainSignature assigned{0, 0};
    std::vector<SuperPolynomial> polys;
    for (const auto& [v, p] : assigns) {
      (v.first == 'x' ? assigned.n_even : assigned.n_odd) =
          std::max(v.first == 'x' ? assigned.n_even : assigned.n_odd, v.second);
      polys.push_back(p);
    }
    const VariableUse used = variables_used(polys);
    if (!sig) sig = default_signature(doc_, decl.role, used, assigned);
    const auto [src, dst] = *sig;
    if (used.max_x > src.n_even || used.max_t > src.n_odd) {
      semantic(name, "map " + decl.name + " uses variables outside its source " + src.to_string());
    }
    std::vector<std::optional<SuperPolynomial>> comps(static_cast<std::size_t>(dst.size()));
    for (std::size_t i = 0; i < assigns.size(); ++i) {
      const auto [c, idx] = assigns[i].first;
      const int limit = c == 'x' ? dst.n_even : dst.n_odd;
      if (idx > limit) semantic(where[i], "component " + where[i].text + "' outside target " + dst.to_string());
      comps[static_cast<std::size_t>(c == 'x' ? idx - 1 : dst.n_even + idx - 1)] = assigns[i].second.on_domain(src);
    }
    std::vector<SuperPolynomial> final_comps;
    for (int k = 0; k < dst.size(); ++k) {
      if (!comps[static_cast<std::size_t>(k)]) {
        semantic(name, "component " + SuperMap::coordinate_name(dst, k) + "' of " + decl.name + " is unassigned");
      }
      final_comps.push_back(*comps[static_cast<std::size_t>(k)]);
    }
    decl.map = SuperMap(doc_.n_generators, src, dst, std::move(final_comps));
    const int bad = decl.map.first_parity_violation();
    if (bad >= 0) {
      semantic(name, "component " + SuperMap::coordinate_name(dst, bad) + "' of " + decl.name + " has the wrong parity");
    }
    doc_.maps.push_back(std::move(decl));
  }

  void check_role(const Token& at, const MapDecl& decl) {
    if (decl.charts.size() != role_arity(decl.role)) {
      semantic(at, std::string("role ") + to_string(decl.role) + " takes " + std::to_string(role_arity(decl.role)) +
                       " chart(s)");
    }
    const bool bundle_role = decl.role == MapRole::Projection || decl.role == MapRole::Section ||
                             decl.role == MapRole::Trivialization || decl.role == MapRole::BundleTransition ||
                             decl.role == MapRole::Cross;
    if (bundle_role && !doc_.bundle) semantic(at, std::string("role ") + to_string(decl.role) + " needs a bundle");
    std::vector<bool> second;
    for (const auto& c : decl.charts) second.push_back(doc_.find_chart(c)->second);
    if (decl.role == MapRole::Cross && second[0] == second[1]) semantic(at, "cross map must join the two covers");
    if (decl.role == MapRole::BundleTransition && second[0] != second[1]) {
      semantic(at, "bundle transition between covers; use role cross");
    }
    if ((decl.role == MapRole::Coordinate || decl.role == MapRole::Transition || decl.role == MapRole::Section ||
         decl.role == MapRole::Trivialization) &&
        std::find(second.begin(), second.end(), true) != second.end()) {
      semantic(at, std::string("role ") + to_string(decl.role) + " on a chart of the second cover");
    }
    if ((decl.role == MapRole::Transition || decl.role == MapRole::BundleTransition) &&
        decl.charts[0] != decl.charts[1]) {
      bool declared = false;
      for (const auto& o : doc_.overlaps) {
        declared = declared || (std::find(o.begin(), o.end(), decl.charts[0]) != o.end() &&
                                std::find(o.begin(), o.end(), decl.charts[1]) != o.end());
      }
      if (!declared) semantic(at, "charts " + decl.charts[0] + " and " + decl.charts[1] + " do not overlap");
    }
  }

  // Expressions are built on the widest domain.
  SuperPolynomial constant(const Rational& r) const { return SuperPolynomial::constant(doc_.n_generators, kWide, r); }

  bool starts_factor(std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == Token::Kind::Int || is("(", k) || variable_token(t).has_value();
  }

  SuperPolynomial expr() {
    SuperPolynomial acc(doc_.n_generators, kWide);
    bool negative = false;
    if (is("+") || is("-")) negative = next().text == "-";
    while (true) {
      SuperPolynomial t = term();
      acc = negative ? acc - t : acc + t;
      if (!is("+") && !is("-")) break;
      negative = next().text == "-";
    }
    return acc;
  }

  SuperPolynomial term() {
    if (!starts_factor()) fail_expected({"'('", "INT", "variable"});
    SuperPolynomial acc = constant(Rational(1));
    Mask seen_g = 0;
    Mask seen_t = 0;
    while (true) {
      const Token& at = peek();
      SuperPolynomial f = factor(seen_g, seen_t);
      try {
        acc = acc * f;
      } catch (const Error& err) {
        semantic(at, err.what());
      }
      if (is("*") && starts_factor(1)) {
        next();
        continue;
      }
      if (starts_factor()) continue;
      break;
    }
    return acc;
  }

  SuperPolynomial factor(Mask& seen_g, Mask& seen_t) {
    const Token& t = peek();
    SuperPolynomial base(doc_.n_generators, kWide);
    bool atom_odd = false;
    if (t.kind == Token::Kind::Int) {
      next();
      mpz_class num(t.text);
      mpz_class den(1);
      if (is("/")) {
        next();
        if (peek().kind != Token::Kind::Int) fail_expected({"INT"});
        const Token& d = next();
        den = mpz_class(d.text);
        if (den == 0) semantic(d, "zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      base = constant(r);
    } else if (is("(")) {
      next();
      base = expr();
      expect(")");
    } else {
      const auto v = variable_token(t);
      next();
      const auto [c, idx] = *v;
      if (c == 'g') {
        if (idx > doc_.n_generators) {
          semantic(t, "generator " + t.text + " exceeds algebra size " + std::to_string(doc_.n_generators));
        }
        if ((seen_g >> (idx - 1)) & 1u) semantic(t, "repeated odd generator " + t.text);
        seen_g |= Mask{1} << (idx - 1);
        base = SuperPolynomial::constant(doc_.n_generators, kWide, GrassmannElement::generator(doc_.n_generators, idx));
        atom_odd = true;
      } else if (c == 'x') {
        if (idx > kMaxEvenVariables) semantic(t, "even variable " + t.text + " beyond x" + std::to_string(kMaxEvenVariables));
        base = SuperPolynomial::even_variable(doc_.n_generators, kWide, idx);
      } else {
        if (idx > kMaxOddVariables) semantic(t, "odd variable " + t.text + " beyond t" + std::to_string(kMaxOddVariables));
        if ((seen_t >> (idx - 1)) & 1u) semantic(t, "repeated odd variable " + t.text);
        seen_t |= Mask{1} << (idx - 1);
        base = SuperPolynomial::odd_variable(doc_.n_generators, kWide, idx);
        atom_odd = true;
      }
    }
    if (is("^")) {
      next();
      const Token& e = peek();
      const int k = expect_int("INT", 0, kMaxExponent);
      if (atom_odd && k >= 2) semantic(e, "repeated odd factor " + t.text + "^" + e.text);
      try {
        base = pow(base, k);
      } catch (const Error& err) {
        semantic(e, err.what());
      }
    }
    return base;
  }

  GrassmannElement constant_expr() {
    const Token& at = peek();
    const SuperPolynomial p = expr();
    if (!p.is_constant()) semantic(at, "expected a constant of the algebra");
    return p.constant_value();
  }

  std::string map_ref() {
    const Token& t = expect_name("NAME");
    if (!doc_.find_map(t.text)) semantic(t, "undeclared map " + t.text);
    return t.text;
  }

  std::optional<int> optional_degree() {
    if (!is("degree")) return std::nullopt;
    next();
    return expect_int("INT", 0, kMaxExponent);
  }

  Rational signed_rational() {
    bool neg = false;
    if (is("-") || is("+")) neg = next().text == "-";
    if (peek().kind != Token::Kind::Int) fail_expected({"INT"});
    mpz_class num(next().text);
    mpz_class den(1);
    if (is("/")) {
      next();
      if (peek().kind != Token::Kind::Int) fail_expected({"INT"});
      const Token& d = next();
      den = mpz_class(d.text);
      if (den == 0) semantic(d, "zero denominator");
    }
    Rational r(neg ? mpz_class(-num) : num, den);
    r.canonicalize();
    return r;
  }

  void task() {
    const Token& kw = next();
    require_algebra(kw);
    Task t;
    t.line = kw.line;
    if (is("check")) {
      next();
      t.kind = Task::Kind::Check;
      while (true) {
        if (is("n_max") && !t.n_max) {
          next();
          t.n_max = expect_int("INT", 1, 16);
        } else if (is("reflexive") && !t.reflexive) {
          next();
          t.reflexive = true;
        } else {
          break;
        }
      }
    } else if (is("solve")) {
      next();
      if (is("map")) {
        next();
        t.kind = Task::Kind::SolveMap;
        t.inner = map_ref();
        expect("->");
        t.target = map_ref();
        t.degree = optional_degree();
      } else {
        t.kind = Task::Kind::Solve;
        t.coefficient = constant_expr();
        if (is("*")) next();
        if (!is("X")) fail_expected({"'X'"});
        next();
        expect("=");
        t.rhs = constant_expr();
      }
    } else if (is("berezinian")) {
      next();
      t.kind = Task::Kind::Berezinian;
      t.map = map_ref();
      if (is("at")) {
        next();
        t.at.push_back(signed_rational());
        while (is(",")) {
          next();
          t.at.push_back(signed_rational());
        }
      }
    } else if (is("semigroup")) {
      next();
      t.kind = Task::Kind::Semigroup;
      t.chart = chart_ref();
      expect("n_max");
      t.n_max = expect_int("INT", 1, 16);
    } else if (is("homotopy")) {
      next();
      if (is("average")) {
        next();
        t.kind = Task::Kind::HomotopyAverage;
        t.parameter = ParameterKind::Odd;
      } else {
        t.kind = Task::Kind::Homotopy;
        t.map = map_ref();
        if (is("even")) {
          t.parameter = ParameterKind::Even;
        } else if (is("odd")) {
          t.parameter = ParameterKind::Odd;
        } else {
          fail_expected({"'even'", "'odd'"});
        }
        next();
      }
      t.f = map_ref();
      t.g = map_ref();
      expect("from");
      t.start = constant_expr();
      expect("to");
      t.end = constant_expr();
      if (t.kind == Task::Kind::HomotopyAverage) t.degree = optional_degree();
    } else {
      fail_expected({"'berezinian'", "'check'", "'homotopy'", "'semigroup'", "'solve'"});
    }
    end_of_statement();
    doc_.tasks.push_back(std::move(t));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Document doc_;
  bool have_algebra_ = false;
};

inline std::string signature_literal(SuperDomainSignature s) {
  return "(" + std::to_string(s.n_even) + "|" + std::to_string(s.n_odd) + ")";
}

inline std::string constant_text(const GrassmannElement& e) {
  const std::string s = e.to_string();
  return e.terms().size() > 1 ? "(" + s + ")" : s;
}

}  // namespace format

/// Parses a document; failures are SyntaxError or SemanticError with a
/// `line:column:` prefix.
inline Document parse(std::string_view text) { return format::Parser(text).run(); }

/// Canonical text: algebra, spaces, bundle, charts, overlaps, maps, tasks.
inline std::string serialize(const Document& doc) {
  std::string out = "algebra " + std::to_string(doc.n_generators) + "\n";
  for (const auto& s : doc.spaces) {
    out += "space " + s.name + " " + std::to_string(s.signature.n_even) + " " + std::to_string(s.signature.n_odd) + "\n";
  }
  if (doc.bundle) out += "bundle " + doc.bundle->total + " " + doc.bundle->base + " " + doc.bundle->fiber + "\n";
  for (const auto& c : doc.charts) {
    out += "chart " + c.name + (c.semi ? " semi" : "") + (c.second ? " second" : "") + "\n";
  }
  for (const auto& o : doc.overlaps) {
    out += "overlap";
    for (const auto& n : o) out += " " + n;
    out += "\n";
  }
  for (const auto& m : doc.maps) {
    out += "map " + m.name;
    if (!m.charts.empty()) {
      out += "[";
      for (std::size_t i = 0; i < m.charts.size(); ++i) out += (i ? "," : "") + m.charts[i];
      out += "]";
    }
    if (m.role != default_role(m.charts.size())) out += std::string(" as ") + to_string(m.role);
    const auto def = format::default_signature(doc, m.role, format::variables_used(m.map.components()),
                                               m.map.target());
    if (!(def.first == m.map.source()) || !(def.second == m.map.target())) {
      out += " " + format::signature_literal(m.map.source()) + " -> " + format::signature_literal(m.map.target());
    }
    out += ": " + m.map.to_string() + "\n";
  }
  for (const auto& t : doc.tasks) {
    out += "task ";
    switch (t.kind) {
      case Task::Kind::Check:
        out += "check";
        if (t.n_max) out += " n_max " + std::to_string(*t.n_max);
        if (t.reflexive) out += " reflexive";
        break;
      case Task::Kind::Solve:
        out += "solve " + format::constant_text(*t.coefficient) + " * X = " + t.rhs->to_string();
        break;
      case Task::Kind::SolveMap:
        out += "solve map " + t.inner + " -> " + t.target;
        if (t.degree) out += " degree " + std::to_string(*t.degree);
        break;
      case Task::Kind::Berezinian:
        out += "berezinian " + t.map;
        for (std::size_t i = 0; i < t.at.size(); ++i) out += (i ? ", " : " at ") + to_string(t.at[i]);
        break;
      case Task::Kind::Semigroup:
        out += "semigroup " + t.chart + " n_max " + std::to_string(*t.n_max);
        break;
      case Task::Kind::Homotopy:
      case Task::Kind::HomotopyAverage:
        out += "homotopy ";
        out += t.kind == Task::Kind::HomotopyAverage ? std::string("average")
                                                     : t.map + " " + to_string(t.parameter);
        out += " " + t.f + " " + t.g + " from " + format::constant_text(*t.start) + " to " +
               format::constant_text(*t.end);
        if (t.degree) out += " degree " + std::to_string(*t.degree);
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace semi

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "semi/report.hpp"
#include "semi/semi.hpp"

namespace semi::cli {

enum ExitCode { kOk = 0, kFailed = 1, kInputError = 2, kInternalError = 3 };

inline bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotNice:
    case ErrorKind::OddBlockSingular:
    case ErrorKind::NotInvertible:
    case ErrorKind::NotBasePreserving:
    case ErrorKind::NonlinearUnknown: return false;
    default: return true;
  }
}

struct Options {
  std::string file;
  std::optional<int> n_max;
  bool reflexive = false;
  bool machine = false;
  std::string map;
  std::string at;
  std::string chart;
};

inline std::vector<Rational> parse_point(const std::string& text) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rational r;
    if (item.empty() || item.find_first_not_of("+-0123456789/") != std::string::npos ||
        r.set_str(item[0] == '+' ? item.substr(1) : item, 10) != 0 || r.get_den() == 0) {
      throw Error(ErrorKind::InvalidArgument, "bad coordinate '" + item + "' in --at");
    }
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

inline void add_all(ReportSection& s, std::vector<RelationReport> rs) {
  for (auto& r : rs) s.relations.push_back(std::move(r));
}

inline void run_check(const Document& doc, const Options& opt, Report& report) {
  int n_max = 4;
  bool reflexive = opt.reflexive;
  for (const auto& t : doc.tasks) {
    if (t.kind != Task::Kind::Check) continue;
    if (t.n_max) n_max = *t.n_max;
    reflexive = reflexive || t.reflexive;
  }
  if (opt.n_max) n_max = *opt.n_max;
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "--n-max must be at least 2");

  const SemiAtlas atlas = build_atlas(doc);
  if (atlas.chart_count() > 0) {
    add_all(report.section("gluing"), check_gluing(atlas, true));
    add_all(report.section("tower relations"), check_tower_relations(atlas, n_max));
    if (reflexive) add_all(report.section("reflexivity"), check_reflexivity(atlas, n_max));
    add_all(report.section("tower identity laws"), check_tower_identity_laws(atlas, n_max));
    report.scalars.emplace_back("obstructedness", std::to_string(obstructedness_degree(atlas, n_max)));
    const NicenessResult nice = is_nice(atlas, n_max);
    report.scalars.emplace_back("nice", nice.nice ? "yes" : "no");
    if (nice.witness) {
      const auto& w = *nice.witness;
      auto join = [](const std::vector<std::string>& v) {
        std::string o;
        for (std::size_t i = 0; i < v.size(); ++i) o += (i ? "," : "") + v[i];
        return o;
      };
      report.scalars.emplace_back("nice witness", w.chart + " n=" + std::to_string(w.length) + " cycles " +
                                                      join(w.first_cycle) + " and " + join(w.second_cycle));
    }
    ReportSection& kinds = report.section("charts");
    for (const auto& c : atlas.charts()) {
      if (atlas.coordinate_map(c) == nullptr) continue;
      kinds.values.emplace_back(c, is_semi_chart(atlas, c) ? "semi-chart" : "chart");
    }
  }
  if (!doc.bundle) return;
  const SemiBundle bundle = build_bundle(doc);
  const SuperMap* pi = bundle.projection();
  ReportSection& sec = report.section("semi-sections");
  for (const auto& c : atlas.charts()) {
    const SuperMap* s = bundle.section(c);
    if (s == nullptr) continue;
    if (pi == nullptr) {
      sec.relations.push_back(skipped("semi-section", {c}, "projection is absent"));
      continue;
    }
    auto [a, b] = check_semi_section(*pi, *s, reflexive);
    a.cycle = {c};
    b.cycle = {c};
    sec.relations.push_back(std::move(a));
    sec.relations.push_back(std::move(b));
  }
  ReportSection& triv = report.section("trivializations");
  for (const auto& c : atlas.charts()) {
    if (bundle.trivialization(c) == nullptr) continue;
    if (pi == nullptr) {
      triv.relations.push_back(skipped("trivialization", {c}, "projection is absent"));
    } else {
      triv.relations.push_back(check_local_trivialization(bundle, c));
    }
  }
  ReportSection& compat = report.section("section compatibility");
  for (int a = 0; a < atlas.chart_count(); ++a) {
    for (int b = a + 1; b < atlas.chart_count(); ++b) {
      if (!atlas.overlapping({a, b})) continue;
      const auto& na = atlas.charts()[static_cast<std::size_t>(a)];
      const auto& nb = atlas.charts()[static_cast<std::size_t>(b)];
      const SuperMap* maps[] = {bundle.section(na), bundle.section(nb), bundle.trivialization(na),
                                bundle.trivialization(nb)};
      if (std::find(std::begin(maps), std::end(maps), nullptr) != std::end(maps)) {
        compat.relations.push_back(skipped("section-compat", {na, nb}, "section or trivialization absent"));
        continue;
      }
      compat.relations.push_back(compare("section-compat", {na, nb}, compose(*maps[2], *maps[0]),
                                         compose(*maps[3], *maps[1])));
    }
  }
  add_all(report.section("bundle gluing"), check_bundle_gluing(bundle));
  {
    CycleEvaluator ev(bundle.transition_atlas());
    ReportSection& bt = report.section("bundle transitions");
    add_all(bt, check_cycles(ev, n_max, false, "bundle-tower"));
    if (reflexive) add_all(bt, check_cycles(ev, n_max, true, "bundle-reflexive"));
  }
  if (has_second_cover(doc)) {
    add_all(report.section("cover agreement"),
            check_cover_agreement(bundle, build_second_cover(doc), build_cross_table(doc), reflexive));
  }
}

inline void describe_solutions(ReportSection& s, const std::optional<SolutionSet<GrassmannElement>>& sol) {
  if (!sol) {
    s.values.emplace_back("result", "no solution");
    return;
  }
  s.values.emplace_back("particular", sol->particular.to_string());
  s.values.emplace_back("kernel dimension", std::to_string(sol->dimension()));
  for (std::size_t i = 0; i < sol->kernel_basis.size(); ++i) {
    s.values.emplace_back("kernel " + std::to_string(i + 1), sol->kernel_basis[i].to_string());
  }
}

inline void run_solve(const Document& doc, Report& report) {
  int k = 0;
  for (const auto& t : doc.tasks) {
    if (t.kind == Task::Kind::Solve) {
      ReportSection& s = report.section("solve " + std::to_string(++k));
      s.values.emplace_back("equation", format::constant_text(*t.coefficient) + " * X = " + t.rhs->to_string());
      const auto sol = solve_linear(*t.coefficient, *t.rhs);
      describe_solutions(s, sol);
      report.unanswered = report.unanswered || !sol;
    } else if (t.kind == Task::Kind::SolveMap) {
      ReportSection& s = report.section("solve " + std::to_string(++k));
      const SuperMap& inner = doc.find_map(t.inner)->map;
      const SuperMap& rhs = doc.find_map(t.target)->map;
      const int degree = t.degree ? *t.degree : std::max({inner.degree(), rhs.degree(), 1}) + doc.n_generators;
      s.values.emplace_back("equation", "X o " + t.inner + " = " + t.target);
      s.values.emplace_back("degree bound", std::to_string(degree));
      const auto sol = solve_outer(inner, rhs, degree);
      if (!sol) {
        s.values.emplace_back("result", "no solution");
        report.unanswered = true;
        continue;
      }
      s.values.emplace_back("particular", sol->particular.to_string());
      s.values.emplace_back("kernel dimension", std::to_string(sol->dimension()));
      for (std::size_t i = 0; i < sol->kernel_basis.size(); ++i) {
        s.values.emplace_back("kernel " + std::to_string(i + 1), sol->kernel_basis[i].to_string());
      }
    }
  }
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "document has no solve task");
}

inline void berezinian_section(Report& report, const Document& doc, const std::string& name,
                               const std::vector<Rational>& at) {
  const MapDecl* m = doc.find_map(name);
  if (m == nullptr) throw Error(ErrorKind::MissingMap, "no map named " + name);
  const SuperMap& f = m->map;
  ReportSection& s = report.section("berezinian " + name);
  const SuperPoint p = at.empty() ? SuperPoint::origin(f.n_generators(), f.source())
                                  : SuperPoint::at(f.n_generators(), f.source(), at);
  std::string where;
  for (std::size_t i = 0; i < at.size(); ++i) where += (i ? "," : "") + to_string(at[i]);
  s.values.emplace_back("at", at.empty() ? "origin" : where);
  const BerezinianResult r = berezinian_details(f, p);
  s.values.emplace_back("berezinian", r.value.to_string());
  s.values.emplace_back("orientation", orientation_class(r).to_string());
}

inline void run_berezinian(const Document& doc, const Options& opt, Report& report) {
  if (!opt.map.empty()) {
    berezinian_section(report, doc, opt.map, parse_point(opt.at));
    return;
  }
  int k = 0;
  for (const auto& t : doc.tasks) {
    if (t.kind != Task::Kind::Berezinian) continue;
    ++k;
    berezinian_section(report, doc, t.map, t.at);
  }
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "give --map or a berezinian task");
}

inline void semigroup_section(Report& report, const SemiAtlas& atlas, const std::string& chart, int n_max) {
  ReportSection& s = report.section("semigroup " + chart);
  TowerSemigroup sg;
  try {
    sg = tower_semigroup(atlas, chart, n_max);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotNice) throw;
    s.values.emplace_back("result", e.what());
    report.unanswered = true;
    return;
  }
  for (std::size_t i = 0; i < sg.lengths.size(); ++i) {
    s.values.emplace_back("e" + std::to_string(sg.lengths[i]), "element " + std::to_string(sg.element_of[i] + 1));
  }
  for (std::size_t i = 0; i < sg.elements.size(); ++i) {
    s.values.emplace_back("element " + std::to_string(i + 1), sg.elements[i].to_string());
  }
  s.values.emplace_back("index", sg.index ? std::to_string(*sg.index) : "undetermined");
  s.values.emplace_back("period", sg.period ? std::to_string(*sg.period) : "undetermined");
  for (std::size_t i = 0; i < sg.table.size(); ++i) {
    std::string row;
    for (std::size_t j = 0; j < sg.table[i].size(); ++j) {
      row += (j ? " " : "") + (sg.table[i][j] ? std::to_string(*sg.table[i][j] + 1) : std::string("?"));
    }
    s.values.emplace_back("table row " + std::to_string(i + 1), row);
  }
  s.relations = sg.compatibility;
}

inline void run_semigroup(const Document& doc, const Options& opt, Report& report) {
  const SemiAtlas atlas = build_atlas(doc);
  if (!opt.chart.empty()) {
    semigroup_section(report, atlas, opt.chart, opt.n_max.value_or(4));
    return;
  }
  int k = 0;
  for (const auto& t : doc.tasks) {
    if (t.kind != Task::Kind::Semigroup) continue;
    ++k;
    semigroup_section(report, atlas, t.chart, opt.n_max.value_or(*t.n_max));
  }
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "give --chart or a semigroup task");
}

inline void run_homotopy(const Document& doc, Report& report) {
  int k = 0;
  for (const auto& t : doc.tasks) {
    if (t.kind != Task::Kind::Homotopy && t.kind != Task::Kind::HomotopyAverage) continue;
    ++k;
    const SuperMap& f = doc.find_map(t.f)->map;
    const SuperMap& g = doc.find_map(t.g)->map;
    if (t.kind == Task::Kind::Homotopy) {
      ReportSection& s = report.section("homotopy " + t.map);
      const SemiHomotopy h(doc.find_map(t.map)->map, t.parameter, *t.start, *t.end);
      s.values.emplace_back("parameter", to_string(t.parameter));
      s.values.emplace_back("delta", h.delta().to_string());
      auto [a, b] = t.parameter == ParameterKind::Even ? check_even_semihomotopy(h, f, g)
                                                       : check_odd_semihomotopy(h, f, g);
      s.relations.push_back(std::move(a));
      s.relations.push_back(std::move(b));
      continue;
    }
    ReportSection& s = report.section("homotopy average " + t.f + " " + t.g);
    const auto sol = t.degree ? odd_average_solutions(f, g, *t.start, *t.end, *t.degree)
                              : odd_average_solutions(f, g, *t.start, *t.end);
    if (!sol) {
      s.values.emplace_back("result", "no solution");
      report.unanswered = true;
      continue;
    }
    s.values.emplace_back("gamma", sol->particular.to_string());
    s.values.emplace_back("kernel dimension", std::to_string(sol->dimension()));
    for (std::size_t i = 0; i < sol->kernel_basis.size(); ++i) {
      s.values.emplace_back("kernel " + std::to_string(i + 1), sol->kernel_basis[i].to_string());
    }
    const SemiHomotopy h(sol->particular, ParameterKind::Odd, *t.start, *t.end);
    auto [a, b] = check_odd_semihomotopy(h, f, g);
    s.relations.push_back(std::move(a));
    s.relations.push_back(std::move(b));
  }
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "document has no homotopy task");
}

/// Runs one command line (program name excluded). Reports go to `out`,
/// diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checker for semi-supermanifold structures", "semi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options opt;
  auto* check = app.add_subcommand("check", "Verify every relation of an atlas or bundle");
  check->add_option("file", opt.file, "Input document")->required();
  check->add_option("--n-max", opt.n_max, "Longest cycle");
  check->add_flag("--reflexive", opt.reflexive, "Also check the reflexive relations");
  auto* solve = app.add_subcommand("solve", "Run the solve tasks of a document");
  solve->add_option("file", opt.file, "Input document")->required();
  auto* ber = app.add_subcommand("berezinian", "Berezinian and orientation class of a map");
  ber->add_option("file", opt.file, "Input document")->required();
  ber->add_option("--map", opt.map, "Map name");
  ber->add_option("--at", opt.at, "Even coordinates, comma separated");
  auto* sg = app.add_subcommand("semigroup", "Tower semigroup at a chart");
  sg->add_option("file", opt.file, "Input document")->required();
  sg->add_option("--chart", opt.chart, "Chart name");
  sg->add_option("--n-max", opt.n_max, "Longest cycle");
  auto* hom = app.add_subcommand("homotopy", "Run the homotopy tasks of a document");
  hom->add_option("file", opt.file, "Input document")->required();
  for (auto* sub : {check, solve, ber, sg, hom}) sub->add_flag("--machine", opt.machine, "Line-oriented output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    std::ifstream in(opt.file, std::ios::binary);
    if (!in) {
      err << "semi: cannot read " << opt.file << "\n";
      return kInputError;
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Report report;
    report.input = opt.file;
    report.digest = sha256_hex(text);
    Document doc;
    try {
      doc = parse(text);
    } catch (const Error& e) {
      err << opt.file << ": " << e.what() << "\n";
      return kInputError;
    }
    if (check->parsed()) run_check(doc, opt, report);
    if (solve->parsed()) run_solve(doc, report);
    if (ber->parsed()) run_berezinian(doc, opt, report);
    if (sg->parsed()) run_semigroup(doc, opt, report);
    if (hom->parsed()) run_homotopy(doc, report);
    if (opt.machine) {
      out << report.machine();
    } else {
      out << report.human();
    }
    return report.exit_code();
  } catch (const Error& e) {
    err << "semi: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kInputError : kFailed;
  } catch (const std::exception& e) {
    err << "semi: internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace semi::cli

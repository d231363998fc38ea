#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/map_equation.hpp"
#include "semi/semiatlas.hpp"
#include "semi/supermap.hpp"

namespace semi {

/// Coordinate index of a summand coordinate inside first ⊕ second, where the
/// sum lists first evens, second evens, first odds, second odds.
inline int sum_index(SuperDomainSignature first, SuperDomainSignature second, bool in_second, int k) {
  const SuperDomainSignature part = in_second ? second : first;
  if (k < part.n_even) return (in_second ? first.n_even : 0) + k;
  return first.n_even + second.n_even + (in_second ? first.n_odd : 0) + (k - part.n_even);
}

/// Canonical projection first ⊕ second -> first (or -> second).
inline SuperMap sum_projection(int n, SuperDomainSignature first, SuperDomainSignature second, bool to_second) {
  const SuperDomainSignature sum = first + second;
  const SuperDomainSignature part = to_second ? second : first;
  std::vector<SuperPolynomial> comps;
  for (int k = 0; k < part.size(); ++k) {
    comps.push_back(SuperPolynomial::coordinate(n, sum, sum_index(first, second, to_second, k)));
  }
  return SuperMap(n, sum, part, std::move(comps));
}

/// E with projection onto a base atlas M, fiber F, sections s_a : M -> E,
/// trivializations l_a : E -> M ⊕ F and transitions L_ab on M ⊕ F.
class SemiBundle {
 public:
  SemiBundle() = default;
  SemiBundle(SemiAtlas base, SuperDomainSignature total, SuperDomainSignature fiber)
      : base_(std::move(base)),
        total_(total),
        fiber_(fiber),
        transitions_(base_.n_generators(), base_.signature() + fiber) {
    for (const auto& c : base_.charts()) transitions_.add_chart(c, base_.declared_semi(c));
    for (const auto& o : base_.overlaps()) transitions_.add_overlap(o);
  }

  [[nodiscard]] int n_generators() const { return base_.n_generators(); }
  [[nodiscard]] const SemiAtlas& base() const { return base_; }
  [[nodiscard]] SemiAtlas& base() { return base_; }
  [[nodiscard]] SuperDomainSignature total_signature() const { return total_; }
  [[nodiscard]] SuperDomainSignature base_signature() const { return base_.signature(); }
  [[nodiscard]] SuperDomainSignature fiber_signature() const { return fiber_; }
  [[nodiscard]] SuperDomainSignature local_signature() const { return base_.signature() + fiber_; }

  void set_projection(SuperMap pi) {
    require(pi, total_, base_signature(), "projection");
    projection_ = std::move(pi);
  }
  [[nodiscard]] const SuperMap* projection() const { return projection_ ? &*projection_ : nullptr; }

  void set_section(const std::string& chart, SuperMap s) {
    (void)base_.chart_index(chart);
    require(s, base_signature(), total_, "section of " + chart);
    sections_[chart] = std::move(s);
  }
  [[nodiscard]] const SuperMap* section(const std::string& chart) const { return find(sections_, chart); }

  void set_trivialization(const std::string& chart, SuperMap lambda) {
    (void)base_.chart_index(chart);
    require(lambda, total_, local_signature(), "trivialization of " + chart);
    trivializations_[chart] = std::move(lambda);
  }
  [[nodiscard]] const SuperMap* trivialization(const std::string& chart) const {
    return find(trivializations_, chart);
  }

  void set_transition(const std::string& from, const std::string& to, SuperMap lambda) {
    transitions_.set_transition(from, to, std::move(lambda));
  }
  [[nodiscard]] const SuperMap* transition(const std::string& from, const std::string& to) const {
    return transitions_.transition(from, to);
  }
  /// The bundle transitions as an atlas on M ⊕ F with the charts of M.
  [[nodiscard]] const SemiAtlas& transition_atlas() const { return transitions_; }

 private:
  void require(const SuperMap& f, SuperDomainSignature src, SuperDomainSignature dst, const std::string& what) const {
    if (f.n_generators() != n_generators()) throw Error(ErrorKind::AlgebraMismatch, what + " from another algebra");
    if (!(f.source() == src) || !(f.target() == dst)) {
      throw Error(ErrorKind::SignatureMismatch, what + " must map " + src.to_string() + " -> " + dst.to_string() +
                                                    ", got " + f.source().to_string() + " -> " + f.target().to_string());
    }
  }
  static const SuperMap* find(const std::map<std::string, SuperMap>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
  }

  SemiAtlas base_;
  SuperDomainSignature total_;
  SuperDomainSignature fiber_;
  std::optional<SuperMap> projection_;
  std::map<std::string, SuperMap> sections_;
  std::map<std::string, SuperMap> trivializations_;
  SemiAtlas transitions_;
};

/// pi o s o pi = pi, and s o pi o s = s when `reflexive` (skipped otherwise).
inline std::pair<RelationReport, RelationReport> check_semi_section(const SuperMap& pi, const SuperMap& s,
                                                                     bool reflexive = true) {
  if (!(s.target() == pi.source()) || !(pi.target() == s.source())) {
    throw Error(ErrorKind::SignatureMismatch, "section " + s.source().to_string() + " -> " + s.target().to_string() +
                                                  " does not invert the direction of " + pi.source().to_string() +
                                                  " -> " + pi.target().to_string());
  }
  RelationReport first = compare("semi-section", {}, compose(pi, compose(s, pi)), pi);
  RelationReport second = reflexive ? compare("reflexive-semi-section", {}, compose(s, compose(pi, s)), s)
                                    : skipped("reflexive-semi-section", {}, "not requested");
  return {std::move(first), std::move(second)};
}

/// pr_M o l_a = pi.
inline RelationReport check_local_trivialization(const SemiBundle& bundle, const std::string& chart) {
  const SuperMap* lambda = bundle.trivialization(chart);
  if (lambda == nullptr) throw Error(ErrorKind::MissingMap, "trivialization of " + chart + " is absent");
  if (bundle.projection() == nullptr) throw Error(ErrorKind::MissingMap, "projection is absent");
  const SuperMap pr = sum_projection(bundle.n_generators(), bundle.base_signature(), bundle.fiber_signature(), false);
  return compare("trivialization", {chart}, compose(pr, *lambda), *bundle.projection());
}

/// l_a o s_a = l_b o s_b for every overlapping pair a < b.
inline std::vector<RelationReport> check_section_compatibility(const SemiBundle& bundle) {
  const SemiAtlas& base = bundle.base();
  std::vector<RelationReport> out;
  for (int a = 0; a < base.chart_count(); ++a) {
    for (int b = a + 1; b < base.chart_count(); ++b) {
      if (!base.overlapping({a, b})) continue;
      const std::string& na = base.charts()[static_cast<std::size_t>(a)];
      const std::string& nb = base.charts()[static_cast<std::size_t>(b)];
      for (const auto& c : {na, nb}) {
        if (bundle.section(c) == nullptr) throw Error(ErrorKind::MissingMap, "section of " + c + " is absent");
        if (bundle.trivialization(c) == nullptr) {
          throw Error(ErrorKind::MissingMap, "trivialization of " + c + " is absent");
        }
      }
      out.push_back(compare("section-compat", {na, nb}, compose(*bundle.trivialization(na), *bundle.section(na)),
                            compose(*bundle.trivialization(nb), *bundle.section(nb))));
    }
  }
  return out;
}

/// L_ab o l_b = l_a for every stored transition.
inline std::vector<RelationReport> check_bundle_gluing(const SemiBundle& bundle) {
  const SemiAtlas& t = bundle.transition_atlas();
  std::vector<RelationReport> out;
  for (const auto& [key, lambda] : t.transitions()) {
    const std::string& a = t.charts()[static_cast<std::size_t>(key.first)];
    const std::string& b = t.charts()[static_cast<std::size_t>(key.second)];
    const SuperMap* la = bundle.trivialization(a);
    const SuperMap* lb = bundle.trivialization(b);
    if (la == nullptr || lb == nullptr) {
      out.push_back(skipped("bundle-gluing", {a, b}, "trivialization of " + (la == nullptr ? a : b) + " is absent"));
      continue;
    }
    out.push_back(compare("bundle-gluing", {a, b}, compose(lambda, *lb), *la));
  }
  return out;
}

/// Tower and reflexive relations of the L_ab table.
inline std::vector<RelationReport> check_bundle_transitions(const SemiBundle& bundle, int n_max) {
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 2");
  CycleEvaluator ev(bundle.transition_atlas());
  std::vector<RelationReport> out = check_cycles(ev, n_max, false, "bundle-tower");
  for (auto& r : check_cycles(ev, n_max, true, "bundle-reflexive")) out.push_back(std::move(r));
  return out;
}

/// The fiber part L of a base-preserving L_ab(b, f) = (b, L(b, f)); L keeps
/// the base coordinates as parameters.
inline SuperMap fiber_action(const SuperMap& lambda, SuperDomainSignature base, SuperDomainSignature fiber) {
  const SuperDomainSignature sum = base + fiber;
  if (!(lambda.source() == sum) || !(lambda.target() == sum)) {
    throw Error(ErrorKind::SignatureMismatch, "fiber action needs an endomap of " + sum.to_string());
  }
  const int n = lambda.n_generators();
  for (int k = 0; k < base.size(); ++k) {
    const int idx = sum_index(base, fiber, false, k);
    if (!(lambda.component(idx) == SuperPolynomial::coordinate(n, sum, idx))) {
      throw Error(ErrorKind::NotBasePreserving, "base component " + SuperMap::coordinate_name(sum, idx) +
                                                    "' = " + lambda.component(idx).to_string());
    }
  }
  std::vector<SuperPolynomial> comps;
  for (int k = 0; k < fiber.size(); ++k) comps.push_back(lambda.component(sum_index(base, fiber, true, k)));
  return SuperMap(n, sum, fiber, std::move(comps));
}

/// Charts of the source bundle mapped to charts of the target bundle.
using ChartCorrespondence = std::map<std::string, std::string>;

/// f_M o pi = pi' o f_E; l'_{a'} o f_E = h_a o l_a; h_a o L_ab = L'_{a'b'} o h_b.
inline std::vector<RelationReport> check_bundle_morphism(const SemiBundle& src, const SemiBundle& dst,
                                                         const SuperMap& f_total, const SuperMap& f_base,
                                                         const std::map<std::string, SuperMap>& h,
                                                         const ChartCorrespondence& charts) {
  if (src.projection() == nullptr || dst.projection() == nullptr) {
    throw Error(ErrorKind::MissingMap, "projection is absent");
  }
  std::vector<RelationReport> out;
  out.push_back(compare("morphism-projection", {}, compose(f_base, *src.projection()),
                        compose(*dst.projection(), f_total)));
  auto image = [&](const std::string& c) -> const std::string& {
    auto it = charts.find(c);
    if (it == charts.end()) throw Error(ErrorKind::MissingMap, "no target chart for " + c);
    (void)dst.base().chart_index(it->second);
    return it->second;
  };
  auto h_of = [&](const std::string& c) -> const SuperMap& {
    auto it = h.find(c);
    if (it == h.end()) throw Error(ErrorKind::MissingMap, "h of " + c + " is absent");
    return it->second;
  };
  for (const auto& c : src.base().charts()) {
    const std::string& c2 = image(c);
    const SuperMap& hc = h_of(c);
    const SuperMap* l = src.trivialization(c);
    const SuperMap* l2 = dst.trivialization(c2);
    if (l == nullptr || l2 == nullptr) {
      out.push_back(skipped("morphism-h", {c, c2}, "trivialization is absent"));
      continue;
    }
    out.push_back(compare("morphism-h", {c, c2}, compose(*l2, f_total), compose(hc, *l)));
  }
  const SemiAtlas& t = src.transition_atlas();
  for (const auto& [key, lambda] : t.transitions()) {
    const std::string& a = t.charts()[static_cast<std::size_t>(key.first)];
    const std::string& b = t.charts()[static_cast<std::size_t>(key.second)];
    const SuperMap* l2 = dst.transition(image(a), image(b));
    if (l2 == nullptr) {
      out.push_back(skipped("morphism-transition", {a, b}, "missing " + image(a) + "->" + image(b)));
      continue;
    }
    out.push_back(compare("morphism-transition", {a, b}, compose(h_of(a), lambda), compose(*l2, h_of(b))));
  }
  return out;
}

/// h_a o L o h_b^-1 for invertible h_b.
inline SuperMap transport_transition(const SuperMap& h_a, const SuperMap& lambda, const SuperMap& h_b) {
  auto inv = invert_map(h_b);
  if (!inv) throw Error(ErrorKind::NotInvertible, "h has no polynomial inverse within the degree bound");
  return compose(h_a, compose(lambda, *inv));
}

/// Transitions between charts of two covers, keyed by (from, to).
using CrossTable = std::map<std::pair<std::string, std::string>, SuperMap>;

/// Union of the second cover (listed first) and the base cover, populated
/// with L', L and the cross maps. A chart set overlaps when its part in each
/// cover overlaps there and every mixed pair has a cross map.
struct UnionCover {
  SemiAtlas atlas;
  std::vector<bool> second;
};

inline UnionCover union_cover(const SemiBundle& bundle, const SemiAtlas& second, const CrossTable& cross) {
  const SemiAtlas& first = bundle.transition_atlas();
  if (!(second.signature() == first.signature()) || second.n_generators() != first.n_generators()) {
    throw Error(ErrorKind::SignatureMismatch, "second cover must act on " + first.signature().to_string());
  }
  UnionCover u{SemiAtlas(first.n_generators(), first.signature()), {}};
  for (const auto& c : second.charts()) {
    if (first.has_chart(c)) throw Error(ErrorKind::InvalidArgument, "chart " + c + " appears in both covers");
    u.atlas.add_chart(c);
    u.second.push_back(true);
  }
  for (const auto& c : first.charts()) {
    u.atlas.add_chart(c);
    u.second.push_back(false);
  }
  const int k2 = second.chart_count();
  const int total = u.atlas.chart_count();
  std::set<std::pair<int, int>> mixed;
  for (const auto& [key, f] : cross) {
    const int a = u.atlas.chart_index(key.first);
    const int b = u.atlas.chart_index(key.second);
    if (u.second[static_cast<std::size_t>(a)] == u.second[static_cast<std::size_t>(b)]) {
      throw Error(ErrorKind::InvalidArgument, "cross map " + key.first + key.second + " must join the two covers");
    }
    mixed.insert({std::min(a, b), std::max(a, b)});
  }
  // Maximal overlapping sets: enumerate subsets of at most 4 charts.
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int from) {
    if (cur.size() >= 2) {
      std::vector<int> s2;
      std::vector<int> s1;
      for (int i : cur) {
        if (i < k2) {
          s2.push_back(i);
        } else {
          s1.push_back(i - k2);
        }
      }
      bool ok = second.overlapping(s2) && first.overlapping(s1);
      for (int i : s2) {
        for (int j : s1) ok = ok && mixed.count({i, j + k2}) > 0;
      }
      if (!ok) return;
      u.atlas.add_overlap(u.atlas.names(cur));
    }
    if (cur.size() == 4) return;
    for (int c = from; c < total; ++c) {
      cur.push_back(c);
      rec(c + 1);
      cur.pop_back();
    }
  };
  rec(0);
  for (const auto& [key, f] : second.transitions()) {
    u.atlas.set_transition(second.charts()[static_cast<std::size_t>(key.first)],
                           second.charts()[static_cast<std::size_t>(key.second)], f);
  }
  for (const auto& [key, f] : first.transitions()) {
    u.atlas.set_transition(first.charts()[static_cast<std::size_t>(key.first)],
                           first.charts()[static_cast<std::size_t>(key.second)], f);
  }
  for (const auto& [key, f] : cross) u.atlas.set_transition(key.first, key.second, f);
  return u;
}

namespace detail {

/// Both covers occur and the charts of the second cover form one arc.
inline bool mixed_arc(const Cycle& c, const std::vector<bool>& second) {
  int primed = 0;
  int starts = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const bool here = second[static_cast<std::size_t>(c[i])];
    const bool prev = second[static_cast<std::size_t>(c[(i + c.size() - 1) % c.size()])];
    primed += here ? 1 : 0;
    starts += here && !prev ? 1 : 0;
  }
  return primed > 0 && primed < static_cast<int>(c.size()) && starts == 1;
}

}  // namespace detail

/// Agreement cycles over the union cover, lengths 2..4: every rotation of the
/// forward mixed cycles and, for the reflexive relations, of their reversals.
inline std::vector<Cycle> agreement_cycles(const UnionCover& u, int n, bool reflexive) {
  std::vector<Cycle> out;
  for (const auto& c : cycles::forward(u.atlas, n)) {
    if (!detail::mixed_arc(c, u.second)) continue;
    if (n == 2) {
      out.push_back(c);
      out.push_back({c[1], c[0]});
      continue;
    }
    for (const auto& r : cycles::rotations(reflexive ? cycles::reversed(c) : c)) out.push_back(r);
  }
  return out;
}

inline std::vector<RelationReport> check_cover_agreement(const SemiBundle& bundle, const SemiAtlas& second,
                                                         const CrossTable& cross, bool reflexive = true) {
  const UnionCover u = union_cover(bundle, second, cross);
  CycleEvaluator ev(u.atlas);
  std::vector<RelationReport> out;
  const int top = std::min(4, u.atlas.chart_count());
  for (int n = 2; n <= top; ++n) {
    for (const auto& r : agreement_cycles(u, n, false)) out.push_back(ev.sandwich("agreement", r));
  }
  if (reflexive) {
    for (int n = 2; n <= top; ++n) {
      for (const auto& r : agreement_cycles(u, n, true)) out.push_back(ev.sandwich("agreement-reflexive", r));
    }
  }
  return out;
}

}  // namespace semi

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/map_equation.hpp"
#include "semi/supermap.hpp"

namespace semi {

enum class Verdict { Hold, Fail, Skip };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Hold: return "hold";
    case Verdict::Fail: return "fail";
    case Verdict::Skip: return "skip";
  }
  return "?";
}

/// Outcome of one identity between composites. On failure the witness holds
/// the two sides (left, right) that differ.
struct RelationReport {
  std::string relation;
  std::vector<std::string> cycle;
  Verdict verdict = Verdict::Skip;
  std::optional<std::pair<SuperMap, SuperMap>> witness;
  std::string note;

  [[nodiscard]] bool holds() const { return verdict == Verdict::Hold; }
  [[nodiscard]] std::string cycle_string() const {
    std::string out;
    for (std::size_t i = 0; i < cycle.size(); ++i) out += (i ? "," : "") + cycle[i];
    return out;
  }
};

inline RelationReport compare(std::string relation, std::vector<std::string> cycle, const SuperMap& lhs,
                              const SuperMap& rhs, std::string note = {}) {
  RelationReport r{std::move(relation), std::move(cycle), Verdict::Hold, std::nullopt, std::move(note)};
  if (!map_equal(lhs, rhs)) {
    r.verdict = Verdict::Fail;
    r.witness = std::make_pair(lhs, rhs);
  }
  return r;
}

inline RelationReport skipped(std::string relation, std::vector<std::string> cycle, std::string note) {
  return {std::move(relation), std::move(cycle), Verdict::Skip, std::nullopt, std::move(note)};
}

/// Charts, combinatorial overlaps, optional coordinate maps and a partial
/// table of transition endomaps of one superdomain.
class SemiAtlas {
 public:
  SemiAtlas() = default;
  SemiAtlas(int n_generators, SuperDomainSignature signature) : n_(n_generators), sig_(signature) {}

  [[nodiscard]] int n_generators() const { return n_; }
  [[nodiscard]] const SuperDomainSignature& signature() const { return sig_; }
  [[nodiscard]] const std::vector<std::string>& charts() const { return charts_; }
  [[nodiscard]] int chart_count() const { return static_cast<int>(charts_.size()); }

  void add_chart(const std::string& name, bool semi = false) {
    if (has_chart(name)) throw Error(ErrorKind::InvalidArgument, "chart " + name + " declared twice");
    charts_.push_back(name);
    semi_flags_.push_back(semi);
  }

  [[nodiscard]] bool has_chart(const std::string& name) const {
    return std::find(charts_.begin(), charts_.end(), name) != charts_.end();
  }

  [[nodiscard]] int chart_index(const std::string& name) const {
    auto it = std::find(charts_.begin(), charts_.end(), name);
    if (it == charts_.end()) throw Error(ErrorKind::InvalidArgument, "unknown chart " + name);
    return static_cast<int>(it - charts_.begin());
  }

  [[nodiscard]] bool declared_semi(const std::string& name) const {
    return semi_flags_[static_cast<std::size_t>(chart_index(name))];
  }

  void add_overlap(const std::vector<std::string>& names) {
    std::set<int> ids;
    for (const auto& n : names) ids.insert(chart_index(n));
    overlaps_.push_back(std::move(ids));
  }

  [[nodiscard]] std::vector<std::vector<std::string>> overlaps() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& o : overlaps_) {
      std::vector<std::string> names;
      for (int i : o) names.push_back(charts_[static_cast<std::size_t>(i)]);
      out.push_back(std::move(names));
    }
    return out;
  }

  /// A chart set overlaps when it lies inside one declared overlap. Single
  /// charts always do.
  [[nodiscard]] bool overlapping(const std::vector<int>& ids) const {
    std::set<int> s(ids.begin(), ids.end());
    if (s.size() <= 1) return true;
    for (const auto& o : overlaps_) {
      if (std::includes(o.begin(), o.end(), s.begin(), s.end())) return true;
    }
    return false;
  }

  void set_coordinate_map(const std::string& chart, SuperMap phi) {
    (void)chart_index(chart);
    if (phi.n_generators() != n_) throw Error(ErrorKind::AlgebraMismatch, "coordinate map from another algebra");
    if (!(phi.target() == sig_)) {
      throw Error(ErrorKind::SignatureMismatch, "coordinate map of " + chart + " must land in " + sig_.to_string());
    }
    coordinate_[chart] = std::move(phi);
  }

  [[nodiscard]] const SuperMap* coordinate_map(const std::string& chart) const {
    auto it = coordinate_.find(chart);
    return it == coordinate_.end() ? nullptr : &it->second;
  }

  void set_transition(const std::string& from, const std::string& to, SuperMap phi) {
    const int a = chart_index(from);
    const int b = chart_index(to);
    if (!overlapping({a, b})) {
      throw Error(ErrorKind::InvalidArgument, "charts " + from + " and " + to + " are not declared to overlap");
    }
    if (phi.n_generators() != n_) throw Error(ErrorKind::AlgebraMismatch, "transition from another algebra");
    if (!(phi.source() == sig_) || !(phi.target() == sig_)) {
      throw Error(ErrorKind::SignatureMismatch, "transition " + from + to + " must be an endomap of " + sig_.to_string());
    }
    transitions_[{a, b}] = std::move(phi);
  }

  [[nodiscard]] const SuperMap* transition(int a, int b) const {
    auto it = transitions_.find({a, b});
    return it == transitions_.end() ? nullptr : &it->second;
  }
  [[nodiscard]] const SuperMap* transition(const std::string& a, const std::string& b) const {
    return transition(chart_index(a), chart_index(b));
  }
  [[nodiscard]] const std::map<std::pair<int, int>, SuperMap>& transitions() const { return transitions_; }

  [[nodiscard]] std::vector<std::string> names(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    for (int i : ids) out.push_back(charts_[static_cast<std::size_t>(i)]);
    return out;
  }

 private:
  int n_ = 0;
  SuperDomainSignature sig_;
  std::vector<std::string> charts_;
  std::vector<bool> semi_flags_;
  std::vector<std::set<int>> overlaps_;
  std::map<std::string, SuperMap> coordinate_;
  std::map<std::pair<int, int>, SuperMap> transitions_;
};

using Cycle = std::vector<int>;

namespace cycles {

inline Cycle rotate(const Cycle& c, std::size_t k) {
  Cycle out;
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c[(i + k) % c.size()]);
  return out;
}

inline std::vector<Cycle> rotations(const Cycle& c) {
  std::vector<Cycle> out;
  for (std::size_t k = 0; k < c.size(); ++k) out.push_back(rotate(c, k));
  return out;
}

/// Same start, opposite direction: [c0, c_{n-1}, ..., c1].
inline Cycle reversed(const Cycle& c) {
  Cycle out{c.front()};
  for (std::size_t i = c.size(); i-- > 1;) out.push_back(c[i]);
  return out;
}

/// Simple cycles of length n over overlapping chart sets, one per cycle up to
/// rotation and reversal: the first chart is the smallest and, for n >= 3,
/// the second precedes the last. This is the forward orientation.
inline std::vector<Cycle> forward(const SemiAtlas& atlas, int n) {
  std::vector<Cycle> out;
  const int k = atlas.chart_count();
  if (n < 1 || n > k) return out;
  Cycle cur;
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == n) {
      if (n >= 3 && cur[1] > cur.back()) return;
      if (atlas.overlapping(cur)) out.push_back(cur);
      return;
    }
    for (int c = cur.empty() ? 0 : cur.front() + 1; c < k; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      used[static_cast<std::size_t>(c)] = true;
      cur.push_back(c);
      rec();
      cur.pop_back();
      used[static_cast<std::size_t>(c)] = false;
      if (cur.empty()) continue;
    }
  };
  for (int first = 0; first < k; ++first) {
    cur = {first};
    used.assign(static_cast<std::size_t>(k), false);
    used[static_cast<std::size_t>(first)] = true;
    if (n == 1) {
      out.push_back(cur);
      continue;
    }
    rec();
  }
  return out;
}

/// Rotations used as tower (forward) or reflexive relations.
inline std::vector<Cycle> relation_cycles(const SemiAtlas& atlas, int n, bool reflexive) {
  std::vector<Cycle> out;
  for (const auto& c : forward(atlas, n)) {
    if (n == 2) {
      out.push_back(reflexive ? Cycle{c[1], c[0]} : c);
      continue;
    }
    for (const auto& r : rotations(reflexive ? reversed(c) : c)) out.push_back(r);
  }
  return out;
}

}  // namespace cycles

/// Memoized composites of transition chains. A chain [c0, ..., ck] denotes
/// Phi_{c0c1} o Phi_{c1c2} o ... o Phi_{c(k-1)ck}.
class CycleEvaluator {
 public:
  explicit CycleEvaluator(const SemiAtlas& atlas) : atlas_(atlas) {}

  [[nodiscard]] const SemiAtlas& atlas() const { return atlas_; }

  const SuperMap* phi(int a, int b) const { return atlas_.transition(a, b); }

  /// Missing transitions in a chain, as "AB" pairs.
  [[nodiscard]] std::string missing(const std::vector<int>& chain) const {
    std::string out;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (phi(chain[i], chain[i + 1]) == nullptr) {
        if (!out.empty()) out += ", ";
        out += "missing " + atlas_.charts()[static_cast<std::size_t>(chain[i])] + "->" +
               atlas_.charts()[static_cast<std::size_t>(chain[i + 1])];
      }
    }
    return out;
  }

  const std::optional<SuperMap>& chain(const std::vector<int>& c) {
    auto it = memo_.find(c);
    if (it != memo_.end()) return it->second;
    std::optional<SuperMap> value;
    if (c.size() >= 2) {
      const SuperMap* head = phi(c[0], c[1]);
      if (head != nullptr) {
        if (c.size() == 2) {
          value = *head;
        } else {
          const auto& rest = chain(std::vector<int>(c.begin() + 1, c.end()));
          if (rest) value = compose(*head, *rest);
        }
      }
    }
    return memo_.emplace(c, std::move(value)).first->second;
  }

  /// Closed composite of a cycle: the tower identity at its first chart.
  const std::optional<SuperMap>& closed(const Cycle& c) {
    std::vector<int> ch = c;
    ch.push_back(c.front());
    return chain(ch);
  }

  [[nodiscard]] std::string closing_missing(const Cycle& c) const {
    std::vector<int> ch = c;
    ch.push_back(c.front());
    return missing(ch);
  }

  /// The sandwich identity closed(r) o Phi_{r0r1} = Phi_{r0r1}.
  RelationReport sandwich(const std::string& label, const Cycle& r) {
    const auto names = atlas_.names(r);
    const SuperMap* first = phi(r[0], r[r.size() > 1 ? 1 : 0]);
    const auto& e = closed(r);
    if (first == nullptr || !e) return skipped(label, names, closing_missing(r));
    return compare(label, names, compose(*e, *first), *first);
  }

 private:
  const SemiAtlas& atlas_;
  std::map<std::vector<int>, std::optional<SuperMap>> memo_;
};

/// Phi_ab o phi_b = phi_a for every stored transition. Absent coordinate
/// maps raise MissingMap, or give Skip reports with `skip_missing`.
inline std::vector<RelationReport> check_gluing(const SemiAtlas& atlas, bool skip_missing = false) {
  std::vector<RelationReport> out;
  for (const auto& [key, phi] : atlas.transitions()) {
    const std::string& a = atlas.charts()[static_cast<std::size_t>(key.first)];
    const std::string& b = atlas.charts()[static_cast<std::size_t>(key.second)];
    const SuperMap* pa = atlas.coordinate_map(a);
    const SuperMap* pb = atlas.coordinate_map(b);
    if (pa == nullptr || pb == nullptr) {
      if (skip_missing) {
        out.push_back(skipped("gluing", {a, b}, "coordinate map of " + (pa == nullptr ? a : b) + " is absent"));
        continue;
      }
      throw Error(ErrorKind::MissingMap, "coordinate map of " + (pa == nullptr ? a : b) + " is absent");
    }
    out.push_back(compare("gluing", {a, b}, compose(phi, *pb), *pa));
  }
  return out;
}

namespace detail {

inline Cycle cycle_ids(const SemiAtlas& atlas, const std::vector<std::string>& names) {
  if (names.empty()) throw Error(ErrorKind::InvalidArgument, "empty cycle");
  Cycle c;
  for (const auto& n : names) c.push_back(atlas.chart_index(n));
  return c;
}

inline void require_chain(const CycleEvaluator& ev, const Cycle& c) {
  const std::string m = ev.closing_missing(c);
  if (!m.empty()) throw Error(ErrorKind::MissingMap, m);
}

}  // namespace detail

/// Every rotation of the cycle satisfies the closed-cycle sandwich identity.
inline std::vector<RelationReport> check_n_regular(const SemiAtlas& atlas, const std::vector<std::string>& cycle) {
  const Cycle c = detail::cycle_ids(atlas, cycle);
  CycleEvaluator ev(atlas);
  detail::require_chain(ev, c);
  std::vector<RelationReport> out;
  for (const auto& r : cycles::rotations(c)) out.push_back(ev.sandwich("regular", r));
  return out;
}

inline std::vector<RelationReport> check_cycles(CycleEvaluator& ev, int n_max, bool reflexive, const std::string& label) {
  std::vector<RelationReport> out;
  const int top = std::min(n_max, ev.atlas().chart_count());
  for (int n = 2; n <= top; ++n) {
    for (const auto& r : cycles::relation_cycles(ev.atlas(), n, reflexive)) out.push_back(ev.sandwich(label, r));
  }
  return out;
}

inline std::vector<RelationReport> check_tower_relations(const SemiAtlas& atlas, int n_max) {
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 2");
  CycleEvaluator ev(atlas);
  return check_cycles(ev, n_max, false, "tower");
}

inline std::vector<RelationReport> check_reflexivity(const SemiAtlas& atlas, int n_max) {
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 2");
  CycleEvaluator ev(atlas);
  return check_cycles(ev, n_max, true, "reflexive");
}

/// e^(n) at the first chart of the cycle.
inline SuperMap tower_identity(const SemiAtlas& atlas, const std::vector<std::string>& cycle) {
  const Cycle c = detail::cycle_ids(atlas, cycle);
  CycleEvaluator ev(atlas);
  detail::require_chain(ev, c);
  return *ev.closed(c);
}

/// The same cycle traversed in the opposite direction.
inline SuperMap conjugate_tower_identity(const SemiAtlas& atlas, const std::vector<std::string>& cycle) {
  const Cycle c = cycles::reversed(detail::cycle_ids(atlas, cycle));
  CycleEvaluator ev(atlas);
  detail::require_chain(ev, c);
  return *ev.closed(c);
}

/// Unit, idempotency, reflexive-unit and annihilation laws of the tower
/// identities, one group per relation cycle up to n_max (cycles of length 1
/// when the self-transition exists).
inline std::vector<RelationReport> check_tower_identity_laws(const SemiAtlas& atlas, int n_max) {
  CycleEvaluator ev(atlas);
  std::vector<RelationReport> out;
  const int top = std::min(n_max, atlas.chart_count());
  auto law = [&](const std::string& label, const Cycle& r, const std::optional<SuperMap>& lhs,
                 const SuperMap* rhs_map, const std::optional<SuperMap>& rhs_opt, const std::string& miss) {
    const auto names = atlas.names(r);
    const SuperMap* rhs = rhs_map != nullptr ? rhs_map : (rhs_opt ? &*rhs_opt : nullptr);
    if (!lhs || rhs == nullptr) {
      out.push_back(skipped(label, names, miss));
    } else {
      out.push_back(compare(label, names, *lhs, *rhs));
    }
  };
  for (int n = 1; n <= top; ++n) {
    std::vector<Cycle> tower;
    std::vector<Cycle> reflexive;
    if (n == 1) {
      for (int a = 0; a < atlas.chart_count(); ++a) {
        if (atlas.transition(a, a) != nullptr) tower.push_back({a});
      }
    } else {
      tower = cycles::relation_cycles(atlas, n, false);
      reflexive = cycles::relation_cycles(atlas, n, true);
    }
    for (const auto& r : tower) {
      const SuperMap* first = ev.phi(r[0], r[n > 1 ? 1 : 0]);
      const auto& e = ev.closed(r);
      const auto& e_next = ev.closed(cycles::rotate(r, n > 1 ? 1 : 0));
      const std::string miss = ev.closing_missing(r);
      const bool ok = first != nullptr && e && e_next;
      law("unit-left", r, ok ? std::optional<SuperMap>(compose(*e, *first)) : std::nullopt, first, std::nullopt, miss);
      law("unit-right", r, ok ? std::optional<SuperMap>(compose(*first, *e_next)) : std::nullopt, first, std::nullopt,
          miss);
      law("idempotent", r, e ? std::optional<SuperMap>(compose(*e, *e)) : std::nullopt, nullptr, e, miss);
      if (n >= 2) {
        const Cycle rev = cycles::reversed(r);
        const auto& et = ev.closed(rev);
        const auto& e2 = ev.chain({r[0], r[1], r[0]});
        const std::string m2 = miss.empty() ? ev.closing_missing(rev) : miss;
        law("annihilation", r, e && et ? std::optional<SuperMap>(compose(*e, *et)) : std::nullopt, nullptr, e2,
            m2.empty() ? ev.missing({r[0], r[1], r[0]}) : m2);
      }
    }
    for (const auto& r : reflexive) {
      const SuperMap* first = ev.phi(r[0], r[1]);
      const auto& e = ev.closed(r);
      const auto& e_next = ev.closed(cycles::rotate(r, 1));
      const std::string miss = ev.closing_missing(r);
      const bool ok = first != nullptr && e && e_next;
      law("reflexive-unit-left", r, ok ? std::optional<SuperMap>(compose(*e, *first)) : std::nullopt, first,
          std::nullopt, miss);
      law("reflexive-unit-right", r, ok ? std::optional<SuperMap>(compose(*first, *e_next)) : std::nullopt, first,
          std::nullopt, miss);
    }
  }
  return out;
}

namespace detail {

/// Every simple cycle of length n as a rotation starting at each of its
/// charts, in both directions.
inline std::vector<Cycle> all_oriented(const SemiAtlas& atlas, int n) {
  std::vector<Cycle> out;
  for (const auto& c : cycles::forward(atlas, n)) {
    for (const auto& r : cycles::rotations(c)) out.push_back(r);
    if (n >= 3) {
      for (const auto& r : cycles::rotations(cycles::reversed(c))) out.push_back(r);
    }
  }
  return out;
}

}  // namespace detail

/// Largest n <= n_max for which some simple cycle of length n has a tower
/// identity different from the identity map; 0 when there is none.
inline int obstructedness_degree(const SemiAtlas& atlas, int n_max) {
  CycleEvaluator ev(atlas);
  const SuperMap id = SuperMap::identity(atlas.n_generators(), atlas.signature());
  for (int n = std::min(n_max, atlas.chart_count()); n >= 1; --n) {
    for (const auto& c : detail::all_oriented(atlas, n)) {
      const auto& e = ev.closed(c);
      if (e && !map_equal(*e, id)) return n;
    }
  }
  return 0;
}

struct NicenessWitness {
  std::string chart;
  int length = 0;
  std::vector<std::string> first_cycle;
  std::vector<std::string> second_cycle;
  SuperMap first;
  SuperMap second;
};

struct NicenessResult {
  bool nice = true;
  std::optional<NicenessWitness> witness;
};

/// For each chart and length, all cycles through the chart must give the
/// same tower identity. Cycles with missing transitions are ignored.
inline NicenessResult is_nice(const SemiAtlas& atlas, int n_max) {
  CycleEvaluator ev(atlas);
  const int top = std::min(n_max, atlas.chart_count());
  for (int a = 0; a < atlas.chart_count(); ++a) {
    for (int n = 1; n <= top; ++n) {
      std::optional<Cycle> ref;
      for (const auto& c : detail::all_oriented(atlas, n)) {
        if (c.front() != a) continue;
        const auto& e = ev.closed(c);
        if (!e) continue;
        if (!ref) {
          ref = c;
          continue;
        }
        const auto& e_ref = ev.closed(*ref);
        if (!map_equal(*e_ref, *e)) {
          return {false, NicenessWitness{atlas.charts()[static_cast<std::size_t>(a)], n, atlas.names(*ref),
                                         atlas.names(c), *e_ref, *e}};
        }
      }
    }
  }
  return {};
}

/// Distinct tower identities at one chart and their index-additive product.
struct TowerSemigroup {
  std::string chart;
  /// n for which e^(n) exists, ascending.
  std::vector<int> lengths;
  /// Element index of e^(n) for each entry of `lengths`.
  std::vector<int> element_of;
  std::vector<SuperMap> elements;
  /// Smallest n at which each element appears.
  std::vector<int> representative;
  std::optional<int> index;
  std::optional<int> period;
  /// table[i][j]: element of e^(r_i + r_j) folded through the periodicity.
  std::vector<std::vector<std::optional<int>>> table;
  /// compose(e^(n), e^(m)) against e^(n+m).
  std::vector<RelationReport> compatibility;

  [[nodiscard]] std::optional<int> element_at(int n) const {
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      if (lengths[i] == n) return element_of[i];
    }
    return std::nullopt;
  }
};

inline TowerSemigroup tower_semigroup(const SemiAtlas& atlas, const std::string& chart, int n_max) {
  const int a = atlas.chart_index(chart);
  const NicenessResult nice = is_nice(atlas, n_max);
  if (!nice.nice) {
    throw Error(ErrorKind::NotNice, "tower identities at " + nice.witness->chart + " of length " +
                                        std::to_string(nice.witness->length) + " depend on the cycle");
  }
  CycleEvaluator ev(atlas);
  TowerSemigroup sg;
  sg.chart = chart;
  const int top = std::min(n_max, atlas.chart_count());
  std::map<int, const SuperMap*> seq;
  for (int n = 1; n <= top; ++n) {
    for (const auto& c : detail::all_oriented(atlas, n)) {
      if (c.front() != a) continue;
      const auto& e = ev.closed(c);
      if (e) {
        seq[n] = &*e;
        break;
      }
    }
  }
  for (const auto& [n, e] : seq) {
    int found = -1;
    for (std::size_t i = 0; i < sg.elements.size(); ++i) {
      if (map_equal(sg.elements[i], *e)) found = static_cast<int>(i);
    }
    if (found < 0) {
      found = static_cast<int>(sg.elements.size());
      sg.elements.push_back(*e);
      sg.representative.push_back(n);
    }
    sg.lengths.push_back(n);
    sg.element_of.push_back(found);
  }
  if (!sg.lengths.empty()) {
    const int lo = sg.lengths.front();
    const int hi = sg.lengths.back();
    auto same = [&](int i, int j) {
      auto ei = sg.element_at(i);
      auto ej = sg.element_at(j);
      return ei && ej && *ei == *ej;
    };
    for (int p = 1; p <= hi - lo && !sg.period; ++p) {
      for (int i = lo; i + p <= hi; ++i) {
        bool ok = true;
        for (int k = i; k + p <= hi; ++k) ok = ok && same(k, k + p);
        if (ok) {
          sg.index = i;
          sg.period = p;
          break;
        }
      }
    }
    auto fold = [&](int k) -> std::optional<int> {
      if (k <= hi) return sg.element_at(k);
      if (!sg.period || k < *sg.index) return std::nullopt;
      return sg.element_at(*sg.index + (k - *sg.index) % *sg.period);
    };
    for (std::size_t i = 0; i < sg.elements.size(); ++i) {
      std::vector<std::optional<int>> row;
      for (std::size_t j = 0; j < sg.elements.size(); ++j) row.push_back(fold(sg.representative[i] + sg.representative[j]));
      sg.table.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < sg.lengths.size(); ++i) {
      for (std::size_t j = 0; j < sg.lengths.size(); ++j) {
        const int n = sg.lengths[i];
        const int m = sg.lengths[j];
        auto target = sg.element_at(n + m);
        if (!target) continue;
        sg.compatibility.push_back(compare(
            "compatibility", {chart},
            compose(sg.elements[static_cast<std::size_t>(sg.element_of[i])],
                    sg.elements[static_cast<std::size_t>(sg.element_of[j])]),
            sg.elements[static_cast<std::size_t>(*target)],
            "e" + std::to_string(n) + " o e" + std::to_string(m) + " = e" + std::to_string(n + m)));
      }
    }
  }
  return sg;
}

/// The pair relation, the two-multiplier relation and the triple relation on
/// the charts (a, b, c), in that order.
inline std::vector<RelationReport> check_consequence_chain(const SemiAtlas& atlas, const std::string& a,
                                                           const std::string& b, const std::string& c) {
  const int ia = atlas.chart_index(a);
  const int ib = atlas.chart_index(b);
  const int ic = atlas.chart_index(c);
  CycleEvaluator ev(atlas);
  std::vector<RelationReport> out;
  out.push_back(ev.sandwich("tower", {ia, ib}));
  const auto& lhs = ev.chain({ia, ib, ic, ia, ib, ic});
  const auto& rhs = ev.chain({ia, ib, ic});
  if (lhs && rhs) {
    out.push_back(compare("two-multiplier", {a, b, c}, *lhs, *rhs));
  } else {
    out.push_back(skipped("two-multiplier", {a, b, c}, ev.missing({ia, ib, ic, ia, ib, ic})));
  }
  out.push_back(ev.sandwich("tower", {ia, ib, ic}));
  return out;
}

/// Chart when the coordinate map is invertible within the ansatz, semi-chart
/// otherwise.
inline bool is_semi_chart(const SemiAtlas& atlas, const std::string& chart) {
  const SuperMap* phi = atlas.coordinate_map(chart);
  if (phi == nullptr) throw Error(ErrorKind::MissingMap, "coordinate map of " + chart + " is absent");
  return !is_invertible_map(*phi);
}

}  // namespace semi

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "semi/equation_solver.hpp"
#include "semi/jacobian.hpp"
#include "semi/supermap.hpp"

namespace semi {

/// Expression over supermaps with at most one unknown map U. All occurrences
/// of U denote the same map.
class MapExpr {
 public:
  enum class Kind { Known, Unknown, Compose, Scale, Add, Negate };

  static MapExpr known(SuperMap f) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Known;
    node->n = f.n_generators();
    node->source = f.source();
    node->target = f.target();
    node->map = std::move(f);
    return MapExpr(std::move(node));
  }

  static MapExpr unknown(int n_generators, SuperDomainSignature source, SuperDomainSignature target) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Unknown;
    node->n = n_generators;
    node->source = source;
    node->target = target;
    return MapExpr(std::move(node));
  }

  /// outer o inner
  static MapExpr compose(MapExpr outer, MapExpr inner) {
    if (!(outer.target_domain_source() == inner.target())) {
      throw Error(ErrorKind::SignatureMismatch, "cannot compose map from " + outer.source().to_string() +
                                                    " after map to " + inner.target().to_string());
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Compose;
    node->n = outer.node_->n;
    node->source = inner.source();
    node->target = outer.target();
    node->children = {std::move(outer), std::move(inner)};
    return MapExpr(std::move(node));
  }

  static MapExpr scale(GrassmannElement c, MapExpr e) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Scale;
    node->n = e.node_->n;
    node->source = e.source();
    node->target = e.target();
    node->scalar = std::move(c);
    node->children = {std::move(e)};
    return MapExpr(std::move(node));
  }

  static MapExpr add(MapExpr a, MapExpr b) {
    if (!(a.source() == b.source()) || !(a.target() == b.target())) {
      throw Error(ErrorKind::SignatureMismatch, "adding map expressions with different signatures");
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Add;
    node->n = a.node_->n;
    node->source = a.source();
    node->target = a.target();
    node->children = {std::move(a), std::move(b)};
    return MapExpr(std::move(node));
  }

  static MapExpr negate(MapExpr a) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Negate;
    node->n = a.node_->n;
    node->source = a.source();
    node->target = a.target();
    node->children = {std::move(a)};
    return MapExpr(std::move(node));
  }

  static MapExpr subtract(MapExpr a, MapExpr b) { return add(std::move(a), negate(std::move(b))); }

  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] int n_generators() const { return node_->n; }
  [[nodiscard]] const SuperDomainSignature& source() const { return node_->source; }
  [[nodiscard]] const SuperDomainSignature& target() const { return node_->target; }
  [[nodiscard]] const SuperMap& map() const { return node_->map; }
  [[nodiscard]] const GrassmannElement& scalar() const { return node_->scalar; }
  [[nodiscard]] const std::vector<MapExpr>& children() const { return node_->children; }

 private:
  struct Node {
    Kind kind = Kind::Known;
    int n = 0;
    SuperDomainSignature source;
    SuperDomainSignature target;
    SuperMap map;
    GrassmannElement scalar;
    std::vector<MapExpr> children;
  };

  explicit MapExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  [[nodiscard]] const SuperDomainSignature& target_domain_source() const { return node_->source; }

  std::shared_ptr<const Node> node_;
};

/// lhs = rhs
struct MapEquation {
  MapExpr lhs;
  MapExpr rhs;
};

/// One coordinate of the ansatz: a single term placed in one component.
struct AnsatzTerm {
  int component = 0;
  MonomialKey key;
};

namespace detail {

/// Every parity-valid term of degree at most `degree` in the variables.
inline std::vector<AnsatzTerm> ansatz_basis(int n, SuperDomainSignature source, SuperDomainSignature target,
                                            int degree) {
  std::vector<MonomialKey> monos;
  // Enumerate even exponent vectors with total <= degree.
  std::vector<std::uint64_t> even_parts;
  std::function<void(int, int, std::uint64_t)> rec = [&](int i, int left, std::uint64_t packed) {
    if (i == source.n_even) {
      even_parts.push_back(packed);
      return;
    }
    for (int e = 0; e <= left && e <= kMaxExponent; ++e) {
      rec(i + 1, left - e, packed | (static_cast<std::uint64_t>(e) << (8 * i)));
    }
  };
  rec(0, degree, 0);
  for (std::uint64_t x : even_parts) {
    const int xd = MonomialKey{x, 0}.even_degree();
    for (Mask s = 0; s < (Mask{1} << source.n_odd); ++s) {
      if (xd + std::popcount(s) <= degree) monos.push_back(MonomialKey::make(x, 0, s));
    }
  }
  std::sort(monos.begin(), monos.end(), display_less);
  const auto& gbasis = monomial_basis(n).masks;
  std::vector<AnsatzTerm> out;
  for (int k = 0; k < target.size(); ++k) {
    const int want = SuperMap::component_is_odd(target, k) ? 1 : 0;
    for (const auto& m : monos) {
      for (Mask g : gbasis) {
        if ((std::popcount(g) + std::popcount(m.t())) % 2 == want) {
          out.push_back({k, MonomialKey::make(m.x, g, m.t())});
        }
      }
    }
  }
  return out;
}

/// C + sum_j u_j B_j
struct AffineForm {
  SuperMap constant;
  std::map<std::size_t, SuperMap> linear;
};

class Linearizer {
 public:
  Linearizer(int n, SuperDomainSignature usource, SuperDomainSignature utarget, std::vector<AnsatzTerm> basis)
      : n_(n), usource_(usource), utarget_(utarget), basis_(std::move(basis)) {}

  AffineForm run(const MapExpr& e) {
    switch (e.kind()) {
      case MapExpr::Kind::Known:
        if (e.map().n_generators() != n_) throw Error(ErrorKind::AlgebraMismatch, "known map from another algebra");
        return {e.map(), {}};
      case MapExpr::Kind::Unknown: {
        if (!(e.source() == usource_) || !(e.target() == utarget_)) {
          throw Error(ErrorKind::SignatureMismatch, "all occurrences of the unknown must share one signature");
        }
        AffineForm f{SuperMap::zero(n_, usource_, utarget_), {}};
        for (std::size_t j = 0; j < basis_.size(); ++j) {
          std::vector<SuperPolynomial> comps(static_cast<std::size_t>(utarget_.size()), SuperPolynomial(n_, usource_));
          comps[static_cast<std::size_t>(basis_[j].component)] =
              SuperPolynomial::from_terms(n_, usource_, {{basis_[j].key, Rational(1)}});
          f.linear.emplace(j, SuperMap(n_, usource_, utarget_, std::move(comps)));
        }
        return f;
      }
      case MapExpr::Kind::Compose: return compose_forms(run(e.children()[0]), run(e.children()[1]));
      case MapExpr::Kind::Scale: {
        AffineForm f = run(e.children()[0]);
        f.constant = semi::scale(e.scalar(), f.constant);
        for (auto& [j, m] : f.linear) m = semi::scale(e.scalar(), m);
        return f;
      }
      case MapExpr::Kind::Add: {
        AffineForm a = run(e.children()[0]);
        AffineForm b = run(e.children()[1]);
        a.constant = semi::add(a.constant, b.constant);
        for (auto& [j, m] : b.linear) {
          auto it = a.linear.find(j);
          if (it == a.linear.end()) {
            a.linear.emplace(j, std::move(m));
          } else {
            it->second = semi::add(it->second, m);
          }
        }
        return a;
      }
      case MapExpr::Kind::Negate: {
        AffineForm f = run(e.children()[0]);
        const GrassmannElement minus = GrassmannElement::scalar(n_, Rational(-1));
        f.constant = semi::scale(minus, f.constant);
        for (auto& [j, m] : f.linear) m = semi::scale(minus, m);
        return f;
      }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown expression node");
  }

 private:
  static SuperMap apply(Substitution& sub, const SuperMap& outer, SuperDomainSignature inner_source,
                        SuperDomainSignature result_target) {
    std::vector<SuperPolynomial> comps;
    for (const auto& c : outer.components()) comps.push_back(sub.apply(c));
    return SuperMap(outer.n_generators(), inner_source, result_target, std::move(comps));
  }

  AffineForm compose_forms(AffineForm outer, AffineForm inner) {
    const SuperDomainSignature src = inner.constant.source();
    const SuperDomainSignature tgt = outer.constant.target();
    if (!inner.linear.empty() && !outer.linear.empty()) {
      throw Error(ErrorKind::NonlinearUnknown, "the unknown map is composed with itself");
    }
    if (inner.linear.empty()) {
      inner.constant.require_parity_valid("inner map of a composition");
      Substitution sub(outer.constant.source(), inner.constant.components());
      sub.set_result_domain(n_, src);
      AffineForm out{apply(sub, outer.constant, src, tgt), {}};
      for (auto& [j, m] : outer.linear) out.linear.emplace(j, apply(sub, m, src, tgt));
      return out;
    }
    // Known outer map applied to an expression containing the unknown: only
    // affine outer maps keep the equation linear.
    if (outer.constant.degree() > 1) {
      throw Error(ErrorKind::NonlinearUnknown, "a map of degree " + std::to_string(outer.constant.degree()) +
                                                   " is applied to the unknown");
    }
    AffineForm out{semi::compose(outer.constant, inner.constant), {}};
    std::vector<SuperPolynomial> linear_part;
    for (const auto& c : outer.constant.components()) {
      std::vector<SuperPolynomial::Term> terms;
      for (const auto& t : c.terms()) {
        if (t.first.degree() == 1) terms.push_back(t);
      }
      linear_part.push_back(SuperPolynomial::from_terms(n_, c.variables(), std::move(terms)));
    }
    const SuperMap lin(n_, outer.constant.source(), tgt, std::move(linear_part));
    for (auto& [j, m] : inner.linear) {
      Substitution sub(lin.source(), m.components());
      sub.set_result_domain(n_, src);
      out.linear.emplace(j, apply(sub, lin, src, tgt));
    }
    return out;
  }

  int n_;
  SuperDomainSignature usource_;
  SuperDomainSignature utarget_;
  std::vector<AnsatzTerm> basis_;
};

inline void find_unknown(const MapExpr& e, std::optional<std::pair<SuperDomainSignature, SuperDomainSignature>>& sig,
                         int& max_degree) {
  switch (e.kind()) {
    case MapExpr::Kind::Known: max_degree = std::max(max_degree, e.map().degree()); return;
    case MapExpr::Kind::Unknown:
      if (!sig) sig = std::make_pair(e.source(), e.target());
      return;
    default:
      for (const auto& c : e.children()) find_unknown(c, sig, max_degree);
  }
}

}  // namespace detail

inline int default_degree_bound(const MapEquation& eq) {
  std::optional<std::pair<SuperDomainSignature, SuperDomainSignature>> sig;
  int d = 0;
  detail::find_unknown(eq.lhs, sig, d);
  detail::find_unknown(eq.rhs, sig, d);
  return std::max(d, 0) + eq.lhs.n_generators();
}

/// Solves a map equation that is linear in the coefficients of the unknown,
/// within the polynomial ansatz of the given degree. The unknown's
/// coordinates are the parity-valid terms ordered by component, variable
/// monomial and coefficient monomial; the particular solution uses the
/// lexicographically first pivots.
inline std::optional<SolutionSet<SuperMap>> solve_map_ansatz(const MapEquation& eq, int degree_bound) {
  if (degree_bound < 0) throw Error(ErrorKind::InvalidArgument, "negative degree bound");
  if (eq.lhs.n_generators() != eq.rhs.n_generators()) {
    throw Error(ErrorKind::AlgebraMismatch, "equation sides over different algebras");
  }
  if (!(eq.lhs.source() == eq.rhs.source()) || !(eq.lhs.target() == eq.rhs.target())) {
    throw Error(ErrorKind::SignatureMismatch, "equation sides have different signatures");
  }
  const int n = eq.lhs.n_generators();
  std::optional<std::pair<SuperDomainSignature, SuperDomainSignature>> sig;
  int ignored = 0;
  detail::find_unknown(eq.lhs, sig, ignored);
  detail::find_unknown(eq.rhs, sig, ignored);
  if (!sig) throw Error(ErrorKind::InvalidArgument, "equation has no unknown map");
  const auto [usrc, utgt] = *sig;
  auto basis = detail::ansatz_basis(n, usrc, utgt, degree_bound);
  detail::Linearizer lin(n, usrc, utgt, basis);
  detail::AffineForm form = lin.run(MapExpr::subtract(eq.lhs, eq.rhs));

  // One equation per (component, term key) of C + sum u_j B_j.
  std::map<std::pair<int, MonomialKey>, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  std::vector<Rational> rhs;
  auto row_index = [&](int k, const MonomialKey& key) {
    auto [it, inserted] = row_of.emplace(std::make_pair(k, key), rows.size());
    if (inserted) {
      rows.emplace_back();
      rhs.emplace_back(0);
    }
    return it->second;
  };
  for (int k = 0; k < form.constant.target().size(); ++k) {
    for (const auto& [key, c] : form.constant.component(k).terms()) rhs[row_index(k, key)] -= c;
  }
  for (const auto& [j, m] : form.linear) {
    for (int k = 0; k < m.target().size(); ++k) {
      for (const auto& [key, c] : m.component(k).terms()) rows[row_index(k, key)].emplace_back(j, c);
    }
  }
  SparseSystem sys(basis.size());
  for (std::size_t r = 0; r < rows.size(); ++r) sys.add_row(sparse::from_entries(std::move(rows[r])), rhs[r]);
  const LinearSolution sol = sys.solve();
  if (!sol.consistent) return std::nullopt;

  auto to_map = [&](const SparseVector& v) {
    std::vector<std::vector<SuperPolynomial::Term>> comps(static_cast<std::size_t>(utgt.size()));
    for (const auto& [j, c] : v) comps[static_cast<std::size_t>(basis[j].component)].emplace_back(basis[j].key, c);
    std::vector<SuperPolynomial> polys;
    for (auto& terms : comps) polys.push_back(SuperPolynomial::from_terms(n, usrc, std::move(terms)));
    return SuperMap(n, usrc, utgt, std::move(polys));
  };
  SolutionSet<SuperMap> out{to_map(sol.particular), {}};
  for (const auto& v : sol.kernel) out.kernel_basis.push_back(to_map(v));
  return out;
}

inline std::optional<SolutionSet<SuperMap>> solve_map_ansatz(const MapEquation& eq) {
  return solve_map_ansatz(eq, default_degree_bound(eq));
}

/// Solves X o inner = rhs for X.
inline std::optional<SolutionSet<SuperMap>> solve_outer(const SuperMap& inner, const SuperMap& rhs, int degree_bound) {
  MapEquation eq{MapExpr::compose(MapExpr::unknown(inner.n_generators(), inner.target(), rhs.target()),
                                  MapExpr::known(inner)),
                 MapExpr::known(rhs)};
  return solve_map_ansatz(eq, degree_bound);
}

/// Two-sided polynomial inverse within the ansatz, if one exists.
inline std::optional<SuperMap> invert_map(const SuperMap& f, int degree_bound) {
  if (!f.is_endomap()) return std::nullopt;
  const SuperMap id = SuperMap::identity(f.n_generators(), f.source());
  const auto sol = solve_outer(f, id, degree_bound);
  if (!sol) return std::nullopt;
  if (!sol->particular.parity_valid()) return std::nullopt;
  if (!map_equal(compose(f, sol->particular), id)) return std::nullopt;
  return sol->particular;
}

inline std::optional<SuperMap> invert_map(const SuperMap& f) {
  return invert_map(f, std::max(f.degree(), 1) + f.n_generators());
}

/// Chart test: the linearization at the origin has both block determinants
/// with nonzero body, and a polynomial inverse exists within the bound.
inline bool is_invertible_map(const SuperMap& f, int degree_bound) {
  if (!f.is_endomap() || !f.parity_valid()) return false;
  const SuperPoint origin = SuperPoint::origin(f.n_generators(), f.source());
  const SuperJacobian J = super_jacobian(f);
  auto body_det = [&](const Matrix<SuperPolynomial>& m) {
    Matrix<GrassmannElement> v;
    for (const auto& row : m) {
      std::vector<GrassmannElement> r;
      for (const auto& p : row) r.push_back(evaluate(p, origin));
      v.push_back(std::move(r));
    }
    return determinant(v, f.n_generators()).body();
  };
  if (body_det(J.A) == 0 || body_det(J.D) == 0) return false;
  return invert_map(f, degree_bound).has_value();
}

inline bool is_invertible_map(const SuperMap& f) {
  return is_invertible_map(f, std::max(f.degree(), 1) + f.n_generators());
}

}  // namespace semi

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/map_equation.hpp"
#include "semi/semiatlas.hpp"
#include "semi/supermap.hpp"

namespace semi {

enum class ParameterKind { Even, Odd };

inline const char* to_string(ParameterKind k) { return k == ParameterKind::Even ? "even" : "odd"; }

/// Source of X extended by one parameter: the last even coordinate for an
/// even parameter, the last odd coordinate for an odd one.
inline SuperDomainSignature with_parameter(SuperDomainSignature x, ParameterKind kind) {
  return kind == ParameterKind::Even ? SuperDomainSignature{x.n_even + 1, x.n_odd}
                                     : SuperDomainSignature{x.n_even, x.n_odd + 1};
}

/// Gamma(x, t) with endpoints a, b of the parameter.
class SemiHomotopy {
 public:
  SemiHomotopy(SuperMap gamma, ParameterKind kind, GrassmannElement start, GrassmannElement end)
      : gamma_(std::move(gamma)), kind_(kind), start_(std::move(start)), end_(std::move(end)) {
    const SuperDomainSignature src = gamma_.source();
    if ((kind_ == ParameterKind::Even ? src.n_even : src.n_odd) < 1) {
      throw Error(ErrorKind::SignatureMismatch, std::string("homotopy source ") + src.to_string() + " has no " +
                                                    to_string(kind_) + " parameter coordinate");
    }
    require_endpoint(start_);
    require_endpoint(end_);
  }

  [[nodiscard]] const SuperMap& gamma() const { return gamma_; }
  [[nodiscard]] ParameterKind kind() const { return kind_; }
  [[nodiscard]] const GrassmannElement& start() const { return start_; }
  [[nodiscard]] const GrassmannElement& end() const { return end_; }
  [[nodiscard]] int n_generators() const { return gamma_.n_generators(); }

  [[nodiscard]] SuperDomainSignature space() const {
    SuperDomainSignature s = gamma_.source();
    (kind_ == ParameterKind::Even ? s.n_even : s.n_odd) -= 1;
    return s;
  }

  /// End minus start.
  [[nodiscard]] GrassmannElement delta() const { return end_ - start_; }

  void require_endpoint(const GrassmannElement& v) const {
    if (v.n_generators() != gamma_.n_generators()) throw Error(ErrorKind::AlgebraMismatch, "endpoint from another algebra");
    if (kind_ == ParameterKind::Even) {
      if (!v.is_even()) throw Error(ErrorKind::ParityMismatch, "even parameter value " + v.to_string() + " is not even");
      if (v.body() != 0) throw Error(ErrorKind::BodyNotZero, "even parameter value " + v.to_string() + " has a body");
    } else if (!v.is_odd()) {
      throw Error(ErrorKind::ParityMismatch, "odd parameter value " + v.to_string() + " is not odd");
    }
  }

 private:
  SuperMap gamma_;
  ParameterKind kind_;
  GrassmannElement start_;
  GrassmannElement end_;
};

/// x -> (x, value) from X into the parameter-extended source.
inline SuperMap parameter_slice(int n, SuperDomainSignature x, ParameterKind kind, const GrassmannElement& value) {
  const SuperDomainSignature ext = with_parameter(x, kind);
  std::vector<SuperPolynomial> comps;
  for (int k = 0; k < ext.size(); ++k) {
    const bool is_param = kind == ParameterKind::Even ? k == x.n_even : k == ext.size() - 1;
    if (is_param) {
      comps.push_back(SuperPolynomial::constant(n, x, value));
    } else {
      const int src = kind == ParameterKind::Even && k > x.n_even ? k - 1 : k;
      comps.push_back(SuperPolynomial::coordinate(n, x, src));
    }
  }
  return SuperMap(n, x, ext, std::move(comps));
}

/// (x, t) -> x.
inline SuperMap parameter_drop(int n, SuperDomainSignature x, ParameterKind kind) {
  const SuperDomainSignature ext = with_parameter(x, kind);
  std::vector<SuperPolynomial> comps;
  for (int k = 0; k < x.size(); ++k) {
    const int idx = kind == ParameterKind::Even && k >= x.n_even ? k + 1 : k;
    comps.push_back(SuperPolynomial::coordinate(n, ext, idx));
  }
  return SuperMap(n, ext, x, std::move(comps));
}

inline SuperMap stage(const SemiHomotopy& h, const GrassmannElement& value) {
  h.require_endpoint(value);
  return compose(h.gamma(), parameter_slice(h.n_generators(), h.space(), h.kind(), value));
}

namespace detail {

inline std::pair<RelationReport, RelationReport> check_endpoints(const SemiHomotopy& h, const SuperMap& f,
                                                                 const SuperMap& g) {
  for (const SuperMap* m : {&f, &g}) {
    if (!(m->source() == h.space()) || !(m->target() == h.gamma().target())) {
      throw Error(ErrorKind::SignatureMismatch, "endpoint maps must go " + h.space().to_string() + " -> " +
                                                    h.gamma().target().to_string());
    }
  }
  const GrassmannElement d = h.delta();
  const std::string note = "scalar " + d.to_string();
  return {compare("homotopy-start", {}, scale(d, stage(h, h.start())), scale(d, f), note),
          compare("homotopy-end", {}, scale(d, stage(h, h.end())), scale(d, g), note)};
}

}  // namespace detail

/// (b - a) stage(a) = (b - a) f and (b - a) stage(b) = (b - a) g, without
/// cancelling the scalar.
inline std::pair<RelationReport, RelationReport> check_even_semihomotopy(const SemiHomotopy& h, const SuperMap& f,
                                                                         const SuperMap& g) {
  if (h.kind() != ParameterKind::Even) throw Error(ErrorKind::ParityMismatch, "homotopy parameter is odd");
  return detail::check_endpoints(h, f, g);
}

inline std::pair<RelationReport, RelationReport> check_odd_semihomotopy(const SemiHomotopy& h, const SuperMap& f,
                                                                        const SuperMap& g) {
  if (h.kind() != ParameterKind::Odd) throw Error(ErrorKind::ParityMismatch, "homotopy parameter is even");
  return detail::check_endpoints(h, f, g);
}

/// The equation (beta - alpha) Gamma(x, tau) = (beta - tau) f(x) + (tau - alpha) g(x)
/// with Gamma unknown on X ⊕ (0|1).
inline MapEquation odd_average_equation(const SuperMap& f, const SuperMap& g, const GrassmannElement& alpha,
                                        const GrassmannElement& beta) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw Error(ErrorKind::SignatureMismatch, "endpoint maps differ in signature");
  }
  for (const auto* v : {&alpha, &beta}) {
    if (!v->is_odd()) throw Error(ErrorKind::ParityMismatch, "odd endpoint " + v->to_string() + " is not odd");
  }
  const int n = f.n_generators();
  const SuperDomainSignature x = f.source();
  const SuperDomainSignature ext = with_parameter(x, ParameterKind::Odd);
  const SuperMap drop = parameter_drop(n, x, ParameterKind::Odd);
  const SuperMap fh = compose(f, drop);
  const SuperMap gh = compose(g, drop);
  const SuperPolynomial tau = SuperPolynomial::odd_variable(n, ext, ext.n_odd);
  std::vector<SuperPolynomial> rhs;
  for (int k = 0; k < f.target().size(); ++k) {
    const SuperPolynomial& fk = fh.component(k);
    const SuperPolynomial& gk = gh.component(k);
    rhs.push_back(fk.left_multiply(beta) - tau * fk + tau * gk - gk.left_multiply(alpha));
  }
  return {MapExpr::scale(beta - alpha, MapExpr::unknown(n, ext, f.target())),
          MapExpr::known(SuperMap(n, ext, f.target(), std::move(rhs)))};
}

inline std::optional<SolutionSet<SuperMap>> odd_average_solutions(const SuperMap& f, const SuperMap& g,
                                                                  const GrassmannElement& alpha,
                                                                  const GrassmannElement& beta, int degree_bound) {
  return solve_map_ansatz(odd_average_equation(f, g, alpha, beta), degree_bound);
}

inline std::optional<SolutionSet<SuperMap>> odd_average_solutions(const SuperMap& f, const SuperMap& g,
                                                                  const GrassmannElement& alpha,
                                                                  const GrassmannElement& beta) {
  return solve_map_ansatz(odd_average_equation(f, g, alpha, beta));
}

}  // namespace semi

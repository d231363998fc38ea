#pragma once

#include <string>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/grassmann.hpp"
#include "semi/superpoly.hpp"

namespace semi {

/// Polynomial map R^{n|m} -> R^{n'|m'}; components are listed as the even
/// targets x1'..xn' followed by the odd targets t1'..tm'.
class SuperMap {
 public:
  SuperMap() = default;
  SuperMap(int n_generators, SuperDomainSignature source, SuperDomainSignature target,
           std::vector<SuperPolynomial> components)
      : n_(n_generators), source_(source), target_(target), components_(std::move(components)) {
    if (static_cast<int>(components_.size()) != target_.size()) {
      throw Error(ErrorKind::SignatureMismatch, "map to " + target_.to_string() + " needs " +
                                                    std::to_string(target_.size()) + " components");
    }
    for (const auto& c : components_) {
      if (c.n_generators() != n_) throw Error(ErrorKind::AlgebraMismatch, "component from another algebra");
      if (!(c.variables() == source_)) {
        throw Error(ErrorKind::SignatureMismatch, "component on " + c.variables().to_string() +
                                                      " in map from " + source_.to_string());
      }
    }
  }

  static SuperMap identity(int n, SuperDomainSignature sig) {
    std::vector<SuperPolynomial> comps;
    for (int k = 0; k < sig.size(); ++k) comps.push_back(SuperPolynomial::coordinate(n, sig, k));
    return SuperMap(n, sig, sig, std::move(comps));
  }

  static SuperMap zero(int n, SuperDomainSignature source, SuperDomainSignature target) {
    return SuperMap(n, source, target, std::vector<SuperPolynomial>(static_cast<std::size_t>(target.size()),
                                                                      SuperPolynomial(n, source)));
  }

  /// Constant map with the given Grassmann values, in component order.
  static SuperMap constant(int n, SuperDomainSignature source, SuperDomainSignature target,
                           const std::vector<GrassmannElement>& values) {
    if (static_cast<int>(values.size()) != target.size()) {
      throw Error(ErrorKind::SignatureMismatch, "constant map needs one value per target coordinate");
    }
    std::vector<SuperPolynomial> comps;
    for (const auto& v : values) comps.push_back(SuperPolynomial::constant(n, source, v));
    return SuperMap(n, source, target, std::move(comps));
  }

  [[nodiscard]] int n_generators() const { return n_; }
  [[nodiscard]] const SuperDomainSignature& source() const { return source_; }
  [[nodiscard]] const SuperDomainSignature& target() const { return target_; }
  [[nodiscard]] const std::vector<SuperPolynomial>& components() const { return components_; }
  [[nodiscard]] const SuperPolynomial& component(int k) const { return components_.at(static_cast<std::size_t>(k)); }
  [[nodiscard]] const SuperPolynomial& even(int i) const { return component(i - 1); }
  [[nodiscard]] const SuperPolynomial& odd(int j) const { return component(target_.n_even + j - 1); }
  [[nodiscard]] bool is_endomap() const { return source_ == target_; }

  [[nodiscard]] static bool component_is_odd(SuperDomainSignature target, int k) { return k >= target.n_even; }

  /// Index of the first component whose parity disagrees with its target
  /// coordinate, or -1.
  [[nodiscard]] int first_parity_violation() const {
    for (int k = 0; k < target_.size(); ++k) {
      const Parity p = components_[static_cast<std::size_t>(k)].parity();
      const Parity want = component_is_odd(target_, k) ? Parity::Odd : Parity::Even;
      if (p != Parity::Zero && p != want) return k;
    }
    return -1;
  }
  [[nodiscard]] bool parity_valid() const { return first_parity_violation() < 0; }

  void require_parity_valid(const std::string& what) const {
    const int k = first_parity_violation();
    if (k < 0) return;
    throw Error(ErrorKind::ParityMismatch, what + ": component " + coordinate_name(target_, k) + "' = " +
                                               components_[static_cast<std::size_t>(k)].to_string() +
                                               " has the wrong parity");
  }

  [[nodiscard]] int degree() const {
    int d = -1;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
  }

  /// Largest generator count of any coefficient monomial.
  [[nodiscard]] int coefficient_degree() const {
    int d = 0;
    for (const auto& c : components_) {
      for (const auto& t : c.terms()) d = std::max(d, std::popcount(t.first.g()));
    }
    return d;
  }

  static std::string coordinate_name(SuperDomainSignature sig, int k) {
    return k < sig.n_even ? "x" + std::to_string(k + 1) : "t" + std::to_string(k - sig.n_even + 1);
  }

  /// `x1' = ...; t1' = ...`
  [[nodiscard]] std::string to_string() const {
    std::string out;
    for (int k = 0; k < target_.size(); ++k) {
      if (k > 0) out += "; ";
      out += coordinate_name(target_, k) + "' = " + components_[static_cast<std::size_t>(k)].to_string();
    }
    return out;
  }

  friend bool operator==(const SuperMap& a, const SuperMap& b) {
    return a.n_ == b.n_ && a.source_ == b.source_ && a.target_ == b.target_ && a.components_ == b.components_;
  }

 private:
  int n_ = 0;
  SuperDomainSignature source_;
  SuperDomainSignature target_;
  std::vector<SuperPolynomial> components_;
};

/// outer o inner: inner is applied first. The inner map must respect parity
/// so that substitution is an algebra homomorphism.
inline SuperMap compose(const SuperMap& outer, const SuperMap& inner) {
  if (outer.n_generators() != inner.n_generators()) {
    throw Error(ErrorKind::AlgebraMismatch, "composing maps over different algebras");
  }
  if (!(inner.target() == outer.source())) {
    throw Error(ErrorKind::SignatureMismatch, "cannot compose map from " + outer.source().to_string() +
                                                  " after map to " + inner.target().to_string());
  }
  inner.require_parity_valid("inner map of a composition");
  Substitution sub(outer.source(), inner.components());
  sub.set_result_domain(inner.n_generators(), inner.source());
  std::vector<SuperPolynomial> comps;
  comps.reserve(outer.components().size());
  for (const auto& c : outer.components()) comps.push_back(sub.apply(c));
  return SuperMap(outer.n_generators(), inner.source(), outer.target(), std::move(comps));
}

/// Composes a chain left to right: maps[0] o maps[1] o ... o maps[k-1].
inline SuperMap compose_chain(const std::vector<const SuperMap*>& maps) {
  if (maps.empty()) throw Error(ErrorKind::InvalidArgument, "empty composition chain");
  SuperMap acc = *maps.back();
  for (std::size_t i = maps.size() - 1; i-- > 0;) acc = compose(*maps[i], acc);
  return acc;
}

inline bool map_equal(const SuperMap& f, const SuperMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw Error(ErrorKind::SignatureMismatch, "comparing maps " + f.source().to_string() + " -> " +
                                                  f.target().to_string() + " and " + g.source().to_string() +
                                                  " -> " + g.target().to_string());
  }
  if (f.n_generators() != g.n_generators()) throw Error(ErrorKind::AlgebraMismatch, "comparing maps over different algebras");
  return f.components() == g.components();
}

inline bool is_identity(const SuperMap& f) {
  return f.is_endomap() && map_equal(f, SuperMap::identity(f.n_generators(), f.source()));
}

/// c * f componentwise, c on the left. Parity of the result follows c.
inline SuperMap scale(const GrassmannElement& c, const SuperMap& f) {
  std::vector<SuperPolynomial> comps;
  for (const auto& p : f.components()) comps.push_back(p.left_multiply(c));
  return SuperMap(f.n_generators(), f.source(), f.target(), std::move(comps));
}

inline SuperMap add(const SuperMap& f, const SuperMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw Error(ErrorKind::SignatureMismatch, "adding maps with different signatures");
  }
  std::vector<SuperPolynomial> comps;
  for (std::size_t k = 0; k < f.components().size(); ++k) comps.push_back(f.components()[k] + g.components()[k]);
  return SuperMap(f.n_generators(), f.source(), f.target(), std::move(comps));
}

inline SuperMap subtract(const SuperMap& f, const SuperMap& g) {
  std::vector<SuperPolynomial> comps;
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw Error(ErrorKind::SignatureMismatch, "subtracting maps with different signatures");
  }
  for (std::size_t k = 0; k < f.components().size(); ++k) comps.push_back(f.components()[k] - g.components()[k]);
  return SuperMap(f.n_generators(), f.source(), f.target(), std::move(comps));
}

/// Point of a superdomain with Grassmann coordinates: even values in the even
/// part of the algebra, odd values in the odd part.
struct SuperPoint {
  std::vector<GrassmannElement> even;
  std::vector<GrassmannElement> odd;

  static SuperPoint origin(int n, SuperDomainSignature sig) {
    return {std::vector<GrassmannElement>(static_cast<std::size_t>(sig.n_even), GrassmannElement(n)),
            std::vector<GrassmannElement>(static_cast<std::size_t>(sig.n_odd), GrassmannElement(n))};
  }

  /// Rational even coordinates, odd coordinates zero.
  static SuperPoint at(int n, SuperDomainSignature sig, const std::vector<Rational>& even_values) {
    if (static_cast<int>(even_values.size()) != sig.n_even) {
      throw Error(ErrorKind::InvalidArgument, "point needs " + std::to_string(sig.n_even) + " even coordinates");
    }
    SuperPoint p = origin(n, sig);
    for (std::size_t i = 0; i < even_values.size(); ++i) p.even[i] = GrassmannElement::scalar(n, even_values[i]);
    return p;
  }
};

/// Images of a point's coordinates as constant polynomials on an empty domain.
inline std::vector<SuperPolynomial> point_images(int n, SuperDomainSignature sig, const SuperPoint& p) {
  if (static_cast<int>(p.even.size()) != sig.n_even || static_cast<int>(p.odd.size()) != sig.n_odd) {
    throw Error(ErrorKind::SignatureMismatch, "point does not match domain " + sig.to_string());
  }
  std::vector<SuperPolynomial> images;
  for (const auto& v : p.even) {
    if (!v.is_even()) throw Error(ErrorKind::ParityMismatch, "even coordinate " + v.to_string() + " is not even");
    images.push_back(SuperPolynomial::constant(n, {}, v));
  }
  for (const auto& v : p.odd) {
    if (!v.is_odd()) throw Error(ErrorKind::ParityMismatch, "odd coordinate " + v.to_string() + " is not odd");
    images.push_back(SuperPolynomial::constant(n, {}, v));
  }
  return images;
}

inline GrassmannElement evaluate(const SuperPolynomial& p, const SuperPoint& at) {
  Substitution sub(p.variables(), point_images(p.n_generators(), p.variables(), at));
  sub.set_result_domain(p.n_generators(), {});
  return sub.apply(p).constant_value();
}

/// f(p) as a point of the target domain.
inline SuperPoint evaluate(const SuperMap& f, const SuperPoint& at) {
  Substitution sub(f.source(), point_images(f.n_generators(), f.source(), at));
  sub.set_result_domain(f.n_generators(), {});
  SuperPoint out;
  for (int k = 0; k < f.target().size(); ++k) {
    GrassmannElement v = sub.apply(f.component(k)).constant_value();
    (k < f.target().n_even ? out.even : out.odd).push_back(std::move(v));
  }
  return out;
}

}  // namespace semi

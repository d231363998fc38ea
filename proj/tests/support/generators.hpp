#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "semi/semi.hpp"

namespace gen {

using namespace semi;
using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Small rational, possibly zero.
inline Rational rational(Rng& rng, int range = 3) {
  return make_rational(uniform(rng, -range, range), uniform(rng, 1, 2));
}
inline Rational nonzero_rational(Rng& rng, int range = 3) {
  Rational r;
  do {
    r = rational(rng, range);
  } while (r == 0);
  return r;
}

inline Mask random_mask(Rng& rng, int n) {
  return n == 0 ? 0 : static_cast<Mask>(uniform(rng, 0, (1 << n) - 1));
}

enum class Shape { Any, Even, Odd, EvenBodyless, EvenInvertible };

inline bool fits(Mask m, Shape s) {
  const int c = std::popcount(m);
  switch (s) {
    case Shape::Any: return true;
    case Shape::Even: return c % 2 == 0;
    case Shape::Odd: return c % 2 == 1;
    case Shape::EvenBodyless: return c % 2 == 0 && c > 0;
    case Shape::EvenInvertible: return c % 2 == 0;
  }
  return true;
}

inline GrassmannElement element(Rng& rng, int n, int max_terms, Shape shape = Shape::Any) {
  std::vector<GrassmannElement::Term> terms;
  const int k = uniform(rng, 0, max_terms);
  for (int i = 0; i < k; ++i) {
    Mask m = random_mask(rng, n);
    int guard = 0;
    while (!fits(m, shape) && guard++ < 64) m = random_mask(rng, n);
    if (fits(m, shape)) terms.emplace_back(m, rational(rng));
  }
  auto e = GrassmannElement::from_terms(n, std::move(terms));
  if (shape == Shape::EvenInvertible && e.body() == 0) {
    e += GrassmannElement::scalar(n, nonzero_rational(rng));
  }
  return e;
}

/// Nilpotent element: no body term.
inline GrassmannElement nilpotent(Rng& rng, int n, int max_terms) {
  return element(rng, n, max_terms).soul();
}

/// Polynomial of the requested total parity on `vars`.
inline SuperPolynomial polynomial(Rng& rng, int n, SuperDomainSignature vars, bool odd, int degree, int max_terms) {
  std::vector<SuperPolynomial::Term> terms;
  const int k = uniform(rng, 0, max_terms);
  for (int i = 0; i < k; ++i) {
    std::uint64_t x = 0;
    Mask t = 0;
    int d = uniform(rng, 0, degree);
    for (int s = 0; s < d; ++s) {
      if (vars.size() == 0) break;
      const int v = uniform(rng, 0, vars.size() - 1);
      if (v < vars.n_even) {
        x += std::uint64_t{1} << (8 * v);
      } else {
        t |= Mask{1} << (v - vars.n_even);
      }
    }
    Mask g = random_mask(rng, n);
    if ((std::popcount(g) + std::popcount(t)) % 2 != (odd ? 1 : 0)) {
      if (n == 0) continue;
      g ^= Mask{1} << uniform(rng, 0, n - 1);
    }
    terms.emplace_back(MonomialKey::make(x, g, t), rational(rng));
  }
  return SuperPolynomial::from_terms(n, vars, std::move(terms));
}

inline SuperMap map(Rng& rng, int n, SuperDomainSignature src, SuperDomainSignature dst, int degree, int max_terms) {
  std::vector<SuperPolynomial> comps;
  for (int k = 0; k < dst.size(); ++k) {
    comps.push_back(polynomial(rng, n, src, SuperMap::component_is_odd(dst, k), degree, max_terms));
  }
  return SuperMap(n, src, dst, std::move(comps));
}

struct InvertiblePair {
  SuperMap map;
  SuperMap inverse;
};

/// One elementary invertible endomap with its exact inverse.
inline InvertiblePair elementary(Rng& rng, int n, SuperDomainSignature sig) {
  SuperMap f = SuperMap::identity(n, sig);
  SuperMap g = f;
  std::vector<SuperPolynomial> fc = f.components();
  std::vector<SuperPolynomial> gc = g.components();
  const int k = uniform(rng, 0, sig.size() - 1);
  const bool odd = k >= sig.n_even;
  const auto coord = SuperPolynomial::coordinate(n, sig, k);
  const int kind = uniform(rng, 0, 2);
  if (kind == 0) {
    // Scaling by an invertible even constant.
    const GrassmannElement a = element(rng, n, 3, Shape::EvenInvertible);
    fc[static_cast<std::size_t>(k)] = coord.left_multiply(a);
    gc[static_cast<std::size_t>(k)] = coord.left_multiply(invert(a));
  } else {
    // Shear by a polynomial in the other coordinates.
    SuperPolynomial p = polynomial(rng, n, sig, odd, kind == 1 ? 1 : 2, 3);
    std::vector<SuperPolynomial::Term> keep;
    for (const auto& t : p.terms()) {
      const bool uses = odd ? ((t.first.t() >> (k - sig.n_even)) & 1u) != 0 : t.first.exponent(k) != 0;
      if (uses) continue;
      // Quadratic parts only with nilpotent coefficients to keep degrees small.
      if (t.first.degree() > 1 && t.first.g() == 0) continue;
      keep.push_back(t);
    }
    p = SuperPolynomial::from_terms(n, sig, std::move(keep));
    fc[static_cast<std::size_t>(k)] = coord + p;
    gc[static_cast<std::size_t>(k)] = coord - p;
  }
  return {SuperMap(n, sig, sig, std::move(fc)), SuperMap(n, sig, sig, std::move(gc))};
}

inline InvertiblePair invertible(Rng& rng, int n, SuperDomainSignature sig, int steps) {
  InvertiblePair acc{SuperMap::identity(n, sig), SuperMap::identity(n, sig)};
  for (int i = 0; i < steps; ++i) {
    const InvertiblePair e = elementary(rng, n, sig);
    acc.map = compose(e.map, acc.map);
    acc.inverse = compose(acc.inverse, e.inverse);
  }
  return acc;
}

inline std::string chart_name(int i) { return std::string(1, static_cast<char>('A' + i)); }

/// Atlas whose transitions are phi_a o phi_b^-1 for random invertible phi.
inline SemiAtlas invertible_atlas(Rng& rng, int n, SuperDomainSignature sig, int charts, int steps) {
  SemiAtlas atlas(n, sig);
  std::vector<InvertiblePair> phi;
  std::vector<std::string> names;
  for (int i = 0; i < charts; ++i) {
    names.push_back(chart_name(i));
    atlas.add_chart(names.back());
    phi.push_back(invertible(rng, n, sig, steps));
    atlas.set_coordinate_map(names.back(), phi.back().map);
  }
  atlas.add_overlap(names);
  for (int a = 0; a < charts; ++a) {
    for (int b = 0; b < charts; ++b) {
      atlas.set_transition(names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)],
                           compose(phi[static_cast<std::size_t>(a)].map, phi[static_cast<std::size_t>(b)].inverse));
    }
  }
  return atlas;
}

/// Noninvertible endomap: a random collapse of the odd coordinates or a
/// nilpotent rescaling of them.
inline SuperMap collapse(Rng& rng, int n, SuperDomainSignature sig) {
  std::vector<SuperPolynomial> comps;
  const int kind = uniform(rng, 0, 2);
  for (int k = 0; k < sig.size(); ++k) {
    const auto coord = SuperPolynomial::coordinate(n, sig, k);
    if (k < sig.n_even) {
      comps.push_back(coord);
    } else if (kind == 0 || n < 2) {
      comps.push_back(SuperPolynomial(n, sig));
    } else if (kind == 1) {
      comps.push_back(coord.left_multiply(element(rng, n, 2, Shape::EvenBodyless)));
    } else {
      comps.push_back(k == sig.n_even ? SuperPolynomial(n, sig) : coord);
    }
  }
  return SuperMap(n, sig, sig, std::move(comps));
}

/// Semi-atlas whose transitions solve the gluing equations Phi_ab o phi_b =
/// phi_a with the ansatz solver, for phi_a = g_a o P with invertible g_a and
/// one shared collapse P. Transitions are the particular solution plus a
/// random 0/1 combination of the kernel. Pairs without solution are left out.
inline SemiAtlas solved_semi_atlas(Rng& rng, int n, SuperDomainSignature sig, int charts, int steps) {
  SemiAtlas atlas(n, sig);
  const SuperMap P = collapse(rng, n, sig);
  std::vector<std::string> names;
  std::vector<SuperMap> phi;
  for (int i = 0; i < charts; ++i) {
    names.push_back(chart_name(i));
    atlas.add_chart(names.back(), true);
    phi.push_back(compose(invertible(rng, n, sig, steps).map, P));
    atlas.set_coordinate_map(names.back(), phi.back());
  }
  atlas.add_overlap(names);
  for (int a = 0; a < charts; ++a) {
    for (int b = 0; b < charts; ++b) {
      if (a == b) continue;
      const auto& pa = phi[static_cast<std::size_t>(a)];
      const auto& pb = phi[static_cast<std::size_t>(b)];
      const auto sol = solve_outer(pb, pa, std::max({pa.degree(), pb.degree(), 1}));
      if (!sol) continue;
      SuperMap t = sol->particular;
      for (const auto& k : sol->kernel_basis) {
        if (coin(rng, 0.25)) t = add(t, k);
      }
      atlas.set_transition(names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)], t);
    }
  }
  return atlas;
}

struct AverageInstance {
  SuperMap f;
  SuperMap g;
  GrassmannElement alpha;
  GrassmannElement beta;
};

/// Endpoint maps with g - f = (beta - alpha) E for a random E of flipped
/// parity, so the odd average equation is solvable.
inline AverageInstance average_instance(Rng& rng, int n, SuperDomainSignature x, SuperDomainSignature y, int degree) {
  GrassmannElement alpha = element(rng, n, 2, Shape::Odd);
  GrassmannElement beta = element(rng, n, 2, Shape::Odd);
  while ((beta - alpha).is_zero()) beta = element(rng, n, 2, Shape::Odd);
  const SuperMap f = map(rng, n, x, y, degree, 3);
  std::vector<SuperPolynomial> e;
  for (int k = 0; k < y.size(); ++k) e.push_back(polynomial(rng, n, x, !SuperMap::component_is_odd(y, k), degree, 2));
  const SuperMap g = add(f, scale(beta - alpha, SuperMap(n, x, y, std::move(e))));
  return {f, g, std::move(alpha), std::move(beta)};
}

}  // namespace gen

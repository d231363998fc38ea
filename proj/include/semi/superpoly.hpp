#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/grassmann.hpp"
#include "semi/rational.hpp"

namespace semi {

/// R^{n|m}: n even coordinates x1..xn, m odd coordinates t1..tm.
struct SuperDomainSignature {
  int n_even = 0;
  int n_odd = 0;

  [[nodiscard]] int size() const { return n_even + n_odd; }
  [[nodiscard]] std::string to_string() const {
    return "(" + std::to_string(n_even) + "|" + std::to_string(n_odd) + ")";
  }
  friend bool operator==(const SuperDomainSignature&, const SuperDomainSignature&) = default;
};

/// Direct sum; the left summand's coordinates come first within each parity.
inline SuperDomainSignature operator+(const SuperDomainSignature& a, const SuperDomainSignature& b) {
  return {a.n_even + b.n_even, a.n_odd + b.n_odd};
}

inline constexpr int kMaxEvenVariables = 8;
inline constexpr int kMaxOddVariables = 32;
inline constexpr int kMaxExponent = 255;

/// Key of a term c * g^G * x^e * t^S. Exponents are packed one byte per even
/// variable; `odd` holds G in the low word and S in the high word, so the
/// anticommuting symbols are ordered g1 < ... < gN < t1 < ... < tm.
struct MonomialKey {
  std::uint64_t x = 0;
  std::uint64_t odd = 0;

  [[nodiscard]] Mask g() const { return static_cast<Mask>(odd & 0xffffffffu); }
  [[nodiscard]] Mask t() const { return static_cast<Mask>(odd >> 32); }
  [[nodiscard]] int exponent(int i) const { return static_cast<int>((x >> (8 * i)) & 0xffu); }
  [[nodiscard]] int even_degree() const {
    int d = 0;
    for (std::uint64_t v = x; v != 0; v >>= 8) d += static_cast<int>(v & 0xffu);
    return d;
  }
  /// Degree in the variables (coefficient generators excluded).
  [[nodiscard]] int degree() const { return even_degree() + std::popcount(t()); }
  [[nodiscard]] MonomialKey variables_only() const { return {x, odd & 0xffffffff00000000ull}; }

  static MonomialKey make(std::uint64_t x, Mask g, Mask t) {
    return {x, static_cast<std::uint64_t>(g) | (static_cast<std::uint64_t>(t) << 32)};
  }

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
  friend bool operator<(const MonomialKey& a, const MonomialKey& b) {
    return a.x != b.x ? a.x < b.x : a.odd < b.odd;
  }
};

struct MonomialKeyHash {
  std::size_t operator()(const MonomialKey& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.x * 0x9e3779b97f4a7c15ull ^ k.odd);
  }
};

namespace detail {

inline std::uint64_t add_exponents(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  const std::uint64_t carries = (a & b) | ((a ^ b) & ~s);
  if ((carries & 0x8080808080808080ull) != 0) {
    throw Error(ErrorKind::InvalidArgument, "even exponent exceeds " + std::to_string(kMaxExponent));
  }
  return s;
}

/// Display order on keys: variable degree, then larger x1 exponent first and
/// so on, then odd variables, then coefficient generators.
inline bool display_less(const MonomialKey& a, const MonomialKey& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  if (a.x != b.x) {
    for (int i = 0; i < kMaxEvenVariables; ++i) {
      if (a.exponent(i) != b.exponent(i)) return a.exponent(i) > b.exponent(i);
    }
  }
  if (a.t() != b.t()) return masks::canonical_less(a.t(), b.t());
  return masks::canonical_less(a.g(), b.g());
}

}  // namespace detail

/// Polynomial in the coordinates of a superdomain with Grassmann-valued
/// coefficients, stored as a flat sum of rational multiples of g^G x^e t^S.
class SuperPolynomial {
 public:
  using Term = std::pair<MonomialKey, Rational>;

  SuperPolynomial() = default;
  SuperPolynomial(int n_generators, SuperDomainSignature vars) : n_(n_generators), vars_(vars) {
    if (n_ < 0 || n_ > kMaxGenerators) throw Error(ErrorKind::InvalidArgument, "bad algebra size");
    if (vars.n_even < 0 || vars.n_even > kMaxEvenVariables || vars.n_odd < 0 || vars.n_odd > kMaxOddVariables) {
      throw Error(ErrorKind::InvalidArgument, "unsupported domain " + vars.to_string());
    }
  }

  static SuperPolynomial constant(int n, SuperDomainSignature vars, const GrassmannElement& c) {
    if (c.n_generators() != n) throw Error(ErrorKind::AlgebraMismatch, "constant from another algebra");
    SuperPolynomial p(n, vars);
    for (const auto& [m, v] : c.terms()) p.terms_.emplace_back(MonomialKey::make(0, m, 0), v);
    p.canonicalize();
    return p;
  }
  static SuperPolynomial constant(int n, SuperDomainSignature vars, const Rational& c) {
    return constant(n, vars, GrassmannElement::scalar(n, c));
  }

  /// x_i, 1-based.
  static SuperPolynomial even_variable(int n, SuperDomainSignature vars, int i) {
    if (i < 1 || i > vars.n_even) throw Error(ErrorKind::InvalidArgument, "no variable x" + std::to_string(i));
    SuperPolynomial p(n, vars);
    p.terms_.emplace_back(MonomialKey::make(std::uint64_t{1} << (8 * (i - 1)), 0, 0), Rational(1));
    return p;
  }

  /// t_j, 1-based.
  static SuperPolynomial odd_variable(int n, SuperDomainSignature vars, int j) {
    if (j < 1 || j > vars.n_odd) throw Error(ErrorKind::InvalidArgument, "no variable t" + std::to_string(j));
    SuperPolynomial p(n, vars);
    p.terms_.emplace_back(MonomialKey::make(0, 0, Mask{1} << (j - 1)), Rational(1));
    return p;
  }

  /// The k-th coordinate in (x1..xn, t1..tm) order, 0-based.
  static SuperPolynomial coordinate(int n, SuperDomainSignature vars, int k) {
    return k < vars.n_even ? even_variable(n, vars, k + 1) : odd_variable(n, vars, k - vars.n_even + 1);
  }

  static SuperPolynomial from_terms(int n, SuperDomainSignature vars, std::vector<Term> terms) {
    SuperPolynomial p(n, vars);
    for (const auto& [k, c] : terms) p.validate_key(k);
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  [[nodiscard]] int n_generators() const { return n_; }
  [[nodiscard]] const SuperDomainSignature& variables() const { return vars_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] Parity parity() const {
    Parity p = Parity::Zero;
    for (const auto& t : terms_) {
      p = join(p, std::popcount(t.first.odd) % 2 == 0 ? Parity::Even : Parity::Odd);
    }
    return p;
  }

  [[nodiscard]] int degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.first.degree());
    return d;
  }

  [[nodiscard]] bool is_constant() const { return degree() <= 0; }

  /// Grassmann coefficient of x^e t^S.
  [[nodiscard]] GrassmannElement coefficient(std::uint64_t x, Mask t) const {
    std::vector<GrassmannElement::Term> out;
    for (const auto& [k, c] : terms_) {
      if (k.x == x && k.t() == t) out.emplace_back(k.g(), c);
    }
    return GrassmannElement::from_terms(n_, std::move(out));
  }

  [[nodiscard]] GrassmannElement constant_value() const { return coefficient(0, 0); }

  /// Distinct variable monomials present, as keys with g = 0.
  [[nodiscard]] std::vector<MonomialKey> variable_monomials() const {
    std::vector<MonomialKey> out;
    for (const auto& t : terms_) out.push_back(t.first.variables_only());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  [[nodiscard]] bool uses_even(int i) const {
    for (const auto& t : terms_) {
      if (t.first.exponent(i - 1) != 0) return true;
    }
    return false;
  }
  [[nodiscard]] bool uses_odd(int j) const {
    for (const auto& t : terms_) {
      if ((t.first.t() >> (j - 1)) & 1u) return true;
    }
    return false;
  }

  [[nodiscard]] SuperPolynomial scaled(const Rational& r) const {
    if (r == 0) return SuperPolynomial(n_, vars_);
    SuperPolynomial out(*this);
    for (auto& t : out.terms_) t.second *= r;
    return out;
  }

  /// c * p with c a Grassmann constant on the left.
  [[nodiscard]] SuperPolynomial left_multiply(const GrassmannElement& c) const {
    if (c.n_generators() != n_) throw Error(ErrorKind::AlgebraMismatch, "scalar from another algebra");
    SuperPolynomial out(n_, vars_);
    for (const auto& [gm, gc] : c.terms()) {
      for (const auto& [k, v] : terms_) {
        if ((gm & k.g()) != 0) continue;
        Rational coeff = gc * v;
        if (masks::merge_sign(gm, k.odd) < 0) coeff = -coeff;
        out.terms_.emplace_back(MonomialKey{k.x, k.odd | gm}, std::move(coeff));
      }
    }
    out.canonicalize();
    return out;
  }

  /// Same polynomial regarded on a domain with at least as many variables of
  /// each parity; coordinates keep their indices.
  [[nodiscard]] SuperPolynomial on_domain(SuperDomainSignature vars) const {
    if (vars.n_even < vars_.n_even || vars.n_odd < vars_.n_odd) {
      for (const auto& t : terms_) validate_key_for(t.first, vars);
    }
    SuperPolynomial out(n_, vars);
    out.terms_ = terms_;
    return out;
  }

  SuperPolynomial& operator+=(const SuperPolynomial& o) {
    require_compatible(o);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
  }
  SuperPolynomial& operator-=(const SuperPolynomial& o) {
    require_compatible(o);
    for (const auto& [k, c] : o.terms_) terms_.emplace_back(k, -c);
    canonicalize();
    return *this;
  }
  friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
  friend SuperPolynomial operator-(SuperPolynomial a, const SuperPolynomial& b) { return a -= b; }
  friend SuperPolynomial operator-(SuperPolynomial a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }

  friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) {
    a.require_compatible(b);
    SuperPolynomial out(a.n_, a.vars_);
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        if ((ka.odd & kb.odd) != 0) continue;
        Rational c = ca * cb;
        if (masks::merge_sign(ka.odd, kb.odd) < 0) c = -c;
        out.terms_.emplace_back(MonomialKey{detail::add_exponents(ka.x, kb.x), ka.odd | kb.odd}, std::move(c));
      }
    }
    out.canonicalize();
    return out;
  }
  SuperPolynomial& operator*=(const SuperPolynomial& o) { return *this = *this * o; }

  friend bool operator==(const SuperPolynomial& a, const SuperPolynomial& b) {
    return a.n_ == b.n_ && a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  [[nodiscard]] SuperPolynomial derivative_even(int i) const {
    if (i < 1 || i > vars_.n_even) throw Error(ErrorKind::InvalidArgument, "no variable x" + std::to_string(i));
    SuperPolynomial out(n_, vars_);
    for (const auto& [k, c] : terms_) {
      const int e = k.exponent(i - 1);
      if (e == 0) continue;
      out.terms_.emplace_back(MonomialKey{k.x - (std::uint64_t{1} << (8 * (i - 1))), k.odd}, c * e);
    }
    out.canonicalize();
    return out;
  }

  /// Left derivative: t_j is moved to the front of the term before removal.
  [[nodiscard]] SuperPolynomial left_derivative_odd(int j) const {
    if (j < 1 || j > vars_.n_odd) throw Error(ErrorKind::InvalidArgument, "no variable t" + std::to_string(j));
    const std::uint64_t bit = std::uint64_t{1} << (32 + j - 1);
    SuperPolynomial out(n_, vars_);
    for (const auto& [k, c] : terms_) {
      if ((k.odd & bit) == 0) continue;
      const int passed = std::popcount(k.odd & (bit - 1));
      out.terms_.emplace_back(MonomialKey{k.x, k.odd & ~bit}, passed % 2 == 0 ? c : Rational(-c));
    }
    out.canonicalize();
    return out;
  }

  /// Terms written as coefficient, generators, then x and t factors.
  [[nodiscard]] std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<const Term*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const Term* a, const Term* b) { return detail::display_less(a->first, b->first); });
    std::string out;
    bool first = true;
    for (const Term* term : order) {
      const auto& [k, c] = *term;
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      std::vector<std::string> factors;
      for (int g : masks::indices(k.g())) factors.push_back("g" + std::to_string(g));
      for (int i = 0; i < kMaxEvenVariables; ++i) {
        const int e = k.exponent(i);
        if (e == 1) factors.push_back("x" + std::to_string(i + 1));
        if (e > 1) factors.push_back("x" + std::to_string(i + 1) + "^" + std::to_string(e));
      }
      for (int t : masks::indices(k.t())) factors.push_back("t" + std::to_string(t));
      const Rational mag = abs(c);
      if (mag != 1 || factors.empty()) factors.insert(factors.begin(), semi::to_string(mag));
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0) out += "*";
        out += factors[i];
      }
    }
    return out;
  }

 private:
  void validate_key(const MonomialKey& k) const { validate_key_for(k, vars_); }

  void validate_key_for(const MonomialKey& k, SuperDomainSignature vars) const {
    if (n_ < kMaxGenerators && (k.g() >> n_) != 0) {
      throw Error(ErrorKind::InvalidArgument, "coefficient uses generators beyond g" + std::to_string(n_));
    }
    if (vars.n_odd < kMaxOddVariables && (k.t() >> vars.n_odd) != 0) {
      throw Error(ErrorKind::InvalidArgument, "odd variable outside domain " + vars.to_string());
    }
    for (int i = vars.n_even; i < kMaxEvenVariables; ++i) {
      if (k.exponent(i) != 0) throw Error(ErrorKind::InvalidArgument, "even variable outside domain " + vars.to_string());
    }
  }

  void require_compatible(const SuperPolynomial& o) const {
    if (n_ != o.n_) {
      throw Error(ErrorKind::AlgebraMismatch, "polynomials over algebras with " + std::to_string(n_) + " and " +
                                                  std::to_string(o.n_) + " generators");
    }
    if (!(vars_ == o.vars_)) {
      throw Error(ErrorKind::SignatureMismatch,
                  "polynomials on domains " + vars_.to_string() + " and " + o.vars_.to_string());
    }
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first) {
        merged.back().second += t.second;
      } else {
        if (!merged.empty() && merged.back().second == 0) merged.pop_back();
        merged.push_back(std::move(t));
      }
    }
    if (!merged.empty() && merged.back().second == 0) merged.pop_back();
    terms_ = std::move(merged);
  }

  int n_ = 0;
  SuperDomainSignature vars_;
  std::vector<Term> terms_;
};

inline SuperPolynomial pow(const SuperPolynomial& p, int k) {
  SuperPolynomial r = SuperPolynomial::constant(p.n_generators(), p.variables(), Rational(1));
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

/// Replaces the coordinates of a domain by given polynomials (all on one
/// common domain) and expands. Images of even coordinates are assumed to
/// commute with everything; the caller guarantees parity.
class Substitution {
 public:
  Substitution(SuperDomainSignature outer_vars, std::vector<SuperPolynomial> images)
      : outer_(outer_vars), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != outer_.size()) {
      throw Error(ErrorKind::SignatureMismatch, "substitution needs " + std::to_string(outer_.size()) +
                                                    " images, got " + std::to_string(images_.size()));
    }
    if (images_.empty()) return;
    n_ = images_.front().n_generators();
    target_ = images_.front().variables();
    for (const auto& img : images_) {
      if (img.n_generators() != n_) throw Error(ErrorKind::AlgebraMismatch, "substitution images disagree on algebra");
      if (!(img.variables() == target_)) throw Error(ErrorKind::SignatureMismatch, "substitution images disagree on domain");
    }
    powers_.resize(static_cast<std::size_t>(outer_.n_even));
  }

  /// Domain of the images; fixes the result domain for empty substitutions.
  void set_result_domain(int n_generators, SuperDomainSignature vars) {
    n_ = n_generators;
    target_ = vars;
  }

  [[nodiscard]] SuperPolynomial apply(const SuperPolynomial& p) {
    if (!(p.variables() == outer_)) {
      throw Error(ErrorKind::SignatureMismatch, "polynomial on " + p.variables().to_string() +
                                                    " substituted as " + outer_.to_string());
    }
    if (!images_.empty() && p.n_generators() != n_) {
      throw Error(ErrorKind::AlgebraMismatch, "substituted polynomial from another algebra");
    }
    if (images_.empty()) n_ = p.n_generators();
    std::vector<SuperPolynomial::Term> acc;
    for (const auto& [k, c] : p.terms()) {
      const SuperPolynomial& img = monomial_image(k.variables_only());
      const Mask gm = k.g();
      for (const auto& [ik, ic] : img.terms()) {
        if ((gm & ik.g()) != 0) continue;
        Rational v = c * ic;
        if (masks::merge_sign(gm, ik.odd) < 0) v = -v;
        acc.emplace_back(MonomialKey{ik.x, ik.odd | gm}, std::move(v));
      }
    }
    return SuperPolynomial::from_terms(n_, target_, std::move(acc));
  }

 private:
  const SuperPolynomial& power(int i, int e) {
    auto& list = powers_[static_cast<std::size_t>(i)];
    if (list.empty()) list.push_back(one());
    while (static_cast<int>(list.size()) <= e) list.push_back(list.back() * images_[static_cast<std::size_t>(i)]);
    return list[static_cast<std::size_t>(e)];
  }

  const SuperPolynomial& odd_product(Mask s) {
    auto it = odd_products_.find(s);
    if (it != odd_products_.end()) return it->second;
    SuperPolynomial value = one();
    if (s != 0) {
      const int top = 31 - std::countl_zero(s);
      const Mask rest = s & ~(Mask{1} << top);
      value = odd_product(rest) * images_[static_cast<std::size_t>(outer_.n_even + top)];
    }
    return odd_products_.emplace(s, std::move(value)).first->second;
  }

  const SuperPolynomial& monomial_image(const MonomialKey& key) {
    auto it = monomials_.find(key);
    if (it != monomials_.end()) return it->second;
    SuperPolynomial value = one();
    for (int i = 0; i < outer_.n_even; ++i) {
      const int e = key.exponent(i);
      if (e > 0) value *= power(i, e);
    }
    if (key.t() != 0) value *= odd_product(key.t());
    return monomials_.emplace(key, std::move(value)).first->second;
  }

  [[nodiscard]] SuperPolynomial one() const { return SuperPolynomial::constant(n_, target_, Rational(1)); }

  SuperDomainSignature outer_;
  std::vector<SuperPolynomial> images_;
  int n_ = 0;
  SuperDomainSignature target_;
  std::vector<std::vector<SuperPolynomial>> powers_;
  std::unordered_map<Mask, SuperPolynomial> odd_products_;
  std::unordered_map<MonomialKey, SuperPolynomial, MonomialKeyHash> monomials_;
};

}  // namespace semi

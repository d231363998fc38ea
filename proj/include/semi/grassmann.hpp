#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semi/error.hpp"
#include "semi/rational.hpp"

namespace semi {

/// Subset of generators, bit i set <=> generator g_{i+1} present.
using Mask = std::uint32_t;

/// Width of Mask; no algebra may exceed it.
inline constexpr int kMaxGenerators = 32;
/// Cap applied by the document parser unless overridden.
inline constexpr int kDefaultGeneratorCap = 16;

namespace masks {

inline int cardinality(std::uint64_t m) { return std::popcount(m); }

/// Canonical monomial order: fewer generators first, then lexicographic on
/// the ascending generator lists (g1g4 precedes g2g3).
inline bool canonical_less(Mask a, Mask b) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  if (a == b) return false;
  const Mask d = a ^ b;
  const Mask low = d & (~d + 1);
  return (a & low) != 0;
}

/// Sign of reordering the concatenation left.right of two ascending
/// products of anticommuting symbols into ascending order. The masks must be
/// disjoint; bit positions define the symbol order.
inline int merge_sign(std::uint64_t left, std::uint64_t right) {
  int swaps = 0;
  while (right != 0) {
    const int j = std::countr_zero(right);
    right &= right - 1;
    if (j < 63) swaps += std::popcount(left >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

/// Ascending 1-based generator indices of a mask.
inline std::vector<int> indices(std::uint64_t m) {
  std::vector<int> out;
  while (m != 0) {
    out.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return out;
}

}  // namespace masks

enum class Parity { Zero, Even, Odd, Mixed };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::Zero: return "Zero";
    case Parity::Even: return "Even";
    case Parity::Odd: return "Odd";
    case Parity::Mixed: return "Mixed";
  }
  return "?";
}

/// Combines the parities of two summands.
inline Parity join(Parity a, Parity b) {
  if (a == Parity::Zero) return b;
  if (b == Parity::Zero) return a;
  return a == b ? a : Parity::Mixed;
}

/// Element of the Grassmann algebra over Q with a fixed number of generators.
/// Terms are kept sorted in canonical monomial order with no zero
/// coefficients, so structural equality is semantic equality.
class GrassmannElement {
 public:
  using Term = std::pair<Mask, Rational>;

  GrassmannElement() = default;
  explicit GrassmannElement(int n_generators) : n_(check_size(n_generators)) {}

  static GrassmannElement zero(int n) { return GrassmannElement(n); }
  static GrassmannElement scalar(int n, const Rational& value) { return monomial(n, 0, value); }
  static GrassmannElement one(int n) { return scalar(n, Rational(1)); }

  /// Generator g_i, 1-based.
  static GrassmannElement generator(int n, int i) {
    if (i < 1 || i > n) {
      throw Error(ErrorKind::InvalidArgument,
                  "generator g" + std::to_string(i) + " outside algebra of size " + std::to_string(n));
    }
    return monomial(n, Mask{1} << (i - 1), Rational(1));
  }

  static GrassmannElement monomial(int n, Mask m, const Rational& coeff) {
    GrassmannElement e(n);
    if (n < kMaxGenerators && (m >> n) != 0) {
      throw Error(ErrorKind::InvalidArgument, "monomial uses generators beyond g" + std::to_string(n));
    }
    if (coeff != 0) e.terms_.emplace_back(m, coeff);
    return e;
  }

  /// Sums duplicate masks and drops zeros.
  static GrassmannElement from_terms(int n, std::vector<Term> terms) {
    GrassmannElement e(n);
    for (const auto& [m, c] : terms) {
      if (n < kMaxGenerators && (m >> n) != 0) {
        throw Error(ErrorKind::InvalidArgument, "monomial uses generators beyond g" + std::to_string(n));
      }
    }
    e.terms_ = std::move(terms);
    e.canonicalize();
    return e;
  }

  [[nodiscard]] int n_generators() const { return n_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] Rational coefficient(Mask m) const {
    for (const auto& [k, c] : terms_) {
      if (k == m) return c;
    }
    return Rational(0);
  }

  [[nodiscard]] Rational body() const {
    if (!terms_.empty() && terms_.front().first == 0) return terms_.front().second;
    return Rational(0);
  }

  [[nodiscard]] GrassmannElement soul() const {
    GrassmannElement s(n_);
    for (const auto& t : terms_) {
      if (t.first != 0) s.terms_.push_back(t);
    }
    return s;
  }

  [[nodiscard]] Parity parity() const {
    Parity p = Parity::Zero;
    for (const auto& t : terms_) {
      p = join(p, masks::cardinality(t.first) % 2 == 0 ? Parity::Even : Parity::Odd);
    }
    return p;
  }

  [[nodiscard]] bool is_even() const {
    const Parity p = parity();
    return p == Parity::Even || p == Parity::Zero;
  }
  [[nodiscard]] bool is_odd() const {
    const Parity p = parity();
    return p == Parity::Odd || p == Parity::Zero;
  }

  /// Largest monomial degree present; -1 for zero.
  [[nodiscard]] int degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, masks::cardinality(t.first));
    return d;
  }

  [[nodiscard]] GrassmannElement scaled(const Rational& r) const {
    if (r == 0) return GrassmannElement(n_);
    GrassmannElement out(*this);
    for (auto& t : out.terms_) t.second *= r;
    return out;
  }

  GrassmannElement& operator+=(const GrassmannElement& other) {
    require_same_algebra(other);
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
  }

  GrassmannElement& operator-=(const GrassmannElement& other) {
    require_same_algebra(other);
    for (const auto& [m, c] : other.terms_) terms_.emplace_back(m, -c);
    canonicalize();
    return *this;
  }

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator-(GrassmannElement a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }

  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    a.require_same_algebra(b);
    GrassmannElement out(a.n_);
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        if ((ma & mb) != 0) continue;
        Rational c = ca * cb;
        if (masks::merge_sign(ma, mb) < 0) c = -c;
        out.terms_.emplace_back(ma | mb, std::move(c));
      }
    }
    out.canonicalize();
    return out;
  }

  GrassmannElement& operator*=(const GrassmannElement& other) { return *this = *this * other; }

  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// `p/q` coefficients, generators as g1..gN, canonical term order.
  [[nodiscard]] std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      const bool negative = c < 0;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      const Rational mag = abs(c);
      const auto gens = masks::indices(m);
      bool need_star = false;
      if (mag != 1 || gens.empty()) {
        out += semi::to_string(mag);
        need_star = true;
      }
      for (int g : gens) {
        if (need_star) out += "*";
        out += "g" + std::to_string(g);
        need_star = true;
      }
    }
    return out;
  }

 private:
  static int check_size(int n) {
    if (n < 0 || n > kMaxGenerators) {
      throw Error(ErrorKind::InvalidArgument,
                  "algebra size " + std::to_string(n) + " outside [0, " + std::to_string(kMaxGenerators) + "]");
    }
    return n;
  }

  void require_same_algebra(const GrassmannElement& other) const {
    if (n_ != other.n_) {
      throw Error(ErrorKind::AlgebraMismatch,
                  "operands live in algebras with " + std::to_string(n_) + " and " +
                      std::to_string(other.n_) + " generators");
    }
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return masks::canonical_less(x.first, y.first); });
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
  std::vector<Term> terms_;
};

inline Rational body(const GrassmannElement& a) { return a.body(); }
inline GrassmannElement soul(const GrassmannElement& a) { return a.soul(); }
inline Parity parity(const GrassmannElement& a) { return a.parity(); }
inline GrassmannElement add(const GrassmannElement& a, const GrassmannElement& b) { return a + b; }
inline GrassmannElement mul(const GrassmannElement& a, const GrassmannElement& b) { return a * b; }

inline GrassmannElement pow(const GrassmannElement& a, unsigned k) {
  GrassmannElement r = GrassmannElement::one(a.n_generators());
  for (unsigned i = 0; i < k; ++i) {
    r *= a;
    if (r.is_zero()) break;
  }
  return r;
}

/// Smallest k >= 1 with a^k = 0, or nullopt when the body is nonzero.
/// Terminates by k = N + 1 for bodyless elements.
inline std::optional<int> nilpotency_index(const GrassmannElement& a) {
  if (a.body() != 0) return std::nullopt;
  int k = 1;
  GrassmannElement p = a;
  while (!p.is_zero()) {
    p *= a;
    ++k;
  }
  return k;
}

/// Finite geometric series in the soul; exact.
inline GrassmannElement invert(const GrassmannElement& a) {
  const Rational b = a.body();
  if (b == 0) throw Error(ErrorKind::NotInvertible, "element " + a.to_string() + " has zero body");
  const Rational inv_b = 1 / b;
  const GrassmannElement ratio = a.soul().scaled(-inv_b);
  GrassmannElement sum = GrassmannElement::one(a.n_generators());
  GrassmannElement power = sum;
  for (;;) {
    power *= ratio;
    if (power.is_zero()) break;
    sum += power;
  }
  return sum.scaled(inv_b);
}

}  // namespace semi

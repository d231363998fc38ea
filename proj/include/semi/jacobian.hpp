#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semi/error.hpp"
#include "semi/grassmann.hpp"
#include "semi/supermap.hpp"

namespace semi {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Blocks of the super-Jacobian. Row = target component, column = source
/// coordinate. Odd-variable derivatives are left derivatives.
struct SuperJacobian {
  Matrix<SuperPolynomial> A;  // d even' / d even
  Matrix<SuperPolynomial> B;  // d even' / d odd
  Matrix<SuperPolynomial> C;  // d odd' / d even
  Matrix<SuperPolynomial> D;  // d odd' / d odd
};

inline SuperJacobian super_jacobian(const SuperMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  auto block = [&](int row0, int rows, bool odd_columns) {
    Matrix<SuperPolynomial> m;
    const int cols = odd_columns ? s.n_odd : s.n_even;
    for (int r = 0; r < rows; ++r) {
      std::vector<SuperPolynomial> row;
      const SuperPolynomial& comp = f.component(row0 + r);
      for (int c = 1; c <= cols; ++c) {
        row.push_back(odd_columns ? comp.left_derivative_odd(c) : comp.derivative_even(c));
      }
      m.push_back(std::move(row));
    }
    return m;
  };
  return {block(0, t.n_even, false), block(0, t.n_even, true), block(t.n_even, t.n_odd, false),
          block(t.n_even, t.n_odd, true)};
}

/// Determinant over the commutative even subalgebra by expansion along rows,
/// memoized on the set of used columns. Division free.
inline GrassmannElement determinant(const Matrix<GrassmannElement>& m, int n_generators) {
  const std::size_t n = m.size();
  if (n == 0) return GrassmannElement::one(n_generators);
  if (n > 20) throw Error(ErrorKind::InvalidArgument, "matrix too large for exact determinant");
  std::vector<GrassmannElement> dp(std::size_t{1} << n, GrassmannElement(n_generators));
  dp[0] = GrassmannElement::one(n_generators);
  for (std::size_t used = 0; used < dp.size(); ++used) {
    if (dp[used].is_zero()) continue;
    const std::size_t row = static_cast<std::size_t>(std::popcount(used));
    if (row == n) continue;
    int above = 0;
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t bit = std::size_t{1} << c;
      if (used & bit) {
        ++above;
        continue;
      }
      if (m[row][c].is_zero()) continue;
      // Sign of column c among the columns still free.
      const int position = static_cast<int>(c) - above;
      GrassmannElement term = dp[used] * m[row][c];
      if (position % 2 != 0) term = -term;
      dp[used | bit] += term;
    }
  }
  return dp.back();
}

/// Adjugate-based inverse of a matrix over the even subalgebra.
inline Matrix<GrassmannElement> inverse(const Matrix<GrassmannElement>& m, int n_generators) {
  const std::size_t n = m.size();
  const GrassmannElement det = determinant(m, n_generators);
  const GrassmannElement inv_det = invert(det);
  Matrix<GrassmannElement> out(n, std::vector<GrassmannElement>(n, GrassmannElement(n_generators)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Matrix<GrassmannElement> minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<GrassmannElement> row;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) row.push_back(m[r][c]);
        }
        minor.push_back(std::move(row));
      }
      GrassmannElement cof = determinant(minor, n_generators);
      if ((i + j) % 2 != 0) cof = -cof;
      out[i][j] = cof * inv_det;
    }
  }
  return out;
}

inline Matrix<GrassmannElement> multiply(const Matrix<GrassmannElement>& a, const Matrix<GrassmannElement>& b,
                                         int n_generators, std::size_t inner, std::size_t cols) {
  Matrix<GrassmannElement> out(a.size(), std::vector<GrassmannElement>(cols, GrassmannElement(n_generators)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < inner; ++k) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

struct BerezinianResult {
  GrassmannElement value;
  /// det(A + B D^-1 C), see berezinian().
  GrassmannElement schur_factor;
  /// det(D)
  GrassmannElement odd_factor;
};

/// Superdeterminant of the super-Jacobian at a point.
///
/// With left derivatives the Jacobians compose as J(f o g) = J(g) "times"
/// J(f) only after flipping the sign of one off-diagonal block, so the
/// multiplicative formula on these blocks is det(A + B D^-1 C) / det(D).
inline BerezinianResult berezinian_details(const SuperMap& f, const SuperPoint& at) {
  if (!f.is_endomap()) {
    throw Error(ErrorKind::SignatureMismatch, "Berezinian needs an endomap, got " + f.source().to_string() + " -> " +
                                                  f.target().to_string());
  }
  const int n = f.n_generators();
  const SuperJacobian J = super_jacobian(f);
  auto eval = [&](const Matrix<SuperPolynomial>& m) {
    Matrix<GrassmannElement> out;
    for (const auto& row : m) {
      std::vector<GrassmannElement> r;
      for (const auto& p : row) r.push_back(evaluate(p, at));
      out.push_back(std::move(r));
    }
    return out;
  };
  const auto A = eval(J.A);
  const auto B = eval(J.B);
  const auto C = eval(J.C);
  const auto D = eval(J.D);
  const std::size_t p = A.size();
  const std::size_t q = D.size();
  const GrassmannElement det_d = determinant(D, n);
  if (det_d.body() == 0) {
    throw Error(ErrorKind::OddBlockSingular, "odd block determinant " + det_d.to_string() + " has zero body");
  }
  Matrix<GrassmannElement> schur = A;
  if (p > 0 && q > 0) {
    const auto d_inv = inverse(D, n);
    const auto bd = multiply(B, d_inv, n, q, q);
    const auto bdc = multiply(bd, C, n, q, p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) schur[i][j] += bdc[i][j];
    }
  }
  GrassmannElement det_s = determinant(schur, n);
  return {det_s * invert(det_d), det_s, det_d};
}

inline GrassmannElement berezinian(const SuperMap& f, const SuperPoint& at) { return berezinian_details(f, at).value; }

inline GrassmannElement berezinian(const SuperMap& f) {
  return berezinian(f, SuperPoint::origin(f.n_generators(), f.source()));
}

struct OrientationClass {
  enum class Kind { SignPair, Nilpotent, ZeroBerezinian };
  Kind kind = Kind::ZeroBerezinian;
  int first_sign = 0;
  int second_sign = 0;
  int nilpotency_degree = 0;

  [[nodiscard]] std::string to_string() const {
    switch (kind) {
      case Kind::SignPair:
        return std::string("SignPair(") + (first_sign > 0 ? "+" : "-") + ", " + (second_sign > 0 ? "+" : "-") + ")";
      case Kind::Nilpotent: return "Nilpotent(" + std::to_string(nilpotency_degree) + ")";
      case Kind::ZeroBerezinian: return "ZeroBerezinian";
    }
    return "?";
  }
  friend bool operator==(const OrientationClass&, const OrientationClass&) = default;
};

/// Classifies a Berezinian. The factor bodies (Schur factor, odd-block
/// factor) decide the sign pair; without them the pair is (sign of the body, +).
inline OrientationClass orientation_class(const GrassmannElement& ber,
                                          std::optional<std::pair<Rational, Rational>> factor_bodies = std::nullopt) {
  OrientationClass out;
  if (ber.is_zero()) return out;
  if (ber.body() == 0) {
    out.kind = OrientationClass::Kind::Nilpotent;
    out.nilpotency_degree = *nilpotency_index(ber);
    return out;
  }
  out.kind = OrientationClass::Kind::SignPair;
  if (factor_bodies && factor_bodies->first != 0 && factor_bodies->second != 0) {
    out.first_sign = sign(factor_bodies->first);
    out.second_sign = sign(factor_bodies->second);
  } else {
    out.first_sign = sign(ber.body());
    out.second_sign = 1;
  }
  return out;
}

inline OrientationClass orientation_class(const BerezinianResult& r) {
  return orientation_class(r.value, std::make_pair(r.schur_factor.body(), r.odd_factor.body()));
}

}  // namespace semi

#pragma once

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "semi/grassmann.hpp"
#include "semi/sparse_elimination.hpp"

namespace semi {

/// Affine family particular + span(kernel_basis) over Q.
template <class T>
struct SolutionSet {
  T particular;
  std::vector<T> kernel_basis;

  [[nodiscard]] std::size_t dimension() const { return kernel_basis.size(); }
};

/// Monomial basis of the algebra in canonical order, and the inverse index.
struct MonomialBasis {
  std::vector<Mask> masks;
  std::vector<std::uint32_t> index;
};

inline const MonomialBasis& monomial_basis(int n) {
  if (n < 0 || n > 24) throw Error(ErrorKind::InvalidArgument, "monomial basis for " + std::to_string(n) + " generators");
  static std::mutex mu;
  static std::unordered_map<int, MonomialBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  MonomialBasis b;
  const std::size_t size = std::size_t{1} << n;
  b.masks.resize(size);
  for (std::size_t m = 0; m < size; ++m) b.masks[m] = static_cast<Mask>(m);
  std::sort(b.masks.begin(), b.masks.end(), masks::canonical_less);
  b.index.resize(size);
  for (std::size_t i = 0; i < size; ++i) b.index[b.masks[i]] = static_cast<std::uint32_t>(i);
  return cache.emplace(n, std::move(b)).first->second;
}

inline SparseVector to_coordinates(const GrassmannElement& a) {
  const auto& basis = monomial_basis(a.n_generators());
  std::vector<std::pair<std::size_t, Rational>> entries;
  for (const auto& [m, c] : a.terms()) entries.emplace_back(basis.index[m], c);
  return sparse::from_entries(std::move(entries));
}

inline GrassmannElement from_coordinates(int n, const SparseVector& v) {
  const auto& basis = monomial_basis(n);
  std::vector<GrassmannElement::Term> terms;
  for (const auto& [i, c] : v) terms.emplace_back(basis.masks[i], c);
  return GrassmannElement::from_terms(n, std::move(terms));
}

/// Columns of x -> a*x on the monomial basis (1, g1, g2, ..., g1g2, ...).
inline std::vector<std::vector<Rational>> mult_operator_matrix(const GrassmannElement& a) {
  const int n = a.n_generators();
  const auto& basis = monomial_basis(n);
  const std::size_t size = basis.masks.size();
  std::vector<std::vector<Rational>> m(size, std::vector<Rational>(size, Rational(0)));
  for (std::size_t j = 0; j < size; ++j) {
    const GrassmannElement col = a * GrassmannElement::monomial(n, basis.masks[j], Rational(1));
    for (const auto& [mask, c] : col.terms()) m[basis.index[mask]][j] = c;
  }
  return m;
}

namespace detail {

/// Rows of the multiplication operator, one per output monomial.
inline SparseSystem multiplication_system(const GrassmannElement& a, const GrassmannElement& b) {
  const int n = a.n_generators();
  const auto& basis = monomial_basis(n);
  const std::size_t size = basis.masks.size();
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> rows;
  for (std::size_t j = 0; j < size; ++j) {
    const Mask k = basis.masks[j];
    for (const auto& [ma, ca] : a.terms()) {
      if ((ma & k) != 0) continue;
      Rational c = ca;
      if (masks::merge_sign(ma, k) < 0) c = -c;
      rows[basis.index[ma | k]].emplace_back(j, std::move(c));
    }
  }
  SparseSystem sys(size);
  const SparseVector rhs = to_coordinates(b);
  std::vector<std::size_t> row_ids;
  for (const auto& r : rows) row_ids.push_back(r.first);
  for (const auto& [i, c] : rhs) {
    if (rows.find(i) == rows.end()) row_ids.push_back(i);
  }
  std::sort(row_ids.begin(), row_ids.end());
  for (std::size_t r : row_ids) {
    auto it = rows.find(r);
    SparseVector row = it == rows.end() ? SparseVector{} : sparse::from_entries(std::move(it->second));
    sys.add_row(std::move(row), sparse::entry(rhs, r));
  }
  return sys;
}

}  // namespace detail

/// Basis of {y : a*y = 0}, one vector per free column in canonical order.
inline std::vector<GrassmannElement> annihilator(const GrassmannElement& a) {
  const int n = a.n_generators();
  const LinearSolution sol = detail::multiplication_system(a, GrassmannElement(n)).solve();
  std::vector<GrassmannElement> out;
  for (const auto& v : sol.kernel) out.push_back(from_coordinates(n, v));
  return out;
}

/// Solves a*x = b. The particular solution has every free coordinate zero.
inline std::optional<SolutionSet<GrassmannElement>> solve_linear(const GrassmannElement& a, const GrassmannElement& b) {
  if (a.n_generators() != b.n_generators()) {
    throw Error(ErrorKind::AlgebraMismatch, "equation sides live in algebras with " +
                                                std::to_string(a.n_generators()) + " and " +
                                                std::to_string(b.n_generators()) + " generators");
  }
  const int n = a.n_generators();
  const LinearSolution sol = detail::multiplication_system(a, b).solve();
  if (!sol.consistent) return std::nullopt;
  SolutionSet<GrassmannElement> out{from_coordinates(n, sol.particular), {}};
  for (const auto& v : sol.kernel) out.kernel_basis.push_back(from_coordinates(n, v));
  return out;
}

}  // namespace semi

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "semi/rational.hpp"

namespace semi {

/// Sparse rational vector: strictly increasing indices, no zero entries.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

namespace sparse {

inline Rational entry(const SparseVector& v, std::size_t col) {
  auto it = std::lower_bound(v.begin(), v.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != v.end() && it->first == col) return it->second;
  return Rational(0);
}

/// a + s*b
inline SparseVector axpy(const SparseVector& a, const Rational& s, const SparseVector& b) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, s * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + s * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// Builds a canonical vector from unordered (index, value) pairs, summing repeats.
inline SparseVector from_entries(std::vector<std::pair<std::size_t, Rational>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  SparseVector out;
  for (auto& e : entries) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  return out;
}

}  // namespace sparse

/// Solution of a sparse linear system A x = b over Q.
struct LinearSolution {
  bool consistent = false;
  SparseVector particular;
  std::vector<SparseVector> kernel;
  std::vector<std::size_t> pivots;
};

/// Exact Gauss-Jordan on an augmented sparse system, kept in reduced row
/// echelon form after every insertion. The RREF depends only on the row
/// space, so the pivot set is the lexicographically first one whatever the
/// insertion order. Free variables
/// are zero in the particular solution; kernel vectors are indexed by free
/// columns in ascending order.
class SparseSystem {
 public:
  explicit SparseSystem(std::size_t n_cols) : n_cols_(n_cols) {}

  [[nodiscard]] std::size_t n_cols() const { return n_cols_; }

  /// Adds the equation row . x = rhs. Entries at columns >= n_cols are invalid.
  void add_row(SparseVector row, const Rational& rhs) {
    if (rhs != 0) row.emplace_back(n_cols_, rhs);
    insert(std::move(row));
  }

  [[nodiscard]] bool inconsistent() const { return pivot_rows_.count(n_cols_) != 0; }
  [[nodiscard]] std::size_t rank() const { return pivot_rows_.size() - (inconsistent() ? 1 : 0); }

  [[nodiscard]] LinearSolution solve() const {
    LinearSolution sol;
    sol.consistent = !inconsistent();
    if (!sol.consistent) return sol;
    std::vector<bool> is_pivot(n_cols_, false);
    for (const auto& [pc, row] : pivot_rows_) {
      is_pivot[pc] = true;
      sol.pivots.push_back(pc);
      const Rational r = sparse::entry(row, n_cols_);
      if (r != 0) sol.particular.emplace_back(pc, r);
    }
    std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> by_free;
    for (const auto& [pc, row] : pivot_rows_) {
      for (const auto& [c, v] : row) {
        if (c != pc && c < n_cols_) by_free[c].emplace_back(pc, -v);
      }
    }
    for (std::size_t f = 0; f < n_cols_; ++f) {
      if (is_pivot[f]) continue;
      auto entries = by_free[f];
      entries.emplace_back(f, Rational(1));
      sol.kernel.push_back(sparse::from_entries(std::move(entries)));
    }
    return sol;
  }

 private:
  void insert(SparseVector row) {
    std::size_t pos = 0;
    while (pos < row.size()) {
      auto it = pivot_rows_.find(row[pos].first);
      if (it == pivot_rows_.end()) {
        ++pos;
        continue;
      }
      const std::size_t col = row[pos].first;
      row = sparse::axpy(row, -row[pos].second, it->second);
      pos = static_cast<std::size_t>(
          std::lower_bound(row.begin(), row.end(), col, [](const auto& e, std::size_t c) { return e.first < c; }) -
          row.begin());
    }
    if (row.empty()) return;
    const std::size_t pc = row.front().first;
    const Rational inv = 1 / row.front().second;
    for (auto& e : row) e.second *= inv;
    // Stored rows stay fully reduced, so the table is always in RREF.
    for (auto& [c, r] : pivot_rows_) {
      const Rational v = sparse::entry(r, pc);
      if (v != 0) r = sparse::axpy(r, -v, row);
    }
    pivot_rows_.emplace(pc, std::move(row));
  }

  std::size_t n_cols_;
  std::map<std::size_t, SparseVector> pivot_rows_;
};

}  // namespace semi

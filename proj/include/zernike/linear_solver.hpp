#pragma once

#include <cstddef>
#include <vector>

#include "zernike/gaussian_rational.hpp"

namespace zernike {

// Dense exact matrix, row major. Entries are Gaussian rationals; rows are
// cleared to Gaussian integers before elimination so the fraction-free
// single-step condensation divides exactly.
using ExactMatrix = std::vector<std::vector<GaussianRational>>;

struct LinearSolution {
  enum class Status { kUnique, kUnderdetermined, kInconsistent };
  Status status = Status::kUnique;
  std::vector<GaussianRational> values;      // particular solution, free unknowns set to 0
  std::vector<std::size_t> free_columns;
  std::size_t rank = 0;
};

namespace detail {

inline void clear_row_denominators(std::vector<GaussianRational>& row) {
  mpz_class lcm = 1;
  for (const auto& v : row) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.re().get_den().get_mpz_t());
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.im().get_den().get_mpz_t());
  }
  if (lcm == 1) return;
  const GaussianRational f{mpq_class(lcm)};
  for (auto& v : row) v *= f;
}

// Fraction-free (Bareiss) forward elimination restricted to the first
// `ncols` columns; extra columns (right-hand sides) are carried along.
// Returns the pivot columns in order.
inline std::vector<std::size_t> eliminate(ExactMatrix& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t width = m[0].size();
  GaussianRational prev(1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t r = row;
    while (r < m.size() && m[r][col].is_zero()) ++r;
    if (r == m.size()) continue;
    if (r != row) std::swap(m[r], m[row]);
    const GaussianRational pivot = m[row][col];
    for (std::size_t i = row + 1; i < m.size(); ++i) {
      const GaussianRational factor = m[i][col];
      for (std::size_t j = col + 1; j < width; ++j) {
        m[i][j] = (pivot * m[i][j] - factor * m[row][j]) / prev;
      }
      m[i][col] = GaussianRational(0);
    }
    prev = pivot;
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t exact_rank(ExactMatrix m) {
  if (m.empty()) return 0;
  for (auto& row : m) detail::clear_row_denominators(row);
  return detail::eliminate(m, m[0].size()).size();
}

// Exact solve of A x = b. When the system is underdetermined the free
// unknowns are pinned to zero and reported.
inline LinearSolution solve_linear_system(const ExactMatrix& a,
                                          const std::vector<GaussianRational>& b) {
  LinearSolution out;
  const std::size_t nrows = a.size();
  const std::size_t ncols = nrows == 0 ? 0 : a[0].size();
  ExactMatrix m(nrows);
  for (std::size_t i = 0; i < nrows; ++i) {
    m[i] = a[i];
    m[i].push_back(b[i]);
    detail::clear_row_denominators(m[i]);
  }
  const auto pivots = detail::eliminate(m, ncols);
  out.rank = pivots.size();

  for (std::size_t i = out.rank; i < nrows; ++i) {
    if (!m[i][ncols].is_zero()) {
      out.status = LinearSolution::Status::kInconsistent;
      return out;
    }
  }

  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (!is_pivot[c]) out.free_columns.push_back(c);
  }

  out.values.assign(ncols, GaussianRational(0));
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const std::size_t pc = pivots[k];
    GaussianRational acc = m[k][ncols];
    for (std::size_t j = pc + 1; j < ncols; ++j) {
      if (!m[k][j].is_zero()) acc -= m[k][j] * out.values[j];
    }
    out.values[pc] = acc / m[k][pc];
  }

  out.status = out.free_columns.empty() ? LinearSolution::Status::kUnique
                                        : LinearSolution::Status::kUnderdetermined;
  return out;
}

}  // namespace zernike

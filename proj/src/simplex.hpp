#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

// Dense phase-1 simplex for small feasibility systems {x >= 0 : M x = rhs}.
// Templated on the scalar so the same pivoting runs over exact rationals
// (pivot_tol = 0) and over doubles with a tolerance. Bland's rule, with
// artificial columns blocked from re-entering the basis.
//
// On infeasibility the returned dual y is a Farkas certificate for the
// row system as given: y^T M_j <= 0 for every column j and y^T rhs > 0.

namespace interf::detail {

template <class Scalar>
struct Phase1Result {
  bool feasible = false;
  std::vector<Scalar> x;     // size n, valid when feasible
  std::vector<Scalar> dual;  // size m, valid when infeasible
};

template <class Scalar>
Phase1Result<Scalar> solve_equality_feasibility(
    std::vector<std::vector<Scalar>> M, std::vector<Scalar> rhs,
    const Scalar& pivot_tol) {
  const size_t m = M.size();
  const size_t n = m == 0 ? 0 : M[0].size();
  for (const auto& row : M)
    if (row.size() != n) throw std::invalid_argument("ragged matrix");
  if (rhs.size() != m) throw std::invalid_argument("rhs size mismatch");

  // Normalize row signs so rhs >= 0, remembering flips for the dual.
  std::vector<bool> flipped(m, false);
  for (size_t i = 0; i < m; ++i) {
    if (rhs[i] < Scalar(0)) {
      flipped[i] = true;
      rhs[i] = -rhs[i];
      for (auto& v : M[i]) v = -v;
    }
  }

  // Tableau: n original columns, m artificial columns, rhs.
  const size_t cols = n + m;
  std::vector<std::vector<Scalar>> tab(m, std::vector<Scalar>(cols + 1, Scalar(0)));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) tab[i][j] = M[i][j];
    tab[i][n + i] = Scalar(1);
    tab[i][cols] = rhs[i];
  }
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced-cost row for objective min(sum of artificials), basis = artificials.
  std::vector<Scalar> cost(cols + 1, Scalar(0));
  for (size_t j = 0; j <= cols; ++j) {
    Scalar col_sum(0);
    for (size_t i = 0; i < m; ++i) col_sum += tab[i][j];
    cost[j] = (j >= n && j < cols ? Scalar(1) : Scalar(0)) - col_sum;
  }

  while (true) {
    // Bland: smallest eligible original column with negative reduced cost.
    size_t entering = cols;
    for (size_t j = 0; j < n; ++j) {
      if (cost[j] < -pivot_tol) {
        entering = j;
        break;
      }
    }
    if (entering == cols) break;

    size_t leaving = m;
    for (size_t i = 0; i < m; ++i) {
      if (tab[i][entering] > pivot_tol) {
        if (leaving == m) {
          leaving = i;
          continue;
        }
        const Scalar lhs = tab[i][cols] * tab[leaving][entering];
        const Scalar rhs2 = tab[leaving][cols] * tab[i][entering];
        if (lhs < rhs2 || (lhs == rhs2 && basis[i] < basis[leaving]))
          leaving = i;
      }
    }
    if (leaving == m)
      throw std::logic_error("phase-1 objective unbounded below");

    // Pivot.
    const Scalar pivot = tab[leaving][entering];
    for (size_t j = 0; j <= cols; ++j) tab[leaving][j] /= pivot;
    for (size_t i = 0; i < m; ++i) {
      if (i == leaving) continue;
      const Scalar factor = tab[i][entering];
      if (factor == Scalar(0)) continue;
      for (size_t j = 0; j <= cols; ++j)
        tab[i][j] -= factor * tab[leaving][j];
    }
    const Scalar cfactor = cost[entering];
    if (cfactor != Scalar(0))
      for (size_t j = 0; j <= cols; ++j)
        cost[j] -= cfactor * tab[leaving][j];
    basis[leaving] = entering;
  }

  Phase1Result<Scalar> result;
  const Scalar objective = -cost[cols];  // residual sum of artificials
  if (objective <= pivot_tol * Scalar(static_cast<int>(m + 1))) {
    result.feasible = true;
    result.x.assign(n, Scalar(0));
    for (size_t i = 0; i < m; ++i)
      if (basis[i] < n) result.x[basis[i]] = tab[i][cols];
    return result;
  }

  // Dual from artificial reduced costs: y_i = 1 - cost[n + i], un-flipped.
  result.feasible = false;
  result.dual.assign(m, Scalar(0));
  for (size_t i = 0; i < m; ++i) {
    Scalar y = Scalar(1) - cost[n + i];
    result.dual[i] = flipped[i] ? -y : y;
  }
  return result;
}

}  // namespace interf::detail

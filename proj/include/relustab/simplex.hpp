#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "relustab/errors.hpp"
#include "relustab/types.hpp"

namespace relustab {

enum class LpStatus { optimal, unbounded };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  Vector solution;  // structural variables only
};

// Maximizes c^T z subject to A z <= b, z >= 0, for b >= 0 (the origin is
// feasible, so no phase-one step is needed). Dense tableau simplex with
// Bland's anti-cycling rule: entering variable is the lowest-index column
// with positive reduced cost, leaving row breaks ratio ties by lowest basic
// index. The iteration guard is far above any basis count reachable at the
// problem sizes used here.
inline LpResult simplex_maximize(const Matrix& A, const Vector& b, const Vector& c,
                                 int max_iters = 100000) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw UsageError("simplex: size mismatch");
  if (m > 0 && b.minCoeff() < 0.0)
    throw UsageError("simplex: requires b >= 0 (feasible origin)");

  constexpr double eps = 1e-9;

  // Tableau [A | I | b]; variables 0..n-1 structural, n..n+m-1 slack.
  Matrix T(m, n + m + 1);
  T.leftCols(n) = A;
  T.middleCols(n, m) = Matrix::Identity(m, m);
  T.col(n + m) = b;
  RowVector z = RowVector::Zero(n + m + 1);
  z.head(n) = -c.transpose();

  std::vector<int> basis(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = n + i;

  for (int iter = 0; iter < max_iters; ++iter) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (z(j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      LpResult res;
      res.status = LpStatus::optimal;
      res.objective = z(n + m);
      res.solution = Vector::Zero(n);
      for (int i = 0; i < m; ++i)
        if (basis[static_cast<size_t>(i)] < n)
          res.solution(basis[static_cast<size_t>(i)]) = T(i, n + m);
      return res;
    }

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > eps) {
        double ratio = T(i, n + m) / T(i, enter);
        if (ratio < best_ratio - eps ||
            (ratio < best_ratio + eps &&
             (leave < 0 || basis[static_cast<size_t>(i)] <
                               basis[static_cast<size_t>(leave)]))) {
          best_ratio = std::min(ratio, best_ratio);
          leave = i;
        }
      }
    }
    if (leave < 0) {
      LpResult res;
      res.status = LpStatus::unbounded;
      res.objective = std::numeric_limits<double>::infinity();
      res.solution = Vector::Zero(n);
      return res;
    }

    double piv = T(leave, enter);
    T.row(leave) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    double zf = z(enter);
    if (zf != 0.0) z -= zf * T.row(leave);
    basis[static_cast<size_t>(leave)] = enter;
  }
  throw InternalError("simplex: cycling guard exceeded");
}

}  // namespace relustab

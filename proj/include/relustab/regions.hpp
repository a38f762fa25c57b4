#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "relustab/network.hpp"
#include "relustab/simplex.hpp"
#include "relustab/types.hpp"

namespace relustab {

// Hard cap on nonzero directions: the cell count is exponential in the worst
// case and every caller in this library stays far below it.
inline constexpr int kMaxArrangementDirections = 24;

// A sign pattern together with a strictly interior point of its cell.
struct CellWitness {
  SignPattern pattern;
  Vector point;
  double margin = 0.0;  // min_i eps_i <a_i, point> over nonzero directions
  bool degenerate = false;  // all-zero arrangement convention
};

inline double feasibility_tolerance(const std::vector<RowVector>& directions) {
  double scale = 0.0;
  for (const auto& a : directions) scale = std::max(scale, max_abs(a));
  return 1e-8 * scale;
}

namespace detail {

inline double raw_margin(const std::vector<RowVector>& directions,
                         const std::vector<int>& nonzero,
                         const std::vector<std::uint8_t>& bits, const Vector& x) {
  double mg = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < nonzero.size(); ++k) {
    const auto& a = directions[static_cast<size_t>(nonzero[k])];
    double eps = bits[k] ? 1.0 : -1.0;
    mg = std::min(mg, eps * a.dot(x));
  }
  return mg;
}

// Strict feasibility of one candidate cell over the listed nonzero
// directions: max t s.t. eps_i <a_i, x> >= t, -1 <= x_j <= 1. The free
// variables are split as x = p - q and t >= 0 (the cells of a central
// arrangement that matter all have t* >= 0), which keeps the origin
// feasible and the tableau in phase-two form.
inline std::optional<std::pair<Vector, double>> solve_cell(
    const std::vector<RowVector>& directions, const std::vector<int>& nonzero,
    const std::vector<std::uint8_t>& bits, double tau) {
  const int d = static_cast<int>(directions[static_cast<size_t>(nonzero[0])].size());
  const int k = static_cast<int>(nonzero.size());
  const int n = 2 * d + 1;  // p, q, t
  const int rows = k + 2 * d;

  Matrix A = Matrix::Zero(rows, n);
  Vector b = Vector::Zero(rows);
  Vector c = Vector::Zero(n);
  c(2 * d) = 1.0;

  for (int i = 0; i < k; ++i) {
    const auto& a = directions[static_cast<size_t>(nonzero[static_cast<size_t>(i)])];
    double eps = bits[static_cast<size_t>(i)] ? 1.0 : -1.0;
    A.row(i).head(d) = -eps * a;
    A.row(i).segment(d, d) = eps * a;
    A(i, 2 * d) = 1.0;
    // b(i) = 0
  }
  for (int j = 0; j < d; ++j) {
    A(k + j, j) = 1.0;
    b(k + j) = 1.0;
    A(k + d + j, d + j) = 1.0;
    b(k + d + j) = 1.0;
  }

  LpResult res = simplex_maximize(A, b, c);
  if (res.status != LpStatus::optimal)
    throw InternalError("cell feasibility LP cannot be unbounded");
  if (!(res.objective > tau)) return std::nullopt;
  Vector x = res.solution.head(d) - res.solution.segment(d, d);
  double mg = raw_margin(directions, nonzero, bits, x);
  return std::make_pair(std::move(x), mg);
}

}  // namespace detail

// Strict-feasibility check for a single pattern. The pattern covers all
// directions; bits of zero directions must be 0.
inline std::optional<CellWitness> cell_witness(const std::vector<RowVector>& directions,
                                               const SignPattern& pattern) {
  if (pattern.size() != static_cast<int>(directions.size()))
    throw UsageError("cell_witness: pattern length must match direction count");
  std::vector<int> nonzero;
  for (size_t i = 0; i < directions.size(); ++i) {
    if (max_abs(directions[i]) > 0.0)
      nonzero.push_back(static_cast<int>(i));
    else if (pattern.bits[i] != 0)
      throw UsageError("cell_witness: zero direction must carry bit 0");
  }
  if (nonzero.empty()) {
    CellWitness w;
    w.pattern = pattern;
    w.point = Vector::Zero(directions.empty() ? 1
                                              : static_cast<int>(directions[0].size()));
    w.margin = 0.0;
    w.degenerate = true;
    return w;
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(nonzero.size());
  for (int i : nonzero) bits.push_back(pattern.bits[static_cast<size_t>(i)]);

  double tau = feasibility_tolerance(directions);
  auto sol = detail::solve_cell(directions, nonzero, bits, tau);
  if (!sol) return std::nullopt;
  CellWitness w;
  w.pattern = pattern;
  w.point = sol->first;
  w.margin = sol->second;
  return w;
}

// Enumerates the attainable sign patterns of the central arrangement:
// exactly those s whose open cell {x : eps_i <a_i, x> > 0} is nonempty.
// Incremental construction: cells of the first hyperplane, then each new
// hyperplane may split existing cells. The side containing the current
// witness is accepted without an LP when the witness clears the new
// hyperplane by more than the feasibility tolerance.
inline std::vector<CellWitness> attainable_patterns(
    const std::vector<RowVector>& directions) {
  const size_t m = directions.size();
  std::vector<int> nonzero;
  for (size_t i = 0; i < m; ++i)
    if (max_abs(directions[i]) > 0.0) nonzero.push_back(static_cast<int>(i));

  if (static_cast<int>(nonzero.size()) > kMaxArrangementDirections)
    throw CapacityError("attainable_patterns: more than " +
                        std::to_string(kMaxArrangementDirections) +
                        " nonzero directions");

  const int d = directions.empty() ? 1 : static_cast<int>(directions[0].size());
  if (d < 1) throw UsageError("attainable_patterns: d must be >= 1");

  if (nonzero.empty()) {
    CellWitness w;
    w.pattern = SignPattern(std::vector<std::uint8_t>(m, 0));
    w.point = Vector::Zero(d);
    w.margin = 0.0;
    w.degenerate = true;
    return {w};
  }

  double tau = feasibility_tolerance(directions);

  struct PartialCell {
    std::vector<std::uint8_t> bits;  // over nonzero directions processed so far
    Vector point;
    double margin;
  };

  std::vector<PartialCell> cells;
  auto try_extend = [&](const PartialCell* parent, std::uint8_t bit, size_t depth,
                        std::vector<PartialCell>& out) {
    std::vector<std::uint8_t> bits;
    if (parent) bits = parent->bits;
    bits.push_back(bit);
    std::vector<int> nz(nonzero.begin(), nonzero.begin() + static_cast<long>(depth) + 1);

    const auto& a = directions[static_cast<size_t>(nonzero[depth])];
    if (parent) {
      double v = (bit ? 1.0 : -1.0) * a.dot(parent->point);
      double mg = std::min(parent->margin, v);
      if (mg > tau) {
        out.push_back(PartialCell{std::move(bits), parent->point, mg});
        return;
      }
    }
    auto sol = detail::solve_cell(directions, nz, bits, tau);
    if (sol)
      out.push_back(PartialCell{std::move(bits), std::move(sol->first), sol->second});
  };

  for (size_t depth = 0; depth < nonzero.size(); ++depth) {
    std::vector<PartialCell> next;
    if (depth == 0) {
      try_extend(nullptr, 1, depth, next);
      try_extend(nullptr, 0, depth, next);
    } else {
      next.reserve(cells.size() * 2);
      for (const auto& cell : cells) {
        try_extend(&cell, 1, depth, next);
        try_extend(&cell, 0, depth, next);
      }
    }
    cells = std::move(next);
  }

  std::vector<CellWitness> result;
  result.reserve(cells.size());
  for (auto& cell : cells) {
    CellWitness w;
    std::vector<std::uint8_t> full(m, 0);
    for (size_t k = 0; k < nonzero.size(); ++k)
      full[static_cast<size_t>(nonzero[k])] = cell.bits[k];
    w.pattern = SignPattern(std::move(full));
    w.point = std::move(cell.point);
    w.margin = cell.margin;
    result.push_back(std::move(w));
  }
  std::sort(result.begin(), result.end(),
            [](const CellWitness& a, const CellWitness& b) {
              return a.pattern < b.pattern;
            });
  return result;
}

// Brute-force sampling oracle: patterns observed at `samples` uniform points
// on the unit sphere, boundary hits discarded. A subset of the attainable
// set with probability 1; independent of the LP path.
inline std::set<SignPattern> count_regions_oracle(
    const std::vector<RowVector>& directions, long samples, std::uint64_t seed) {
  if (samples < 1) throw UsageError("count_regions_oracle: samples must be >= 1");
  const size_t m = directions.size();
  const int d = directions.empty() ? 1 : static_cast<int>(directions[0].size());

  std::vector<int> nonzero;
  for (size_t i = 0; i < m; ++i)
    if (max_abs(directions[i]) > 0.0) nonzero.push_back(static_cast<int>(i));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::set<SignPattern> seen;
  Vector x(d);
  for (long s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    do {
      for (int j = 0; j < d; ++j) x(j) = normal(rng);
      norm2 = x.norm();
    } while (norm2 < 1e-12);
    x /= norm2;

    std::vector<std::uint8_t> bits(m, 0);
    bool boundary = false;
    for (int i : nonzero) {
      const auto& a = directions[static_cast<size_t>(i)];
      double z = a.dot(x);
      if (std::abs(z) <= 1e-10 * std::max(1.0, max_abs(a) * max_abs(x))) {
        boundary = true;
        break;
      }
      bits[static_cast<size_t>(i)] = z > 0.0 ? 1 : 0;
    }
    if (!boundary) seen.insert(SignPattern(std::move(bits)));
  }
  return seen;
}

inline std::vector<RowVector> rows_of(const Matrix& A) {
  std::vector<RowVector> rows;
  rows.reserve(static_cast<size_t>(A.rows()));
  for (int i = 0; i < A.rows(); ++i) rows.push_back(A.row(i));
  return rows;
}

}  // namespace relustab

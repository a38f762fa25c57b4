#pragma once

#include <map>
#include <vector>

#include "relustab/network.hpp"
#include "relustab/regions.hpp"

namespace relustab {

// Exact Sobolev seminorm of the realization: the max over attainable sign
// patterns of the entrywise max-abs of the cell Jacobian. The per-pattern
// map keeps the full breakdown for reporting.
struct SeminormBreakdown {
  double value = 0.0;
  SignPattern argmax_pattern;
  std::map<SignPattern, double> per_pattern;

  int cells() const { return static_cast<int>(per_pattern.size()); }
};

inline SeminormBreakdown seminorm(const ShallowNet& net) {
  auto witnesses = attainable_patterns(rows_of(net.A));
  SeminormBreakdown out;
  bool first = true;
  for (const auto& w : witnesses) {
    double v = max_abs(jacobian_of_pattern(net, w.pattern));
    out.per_pattern.emplace(w.pattern, v);
    if (first || v > out.value) {
      out.value = v;
      out.argmax_pattern = w.pattern;
      first = false;
    }
  }
  return out;
}

// |R(p) - R(q)|_{W^{1,inf}} on the joint arrangement of all directions of p
// and q. Computed as the seminorm of the stacked difference net; the argmax
// pattern indexes the joint directions (p's neurons first).
inline SeminormBreakdown sobolev_distance(const ShallowNet& p, const ShallowNet& q) {
  if (p.d() != q.d() || p.out_dim() != q.out_dim())
    throw UsageError("sobolev_distance: nets must share input and output dimensions");
  return seminorm(concat(p, negate_outputs(q)));
}

// Max of ||R(net)(x)||_inf over the grid^d lattice spanning [-B, B]^d.
// A lower bound on the true sup, exact in the grid limit.
inline double uniform_norm_box(const ShallowNet& net, double B, long grid) {
  if (!(B > 0.0)) throw UsageError("uniform_norm_box: B must be positive");
  if (grid < 2) throw UsageError("uniform_norm_box: grid must be >= 2");
  const int d = net.d();
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    total *= static_cast<double>(grid);
    if (total > 1e8) throw CapacityError("uniform_norm_box: grid^d exceeds 1e8");
  }

  std::vector<long> idx(static_cast<size_t>(d), 0);
  Vector x(d);
  double best = 0.0;
  bool done = false;
  while (!done) {
    for (int j = 0; j < d; ++j)
      x(j) = -B + 2.0 * B * static_cast<double>(idx[static_cast<size_t>(j)]) /
                 static_cast<double>(grid - 1);
    best = std::max(best, max_abs(eval(net, x)));
    int j = 0;
    for (; j < d; ++j) {
      if (++idx[static_cast<size_t>(j)] < grid) break;
      idx[static_cast<size_t>(j)] = 0;
    }
    done = (j == d);
  }
  return best;
}

struct Discrepancy {
  SignPattern pattern;
  double gap;  // entrywise max-abs of the Jacobian difference on the cell
};

struct RealizationComparison {
  bool equal = false;
  double scale = 0.0;      // max neuron weight-product magnitude of both nets
  double max_gap = 0.0;    // worst cellwise Jacobian difference
  Matrix worst_gap;        // the Jacobian difference on the worst cell
  std::vector<Discrepancy> discrepancies;
};

// Exact decision of R(p) == R(q): both realizations vanish at 0 and are
// continuous piecewise linear, so cellwise Jacobian equality on the joint
// arrangement is equivalent to function equality.
inline RealizationComparison realizations_equal(const ShallowNet& p,
                                                const ShallowNet& q) {
  if (p.d() != q.d() || p.out_dim() != q.out_dim())
    throw UsageError("realizations_equal: nets must share input and output dimensions");

  RealizationComparison cmp;
  for (int i = 0; i < p.m(); ++i)
    cmp.scale = std::max(cmp.scale, max_abs(p.C.col(i)) * max_abs(p.A.row(i)));
  for (int i = 0; i < q.m(); ++i)
    cmp.scale = std::max(cmp.scale, max_abs(q.C.col(i)) * max_abs(q.A.row(i)));

  ShallowNet diff = concat(p, negate_outputs(q));
  auto witnesses = attainable_patterns(rows_of(diff.A));
  double tol = 1e-9 * cmp.scale;
  cmp.worst_gap = Matrix::Zero(p.out_dim(), p.d());
  for (const auto& w : witnesses) {
    Matrix gap = jacobian_of_pattern(diff, w.pattern);
    double g = max_abs(gap);
    if (g > cmp.max_gap) {
      cmp.max_gap = g;
      cmp.worst_gap = gap;
    }
    if (g > tol) cmp.discrepancies.push_back(Discrepancy{w.pattern, g});
  }
  cmp.equal = cmp.discrepancies.empty();
  return cmp;
}

}  // namespace relustab

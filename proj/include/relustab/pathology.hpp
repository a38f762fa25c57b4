#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "relustab/landscape.hpp"
#include "relustab/metrics.hpp"
#include "relustab/network.hpp"

namespace relustab {

// The degeneracy families: a target realization g_k (or Theta_k) whose
// parametrizations stay far from a fixed gamma even though the realizations
// converge.
enum class Family {
  exploding,            // gradients blow up while the uniform norm vanishes
  unbalanced_complete,  // weight pair whose product ignores one factor
  unbalanced_seq,       // balancing degrades along a sequence
  redundant,            // two hidden neurons share a direction
  opposite_zero,        // antipodal directions parametrize the zero function
  opposite_pair,        // antipodal directions across the pair, fixed gap
  local_min,            // parameter minimum that is no realization minimum
};

inline const char* to_string(Family f) {
  switch (f) {
    case Family::exploding: return "exploding";
    case Family::unbalanced_complete: return "unbalanced_complete";
    case Family::unbalanced_seq: return "unbalanced_seq";
    case Family::redundant: return "redundant";
    case Family::opposite_zero: return "opposite_zero";
    case Family::opposite_pair: return "opposite_pair";
    case Family::local_min: return "local_min";
  }
  return "?";
}

inline std::optional<Family> family_from_string(const std::string& s) {
  for (Family f : {Family::exploding, Family::unbalanced_complete,
                   Family::unbalanced_seq, Family::redundant, Family::opposite_zero,
                   Family::opposite_pair, Family::local_min})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

struct PathologyParams {
  int k = 1;
  double r = 1.0;  // unbalanced_complete only
  // opposite_zero: zero-sum directions and the fresh ridge direction v.
  std::optional<std::vector<RowVector>> directions;
  std::optional<RowVector> v;
};

struct PathologyCase {
  Family family;
  PathologyParams params;
  ShallowNet gamma;
  ShallowNet g_param;                // a parametrization of the target g_k
  double closed_form_distance = 0.0; // |g_k - R(gamma)|_{W^{1,inf}}
  double param_lower_bound = 0.0;    // 0 when the family states no bound
  std::optional<Dataset> data;       // local_min only
};

namespace detail {

inline PathologyCase make_case(Family f, PathologyParams p, ShallowNet gamma,
                               ShallowNet g_param, double closed_form,
                               double lower_bound) {
  return PathologyCase{f,          std::move(p),          std::move(gamma),
                       std::move(g_param), closed_form, lower_bound,
                       std::nullopt};
}

inline void validate_opposite_zero(const std::vector<RowVector>& dirs,
                                   const RowVector& v) {
  if (dirs.size() < 2)
    throw UsageError("opposite_zero: needs at least two directions");
  const long d = dirs[0].size();
  RowVector sum = RowVector::Zero(d);
  for (const auto& a : dirs) {
    if (a.size() != d) throw UsageError("opposite_zero: inconsistent dimensions");
    if (max_abs(a) == 0.0) throw UsageError("opposite_zero: zero direction");
    sum += a;
  }
  if (max_abs(sum) > 1e-12)
    throw UsageError("opposite_zero: directions must sum to zero");
  if (v.size() != d) throw UsageError("opposite_zero: v has the wrong dimension");
  if (max_abs(v) == 0.0) throw UsageError("opposite_zero: v must be nonzero");

  auto independent = [](const RowVector& a, const RowVector& b) {
    // rank of the 2 x d stack: some 2x2 minor must clear the scale.
    double scale = std::max(max_abs(a), max_abs(b));
    for (long i = 0; i < a.size(); ++i)
      for (long j = i + 1; j < a.size(); ++j)
        if (std::abs(a(i) * b(j) - a(j) * b(i)) > 1e-12 * scale * scale) return true;
    return false;
  };
  for (size_t i = 0; i < dirs.size(); ++i) {
    for (size_t j = i + 1; j < dirs.size(); ++j)
      if (!independent(dirs[i], dirs[j]))
        throw UsageError("opposite_zero: directions " + std::to_string(i) + "," +
                         std::to_string(j) + " are linearly dependent");
    if (!independent(dirs[i], v))
      throw UsageError("opposite_zero: v is linearly dependent with direction " +
                       std::to_string(i));
  }
}

}  // namespace detail

inline PathologyCase build_case(Family family, PathologyParams params) {
  const int k = params.k;
  if (k < 1) throw UsageError("build_case: k must be a positive integer");
  const double kd = static_cast<double>(k);

  switch (family) {
    case Family::exploding: {
      ShallowNet gamma(Matrix::Zero(2, 2), Matrix::Zero(1, 2));
      Matrix A(2, 2);
      A << kd, 0.0, kd, -1.0 / (kd * kd);
      Matrix C(1, 2);
      C << kd, -kd;
      return detail::make_case(family, params, std::move(gamma),
                               ShallowNet(std::move(A), std::move(C)), kd * kd, 0.0);
    }
    case Family::unbalanced_complete: {
      if (!(params.r > 0.0)) throw UsageError("unbalanced_complete: r must be > 0");
      Matrix Ag(1, 2);
      Ag << params.r, 0.0;
      Matrix Ap(1, 2);
      Ap << 0.0, 1.0;
      Matrix Cp(1, 1);
      Cp << 1.0 / kd;
      return detail::make_case(family, params,
                               ShallowNet(std::move(Ag), Matrix::Zero(1, 1)),
                               ShallowNet(std::move(Ap), std::move(Cp)), 1.0 / kd,
                               params.r);
    }
    case Family::unbalanced_seq: {
      Matrix Ag(1, 2);
      Ag << kd, 0.0;
      Matrix Cg(1, 1);
      Cg << 1.0 / (kd * kd);
      Matrix Ap(1, 2);
      Ap << 0.0, 1.0;
      Matrix Cp(1, 1);
      Cp << 1.0 / kd;
      return detail::make_case(family, params,
                               ShallowNet(std::move(Ag), std::move(Cg)),
                               ShallowNet(std::move(Ap), std::move(Cp)), 1.0 / kd,
                               kd);
    }
    case Family::redundant: {
      Matrix Ag(2, 2);
      Ag << 1.0, 0.0, 1.0, 0.0;
      Matrix Cg(1, 2);
      Cg << 1.0, 1.0;
      Matrix Ap(2, 2);
      Ap << 1.0, 0.0, 0.0, 1.0;
      Matrix Cp(1, 2);
      Cp << 2.0, 1.0 / kd;
      return detail::make_case(family, params,
                               ShallowNet(std::move(Ag), std::move(Cg)),
                               ShallowNet(std::move(Ap), std::move(Cp)), 1.0 / kd,
                               1.0);
    }
    case Family::opposite_zero: {
      std::vector<RowVector> dirs;
      RowVector v;
      if (params.directions) {
        dirs = *params.directions;
        if (!params.v) throw UsageError("opposite_zero: custom directions need v");
        v = *params.v;
      } else {
        dirs.resize(3);
        dirs[0] = RowVector(2);
        dirs[0] << 1.0, -0.5;
        dirs[1] = RowVector(2);
        dirs[1] << -1.0, -0.5;
        dirs[2] = RowVector(2);
        dirs[2] << 0.0, 1.0;
        v = RowVector(2);
        v << 1.0, 0.0;
        params.directions = dirs;
        params.v = v;
      }
      detail::validate_opposite_zero(dirs, v);
      const int mh = static_cast<int>(dirs.size());
      const int d = static_cast<int>(dirs[0].size());

      Matrix Ag(2 * mh, d);
      Matrix Cg = Matrix::Zero(1, 2 * mh);
      for (int i = 0; i < mh; ++i) {
        Ag.row(i) = dirs[static_cast<size_t>(i)];
        Ag.row(mh + i) = -dirs[static_cast<size_t>(i)];
        Cg(0, i) = 1.0;
        Cg(0, mh + i) = -1.0;
      }
      Matrix Ap = Matrix::Zero(2 * mh, d);
      Ap.row(0) = v;
      Matrix Cp = Matrix::Zero(1, 2 * mh);
      Cp(0, 0) = 1.0 / kd;

      double lb = std::numeric_limits<double>::infinity();
      for (const auto& a : dirs) {
        double val = a.squaredNorm() * v.squaredNorm() - std::pow(a.dot(v), 2);
        lb = std::min(lb, val);
      }
      lb /= static_cast<double>(d) * static_cast<double>(d);
      return detail::make_case(family, params,
                               ShallowNet(std::move(Ag), std::move(Cg)),
                               ShallowNet(std::move(Ap), std::move(Cp)), 1.0 / kd,
                               lb);
    }
    case Family::opposite_pair: {
      const double s2 = std::sqrt(2.0);
      Matrix At(3, 3);
      At << kd, kd, 1.0 / kd,
          -kd, kd, 1.0 / kd,
          0.0, -s2 * kd, 1.0 / (s2 * kd);
      Matrix C(1, 3);
      C << kd, kd, s2 * kd;
      Matrix Ag = -At;
      return detail::make_case(family, params, ShallowNet(std::move(Ag), C),
                               ShallowNet(std::move(At), C), 3.0, kd);
    }
    case Family::local_min: {
      Matrix Ag(1, 2);
      Ag << -1.0, 0.0;
      Matrix Ap(1, 2);
      Ap << 1.0, -1.0;
      Matrix Cp(1, 1);
      Cp << 1.0 / kd;
      auto pc = detail::make_case(family, params,
                                  ShallowNet(std::move(Ag), Matrix::Zero(1, 1)),
                                  ShallowNet(std::move(Ap), std::move(Cp)),
                                  1.0 / kd, 0.0);
      Vector x1(2), x2(2), y1(1), y2(1);
      x1 << -0.4, 0.6;
      y1 << 0.0;
      x2 << 0.8, 0.5;
      y2 << 1.0;
      pc.data = Dataset({{x1, y1}, {x2, y2}});
      return pc;
    }
  }
  throw UsageError("build_case: unknown family");
}

// Smallest max-norm distance from gamma to the family of reparametrizations
// of theta reachable by reordering neurons and rescaling each one by a
// positive factor. Per-slot costs separate, so the minimum over scalings is
// taken per neuron (log-scale scan plus golden-section refinement) and the
// minimum over permutations by exhaustive search (m <= 8).
inline double min_param_distance_over_family(const ShallowNet& theta,
                                             const ShallowNet& gamma) {
  if (!(gamma.arch == theta.arch))
    throw UsageError("min_param_distance_over_family: architecture mismatch");
  const int m = theta.m();
  if (m > 8)
    throw CapacityError("min_param_distance_over_family: m exceeds the search cap");

  auto slot_cost_at = [&](int j, int i, double lam) {
    return std::max(max_abs(lam * theta.A.row(j) - gamma.A.row(i)),
                    max_abs(theta.C.col(j) / lam - gamma.C.col(i)));
  };

  // cost[j][i]: theta neuron j placed against gamma neuron i.
  Matrix cost(m, m);
  const double lo = std::log(1e-6), hi = std::log(1e6);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (max_abs(theta.A.row(j)) == 0.0 && max_abs(theta.C.col(j)) == 0.0) {
        cost(j, i) = std::max(max_abs(gamma.A.row(i)), max_abs(gamma.C.col(i)));
        continue;
      }
      const int scan = 128;
      double best_t = lo;
      double best = std::numeric_limits<double>::infinity();
      for (int s = 0; s <= scan; ++s) {
        double t = lo + (hi - lo) * static_cast<double>(s) / scan;
        double c = slot_cost_at(j, i, std::exp(t));
        if (c < best) {
          best = c;
          best_t = t;
        }
      }
      double step = (hi - lo) / scan;
      double a = best_t - step, b = best_t + step;
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = slot_cost_at(j, i, std::exp(x1));
      double f2 = slot_cost_at(j, i, std::exp(x2));
      for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - gr * (b - a);
          f1 = slot_cost_at(j, i, std::exp(x1));
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (b - a);
          f2 = slot_cost_at(j, i, std::exp(x2));
        }
      }
      cost(j, i) = std::min(best, std::min(f1, f2));
    }
  }

  std::vector<int> perm(static_cast<size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
      worst = std::max(worst, cost(perm[static_cast<size_t>(i)], i));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct Measurement {
  Family family;
  int k = 1;
  double sobolev_dist = 0.0;       // |g_k - R(gamma)|
  double closed_form = 0.0;        // the family's stated value
  double seminorm_g = 0.0;         // |g_k|
  double min_param_distance = 0.0; // over the reorder-and-rescale family
  double param_lower_bound = 0.0;  // the family's stated bound (0 if none)
  std::optional<double> uniform_norm;  // exploding: sampled sup on (-1,1)^d
  std::optional<double> loss_gamma;    // local_min: MSE at gamma
  std::optional<double> loss_g;        // local_min: MSE at g_k
};

inline Measurement measure_case(const PathologyCase& pc) {
  Measurement mm;
  mm.family = pc.family;
  mm.k = pc.params.k;
  mm.closed_form = pc.closed_form_distance;
  mm.param_lower_bound = pc.param_lower_bound;
  mm.sobolev_dist = sobolev_distance(pc.g_param, pc.gamma).value;
  mm.seminorm_g = seminorm(pc.g_param).value;
  mm.min_param_distance = min_param_distance_over_family(pc.g_param, pc.gamma);
  if (pc.family == Family::exploding)
    mm.uniform_norm = uniform_norm_box(pc.g_param, 1.0, 201);
  if (pc.family == Family::local_min && pc.data) {
    mm.loss_gamma = mse_loss(pc.gamma, *pc.data);
    mm.loss_g = mse_loss(pc.g_param, *pc.data);
  }
  return mm;
}

}  // namespace relustab

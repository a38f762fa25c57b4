#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "relustab/metrics.hpp"
#include "relustab/network.hpp"

namespace relustab {

// Two inf-normalized directions are treated as parallel (or antipodal) when
// they differ (or sum) by at most this much entrywise.
inline constexpr double kDirectionTolerance = 1e-9;

namespace detail {

inline bool directions_parallel(const RowVector& u, const RowVector& v) {
  return max_abs(u - v) <= kDirectionTolerance;
}

inline bool directions_antipodal(const RowVector& u, const RowVector& v) {
  return max_abs(u + v) <= kDirectionTolerance;
}

// Inf-normalized nonzero directions; zero rows get an empty slot flagged by
// the paired index list.
inline std::vector<int> nonzero_neurons(const ShallowNet& net) {
  std::vector<int> idx;
  for (int i = 0; i < net.m(); ++i)
    if (max_abs(net.A.row(i)) > 0.0) idx.push_back(i);
  return idx;
}

inline RowVector unit_direction(const ShallowNet& net, int i) {
  RowVector a = net.A.row(i);
  return a / max_abs(a);
}

}  // namespace detail

// For each neuron, if either the direction or the output weight vanishes,
// both are set to exact zero. The realization is unchanged.
inline ShallowNet normalize_zero_pairs(const ShallowNet& net) {
  Matrix A = net.A;
  Matrix C = net.C;
  for (int i = 0; i < net.m(); ++i) {
    if (max_abs(A.row(i)) == 0.0 || max_abs(C.col(i)) == 0.0) {
      A.row(i).setZero();
      C.col(i).setZero();
    }
  }
  return ShallowNet(std::move(A), std::move(C));
}

// Rescales each nonzero neuron so that ||a_i||_inf == ||c_i||_inf, using the
// positive homogeneity of the ReLU. Expects zero pairs normalized. Neurons
// already balanced to 1e-12 relative are left bit-identical, which makes the
// map exactly idempotent.
inline ShallowNet balance(const ShallowNet& net) {
  Matrix A = net.A;
  Matrix C = net.C;
  for (int i = 0; i < net.m(); ++i) {
    double an = max_abs(A.row(i));
    double cn = max_abs(C.col(i));
    if (an == 0.0 || cn == 0.0) continue;
    if (std::abs(an - cn) <= 1e-12 * std::max(an, cn)) continue;
    A.row(i) *= std::sqrt(cn / an);
    C.col(i) *= std::sqrt(an / cn);
  }
  return ShallowNet(std::move(A), std::move(C));
}

// Merges groups of positively parallel directions into the smallest-index
// representative of each group, rescaling output weights by the ratio of
// direction norms; the other group members are zeroed in place so the
// architecture is preserved. Expects zero pairs normalized.
inline ShallowNet merge_parallel(const ShallowNet& net) {
  Matrix A = net.A;
  Matrix C = net.C;
  auto nonzero = detail::nonzero_neurons(net);

  std::vector<int> rep;                       // class representatives
  std::vector<std::vector<int>> members;      // class members incl. rep
  std::vector<RowVector> rep_dir;
  for (int i : nonzero) {
    RowVector u = detail::unit_direction(net, i);
    bool placed = false;
    for (size_t k = 0; k < rep.size(); ++k) {
      if (detail::directions_parallel(u, rep_dir[k])) {
        members[k].push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      rep.push_back(i);
      members.push_back({i});
      rep_dir.push_back(u);
    }
  }

  for (size_t k = 0; k < rep.size(); ++k) {
    if (members[k].size() < 2) continue;
    int j0 = rep[k];
    double base = max_abs(net.A.row(j0));
    Vector merged = Vector::Zero(net.out_dim());
    for (int j : members[k]) merged += net.C.col(j) * (max_abs(net.A.row(j)) / base);
    C.col(j0) = merged;
    for (int j : members[k]) {
      if (j == j0) continue;
      A.row(j).setZero();
      C.col(j).setZero();
    }
  }
  return ShallowNet(std::move(A), std::move(C));
}

struct ConditionViolation {
  std::string condition;  // "C.1", "C.2", "C.3a", "C.3b"
  std::vector<int> neurons;
  double value = 0.0;
};

struct ConditionReport {
  double beta_used = 0.0;
  double r = 0.0;  // Sobolev distance between the checked pair
  bool c1_ok = true;
  bool c2_ok = true;
  bool c3a_ok = true;
  bool c3b_ok = true;
  std::vector<ConditionViolation> violations;

  bool all_ok() const { return c1_ok && c2_ok && c3a_ok && c3b_ok; }
};

// Checks the hypotheses of the single-output reparametrization theorem for
// the pair (gamma, theta): C.1 bounds the small-product neurons of gamma by
// beta, C.2 forbids redundant directions within gamma, C.3b forbids
// antipodal directions within each net, C.3a across the two nets.
inline ConditionReport check_conditions(const ShallowNet& gamma,
                                        const ShallowNet& theta, double beta) {
  if (!(gamma.arch == theta.arch))
    throw UsageError("check_conditions: architecture mismatch");

  ConditionReport rep;
  rep.beta_used = beta;
  rep.r = sobolev_distance(theta, gamma).value;

  auto ig = detail::nonzero_neurons(gamma);
  auto it = detail::nonzero_neurons(theta);

  for (int i = 0; i < gamma.m(); ++i) {
    double cn = max_abs(gamma.C.col(i));
    double an = max_abs(gamma.A.row(i));
    if (cn * an <= 2.0 * rep.r) {
      double worst = std::max(cn, an);
      if (worst > beta) {
        rep.c1_ok = false;
        rep.violations.push_back({"C.1", {i}, worst});
      }
    }
  }

  for (size_t a = 0; a < ig.size(); ++a) {
    for (size_t b = a + 1; b < ig.size(); ++b) {
      RowVector u = detail::unit_direction(gamma, ig[a]);
      RowVector v = detail::unit_direction(gamma, ig[b]);
      if (detail::directions_parallel(u, v)) {
        rep.c2_ok = false;
        rep.violations.push_back({"C.2", {ig[a], ig[b]}, max_abs(u - v)});
      }
      if (detail::directions_antipodal(u, v)) {
        rep.c3b_ok = false;
        rep.violations.push_back({"C.3b", {ig[a], ig[b]}, max_abs(u + v)});
      }
    }
  }
  for (size_t a = 0; a < it.size(); ++a) {
    for (size_t b = a + 1; b < it.size(); ++b) {
      RowVector u = detail::unit_direction(theta, it[a]);
      RowVector v = detail::unit_direction(theta, it[b]);
      if (detail::directions_antipodal(u, v)) {
        rep.c3b_ok = false;
        rep.violations.push_back({"C.3b", {it[a], it[b]}, max_abs(u + v)});
      }
    }
  }
  for (int gi : ig) {
    for (int tj : it) {
      RowVector u = detail::unit_direction(gamma, gi);
      RowVector v = detail::unit_direction(theta, tj);
      if (detail::directions_antipodal(u, v)) {
        rep.c3a_ok = false;
        rep.violations.push_back({"C.3a", {gi, tj}, max_abs(u + v)});
      }
    }
  }
  return rep;
}

// Raised when an operation requires the theorem conditions and they fail;
// carries the full report for callers that surface it.
class ConditionError : public PreconditionError {
 public:
  ConditionError(const std::string& what, ConditionReport report)
      : PreconditionError(what), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

struct RestrictedReport {
  bool ok = true;
  std::vector<std::string> reasons;
};

// Membership in the restricted parametrization space: every nonzero neuron
// balanced, no two nonzero directions parallel, and the last two input
// coordinates of every nonzero direction strictly positive. Zero pairs are
// vacuous so that the merge step (which zeroes neurons in place) composes.
inline RestrictedReport in_restricted_space(const ShallowNet& net) {
  RestrictedReport rep;
  if (net.d() < 2) {
    rep.ok = false;
    rep.reasons.push_back("input dimension must be at least 2");
    return rep;
  }
  double tau = 1e-8 * max_abs(net.A);

  for (int i = 0; i < net.m(); ++i) {
    double an = max_abs(net.A.row(i));
    double cn = max_abs(net.C.col(i));
    if (std::abs(an - cn) > 1e-9 * std::max(an, cn)) {
      rep.ok = false;
      rep.reasons.push_back("unbalanced neuron " + std::to_string(i));
    }
    if (an == 0.0 && cn == 0.0) continue;
    if (an > 0.0) {
      if (!(net.A(i, net.d() - 2) > tau) || !(net.A(i, net.d() - 1) > tau)) {
        rep.ok = false;
        rep.reasons.push_back("neuron " + std::to_string(i) +
                              " lacks strictly positive last two coordinates");
      }
    }
  }

  auto nz = detail::nonzero_neurons(net);
  for (size_t a = 0; a < nz.size(); ++a) {
    for (size_t b = a + 1; b < nz.size(); ++b) {
      if (detail::directions_parallel(detail::unit_direction(net, nz[a]),
                                      detail::unit_direction(net, nz[b]))) {
        rep.ok = false;
        rep.reasons.push_back("parallel directions " + std::to_string(nz[a]) + "," +
                              std::to_string(nz[b]));
      }
    }
  }
  return rep;
}

}  // namespace relustab

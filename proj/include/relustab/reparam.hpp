#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "relustab/canonical.hpp"
#include "relustab/metrics.hpp"
#include "relustab/network.hpp"

namespace relustab {

// Per-neuron label recording which reparametrization estimate applies.
// I1 marks unmatched slots; A/B1/B2/B3 are the single-output cases,
// A1/A2/B the balanced multi-output cases.
enum class NeuronCase { i1, a, a1, a2, b, b1, b2, b3 };

inline const char* to_string(NeuronCase c) {
  switch (c) {
    case NeuronCase::i1: return "I1";
    case NeuronCase::a: return "A";
    case NeuronCase::a1: return "A1";
    case NeuronCase::a2: return "A2";
    case NeuronCase::b: return "B";
    case NeuronCase::b1: return "B1";
    case NeuronCase::b2: return "B2";
    case NeuronCase::b3: return "B3";
  }
  return "?";
}

struct Matching {
  std::vector<int> pi;             // slot i receives theta neuron pi[i]
  std::vector<int> i1;             // unmatched slots (small or zero neurons)
  std::vector<int> i2;             // slots with a positively parallel partner
  std::vector<NeuronCase> cases;   // filled in by reparametrize
};

enum class ReparamMode { restricted, general };

struct Certificate {
  ShallowNet phi;
  double r = 0.0;         // |R(theta) - R(gamma)|_{W^{1,inf}}
  double bound = 0.0;     // 4 sqrt(r) or beta + 2 sqrt(r)
  double achieved = 0.0;  // ||phi - gamma||_inf
  Matching matching;
  bool restricted = true;
  double beta = 0.0;  // general mode only
};

// Pairs each nonzero gamma direction with the unique positively parallel
// theta direction, when one exists. Expects zero pairs normalized on both
// sides, no parallel pair within theta (merge first), and C.2 on gamma.
inline Matching match_directions(const ShallowNet& gamma, const ShallowNet& theta) {
  if (!(gamma.arch == theta.arch))
    throw UsageError("match_directions: architecture mismatch");
  const int m = gamma.m();

  auto ig = detail::nonzero_neurons(gamma);
  auto it = detail::nonzero_neurons(theta);

  auto check_c2 = [](const ShallowNet& net, const std::vector<int>& idx,
                     const char* who) {
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = a + 1; b < idx.size(); ++b)
        if (detail::directions_parallel(detail::unit_direction(net, idx[a]),
                                        detail::unit_direction(net, idx[b]))) {
          ConditionReport rep;
          rep.c2_ok = false;
          rep.violations.push_back(
              {"C.2", {idx[a], idx[b]},
               max_abs(detail::unit_direction(net, idx[a]) -
                       detail::unit_direction(net, idx[b]))});
          throw ConditionError(std::string("match_directions: ") + who +
                                   " has redundant directions (C.2)",
                               rep);
        }
  };
  check_c2(gamma, ig, "gamma");
  check_c2(theta, it, "theta");

  Matching match;
  match.pi.assign(static_cast<size_t>(m), -1);
  std::vector<bool> used(static_cast<size_t>(m), false);

  for (int i : ig) {
    RowVector u = detail::unit_direction(gamma, i);
    for (int j : it) {
      if (detail::directions_parallel(u, detail::unit_direction(theta, j))) {
        match.pi[static_cast<size_t>(i)] = j;
        used[static_cast<size_t>(j)] = true;
        match.i2.push_back(i);
        break;
      }
    }
  }
  std::vector<int> free_theta;
  for (int j = 0; j < m; ++j)
    if (!used[static_cast<size_t>(j)]) free_theta.push_back(j);
  size_t next = 0;
  for (int i = 0; i < m; ++i) {
    if (match.pi[static_cast<size_t>(i)] < 0) {
      match.i1.push_back(i);
      match.pi[static_cast<size_t>(i)] = free_theta[next++];
    }
  }
  return match;
}

namespace detail {

inline void rebalance_slot(Matrix& A, Matrix& C, int i) {
  double an = max_abs(A.row(i));
  double cn = max_abs(C.col(i));
  if (an == 0.0 || cn == 0.0) return;
  if (std::abs(an - cn) <= 1e-12 * std::max(an, cn)) return;
  A.row(i) *= std::sqrt(cn / an);
  C.col(i) *= std::sqrt(an / cn);
}

}  // namespace detail

// The constructive inverse-stability step: given gamma and a parametrization
// theta of the target realization, builds phi with R(phi) = R(theta) whose
// distance to gamma is covered by the certificate bound.
//
// Restricted mode (any output dimension): both nets must lie in the
// restricted space; phi is theta reordered by the direction matching and the
// bound is 4 sqrt(r). General mode (single output): theta is first cleaned
// (zero pairs, parallel merges), the conditions C.1-C.3 are checked against
// the supplied beta, matched slots are rebalanced case by case, and the
// bound is beta + 2 sqrt(r).
inline Certificate reparametrize(const ShallowNet& gamma, const ShallowNet& theta,
                                 ReparamMode mode,
                                 std::optional<double> beta = std::nullopt) {
  if (!(gamma.arch == theta.arch))
    throw UsageError("reparametrize: architecture mismatch");

  const int m = gamma.m();
  Certificate cert{normalize_zero_pairs(theta)};

  if (mode == ReparamMode::restricted) {
    auto rg = in_restricted_space(gamma);
    auto rt = in_restricted_space(theta);
    if (!rg.ok || !rt.ok) {
      std::string msg = "reparametrize: inputs outside the restricted space:";
      for (const auto& reason : rg.reasons) msg += " gamma: " + reason + ";";
      for (const auto& reason : rt.reasons) msg += " theta: " + reason + ";";
      throw PreconditionError(msg);
    }
    cert.restricted = true;
  } else {
    if (gamma.out_dim() != 1)
      throw UsageError("reparametrize: general mode supports output dimension 1 only");
    if (!beta)
      throw UsageError("reparametrize: general mode requires beta");
    cert.restricted = false;
    cert.beta = *beta;
  }

  ShallowNet theta_w = normalize_zero_pairs(theta);
  if (mode == ReparamMode::general) {
    theta_w = merge_parallel(theta_w);
    ConditionReport rep = check_conditions(gamma, theta_w, *beta);
    if (!rep.all_ok())
      throw ConditionError("reparametrize: conditions C.1-C.3 fail", rep);
    cert.r = rep.r;
  } else {
    cert.r = sobolev_distance(theta, gamma).value;
  }

  ShallowNet gamma_n = normalize_zero_pairs(gamma);
  Matching match = match_directions(gamma_n, theta_w);
  match.cases.assign(static_cast<size_t>(m), NeuronCase::i1);

  Matrix A(m, gamma.d());
  Matrix C(gamma.out_dim(), m);
  for (int i = 0; i < m; ++i) {
    A.row(i) = theta_w.A.row(match.pi[static_cast<size_t>(i)]);
    C.col(i) = theta_w.C.col(match.pi[static_cast<size_t>(i)]);
  }

  const double two_r = 2.0 * cert.r;
  for (int i : match.i1) detail::rebalance_slot(A, C, i);
  for (int i : match.i2) {
    double prod_g = max_abs(gamma.C.col(i)) * max_abs(gamma.A.row(i));
    double prod_t = max_abs(C.col(i)) * max_abs(A.row(i));
    auto& label = match.cases[static_cast<size_t>(i)];
    if (mode == ReparamMode::restricted) {
      // Already balanced; the label records which estimate covers the slot.
      label = prod_g <= two_r   ? NeuronCase::a1
              : prod_t <= two_r ? NeuronCase::a2
                                : NeuronCase::b;
      continue;
    }
    double cg = gamma.C(0, i);
    double ag_norm = max_abs(gamma.A.row(i));
    if (prod_g <= two_r) {
      detail::rebalance_slot(A, C, i);
      label = NeuronCase::a;
    } else if (std::abs(cg) > ag_norm) {
      double scale = C(0, i) / cg;
      A.row(i) *= scale;
      C(0, i) = cg;
      label = NeuronCase::b1;
    } else if (std::abs(cg) < ag_norm) {
      double scale = max_abs(A.row(i)) / ag_norm;
      A.row(i) = gamma.A.row(i);
      C(0, i) *= scale;
      label = NeuronCase::b2;
    } else {
      detail::rebalance_slot(A, C, i);
      label = NeuronCase::b3;
    }
  }

  cert.phi = ShallowNet(std::move(A), std::move(C));
  cert.matching = std::move(match);
  cert.bound = cert.restricted ? 4.0 * std::sqrt(cert.r)
                               : cert.beta + 2.0 * std::sqrt(cert.r);
  cert.achieved = param_distance(cert.phi, gamma);
  return cert;
}

struct CertificateCheck {
  bool realization_ok = false;  // R(phi) == R(theta)
  bool bound_ok = false;        // r and the bound formula recompute
  bool distance_ok = false;     // achieved recomputes and stays within bound
  double r_recomputed = 0.0;
  double achieved_recomputed = 0.0;

  bool passed() const { return realization_ok && bound_ok && distance_ok; }
};

// Independent audit of a certificate: recomputes r from scratch, checks the
// bound formula, the realization equality of phi, and the parameter
// distance.
inline CertificateCheck verify_certificate(const ShallowNet& gamma,
                                           const ShallowNet& theta,
                                           const Certificate& cert) {
  CertificateCheck chk;
  chk.r_recomputed = sobolev_distance(theta, gamma).value;
  double bound2 = cert.restricted ? 4.0 * std::sqrt(chk.r_recomputed)
                                  : cert.beta + 2.0 * std::sqrt(chk.r_recomputed);
  chk.bound_ok =
      std::abs(cert.r - chk.r_recomputed) <= 1e-9 * std::max(1.0, chk.r_recomputed) &&
      std::abs(cert.bound - bound2) <= 1e-9 * std::max(1.0, bound2);
  chk.realization_ok = realizations_equal(cert.phi, theta).equal;
  chk.achieved_recomputed = param_distance(cert.phi, gamma);
  chk.distance_ok =
      std::abs(cert.achieved - chk.achieved_recomputed) <=
          1e-9 * std::max(1.0, chk.achieved_recomputed) &&
      chk.achieved_recomputed <= cert.bound + 1e-9 * std::max(1.0, cert.bound);
  return chk;
}

struct Correspondence {
  std::vector<int> pi;  // phi neuron i corresponds to theta neuron pi[i]
  Vector lambda;        // positive scalings, a_i^phi = lambda_i a_{pi(i)}^theta
};

namespace detail {

inline int row_rank(Matrix M, double tol_rel) {
  const int rows = static_cast<int>(M.rows());
  const int cols = static_cast<int>(M.cols());
  double tol = tol_rel * std::max(1.0, max_abs(M));
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    double best = tol;
    for (int r = rank; r < rows; ++r) {
      if (std::abs(M(r, col)) > best) {
        best = std::abs(M(r, col));
        piv = r;
      }
    }
    if (piv < 0) continue;
    M.row(piv).swap(M.row(rank));
    for (int r = rank + 1; r < rows; ++r)
      M.row(r) -= (M(r, col) / M(rank, col)) * M.row(rank);
    ++rank;
  }
  return rank;
}

}  // namespace detail

// Recovers the unique reordering-and-rescaling correspondence between two
// parametrizations of the same realization, valid when theta has linearly
// independent directions and no vanishing output weight. Each recovered
// equation is verified entrywise; any mismatch signals that the realizations
// differ.
inline Correspondence recover_correspondence(const ShallowNet& theta,
                                             const ShallowNet& phi) {
  if (!(theta.arch == phi.arch))
    throw UsageError("recover_correspondence: architecture mismatch");
  const int m = theta.m();

  if (detail::row_rank(theta.A, 1e-9) < m)
    throw PreconditionError(
        "recover_correspondence: theta directions are not linearly independent");
  for (int i = 0; i < m; ++i)
    if (max_abs(theta.C.col(i)) == 0.0)
      throw PreconditionError("recover_correspondence: theta has a vanishing "
                              "output weight (neuron " + std::to_string(i) + ")");

  Correspondence co;
  co.pi.assign(static_cast<size_t>(m), -1);
  co.lambda = Vector::Zero(m);
  std::vector<bool> used(static_cast<size_t>(m), false);

  for (int i = 0; i < m; ++i) {
    double phi_norm = max_abs(phi.A.row(i));
    if (phi_norm == 0.0)
      throw InconsistencyError("recover_correspondence: phi neuron " +
                               std::to_string(i) + " vanishes");
    RowVector u = phi.A.row(i) / phi_norm;
    int found = -1;
    for (int j = 0; j < m; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      if (detail::directions_parallel(u, detail::unit_direction(theta, j))) {
        found = j;
        break;
      }
    }
    if (found < 0)
      throw InconsistencyError(
          "recover_correspondence: no positively parallel theta direction for "
          "phi neuron " + std::to_string(i));

    double lambda = phi_norm / max_abs(theta.A.row(found));
    RowVector da = phi.A.row(i) - lambda * theta.A.row(found);
    Vector dc = phi.C.col(i) - theta.C.col(found) / lambda;
    double tol_a = 1e-9 * std::max(phi_norm, lambda * max_abs(theta.A.row(found)));
    double tol_c =
        1e-9 * std::max(max_abs(phi.C.col(i)), max_abs(theta.C.col(found)) / lambda);
    if (max_abs(da) > tol_a || max_abs(dc) > tol_c)
      throw InconsistencyError(
          "recover_correspondence: weights of phi neuron " + std::to_string(i) +
          " are not a rescaling of theta neuron " + std::to_string(found));

    co.pi[static_cast<size_t>(i)] = found;
    co.lambda(i) = lambda;
    used[static_cast<size_t>(found)] = true;
  }
  return co;
}

}  // namespace relustab

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "relustab/augment.hpp"
#include "relustab/network.hpp"

namespace relustab {

struct Dataset {
  std::vector<std::pair<Vector, Vector>> samples;  // (x, y)
  bool augmented = false;

  Dataset() = default;
  explicit Dataset(std::vector<std::pair<Vector, Vector>> s, bool aug = false)
      : samples(std::move(s)), augmented(aug) {
    if (samples.empty()) throw UsageError("dataset must be nonempty");
    for (const auto& [x, y] : samples) {
      if (x.size() != samples[0].first.size() || y.size() != samples[0].second.size())
        throw UsageError("dataset samples must share dimensions");
    }
  }

  int input_dim() const { return static_cast<int>(samples[0].first.size()); }
  int output_dim() const { return static_cast<int>(samples[0].second.size()); }
  int size() const { return static_cast<int>(samples.size()); }
};

inline Dataset augment_dataset(const Dataset& data) {
  std::vector<std::pair<Vector, Vector>> out;
  out.reserve(data.samples.size());
  for (const auto& [x, y] : data.samples) out.emplace_back(augment_point(x), y);
  return Dataset(std::move(out), true);
}

inline double mse_loss(const ShallowNet& net, const Dataset& data) {
  if (data.input_dim() != net.d() || data.output_dim() != net.out_dim())
    throw UsageError("mse_loss: dataset dimensions do not match the network");
  double total = 0.0;
  for (const auto& [x, y] : data.samples) total += (eval(net, x) - y).squaredNorm();
  return total / static_cast<double>(data.size());
}

inline double mse_loss(const BiasedShallowNet& net, const Dataset& data) {
  if (data.input_dim() != net.d() || data.output_dim() != net.out_dim())
    throw UsageError("mse_loss: dataset dimensions do not match the network");
  double total = 0.0;
  for (const auto& [x, y] : data.samples)
    total += (eval_biased(net, x) - y).squaredNorm();
  return total / static_cast<double>(data.size());
}

// A parameter-space local minimum of radius r transfers to a realization-
// space local minimum of radius (r/s)^(1/alpha) under (s, alpha) inverse
// stability.
inline double radius_transfer(double r, double s, double alpha) {
  if (!(r > 0.0) || !(s > 0.0))
    throw UsageError("radius_transfer: r and s must be positive");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw UsageError("radius_transfer: alpha must lie in (0, 1]");
  return std::pow(r / s, 1.0 / alpha);
}

struct QualityBoundInputs {
  double loss_at_g = 0.0;  // loss of the comparison realization
  double c = 0.0;          // Lipschitz constant of the loss on S
  double r_prime = 0.0;    // radius of the realization-space local minimum
  double dist = 0.0;       // distance between the minimum and the comparison
  double eta = 0.0;        // approximability gap of the architecture on S
};

// Quality estimate for a realization-space local minimum:
// loss(g*) <= loss(g) + (2c / r') * dist * eta, valid when r' >= 2 eta.
inline double quality_bound(const QualityBoundInputs& q) {
  if (q.loss_at_g < 0.0 || q.c < 0.0 || q.r_prime < 0.0 || q.dist < 0.0 ||
      q.eta < 0.0)
    throw UsageError("quality_bound: inputs must be nonnegative");
  if (q.r_prime < 2.0 * q.eta)
    throw PreconditionError("quality_bound: requires r' >= 2 eta");
  return q.loss_at_g + (2.0 * q.c / q.r_prime) * q.dist * q.eta;
}

struct LocalMinVerdict {
  bool counterexample_found = false;
  double base_loss = 0.0;
  double best_loss = 0.0;
  long trials = 0;
  std::optional<ShallowNet> improving;  // the perturbation that lowered the loss

  // A falsification search, never a proof: the hypothesis quantifies over a
  // continuum of perturbations.
  const char* verdict() const {
    return counterexample_found ? "improving perturbation found"
                                : "no counterexample found";
  }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Samples perturbations uniformly in the inf-ball of the given radius
// (deterministic per-trial streams) and reports the first one that lowers
// the MSE by more than 1e-12, if any.
inline LocalMinVerdict empirical_local_min_check(const ShallowNet& net,
                                                 const Dataset& data, double radius,
                                                 long trials, std::uint64_t seed) {
  if (trials < 1) throw UsageError("empirical_local_min_check: trials must be >= 1");
  if (!(radius > 0.0))
    throw UsageError("empirical_local_min_check: radius must be positive");

  LocalMinVerdict verdict;
  verdict.base_loss = mse_loss(net, data);
  verdict.best_loss = verdict.base_loss;
  verdict.trials = trials;

  for (long t = 0; t < trials; ++t) {
    std::mt19937_64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::uniform_real_distribution<double> unif(-radius, radius);
    Matrix A = net.A;
    Matrix C = net.C;
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j) A(i, j) += unif(rng);
    for (int i = 0; i < C.rows(); ++i)
      for (int j = 0; j < C.cols(); ++j) C(i, j) += unif(rng);
    ShallowNet candidate(std::move(A), std::move(C));
    double loss = mse_loss(candidate, data);
    if (loss < verdict.best_loss) verdict.best_loss = loss;
    if (loss < verdict.base_loss - 1e-12) {
      verdict.counterexample_found = true;
      verdict.improving = std::move(candidate);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace relustab

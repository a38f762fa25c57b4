#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "relustab/errors.hpp"

namespace relustab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Entrywise maximum absolute value. This is the matrix infinity norm used
// throughout: on parameters, on Jacobians, and inside the seminorm.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

struct Architecture {
  int d = 0;  // input dimension
  int m = 0;  // hidden width
  int D = 0;  // output dimension

  Architecture() = default;
  Architecture(int d_, int m_, int D_) : d(d_), m(m_), D(D_) {
    if (d < 1 || m < 1 || D < 1)
      throw UsageError("architecture dimensions must be positive");
  }

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Bias-free shallow net x -> C * relu(A x). Rows of A are the hidden
// directions a_i, columns of C the output weights c_i. Immutable by
// convention: operations return fresh values.
struct ShallowNet {
  Architecture arch;
  Matrix A;  // m x d
  Matrix C;  // D x m

  ShallowNet(Matrix A_, Matrix C_) : A(std::move(A_)), C(std::move(C_)) {
    if (A.rows() < 1 || A.cols() < 1 || C.rows() < 1)
      throw UsageError("network matrices must be nonempty");
    if (C.cols() != A.rows())
      throw UsageError("C must have one column per hidden neuron");
    if (!all_finite(A) || !all_finite(C))
      throw UsageError("network weights must be finite");
    arch = Architecture(static_cast<int>(A.cols()), static_cast<int>(A.rows()),
                        static_cast<int>(C.rows()));
  }

  int d() const { return arch.d; }
  int m() const { return arch.m; }
  int out_dim() const { return arch.D; }

  RowVector direction(int i) const { return A.row(i); }
  Vector out_weight(int i) const { return C.col(i); }
};

// Shallow net with hidden biases b and output bias e:
// x -> C * relu(A x + b) + e.
struct BiasedShallowNet {
  Architecture arch;
  Matrix A;  // m x d
  Vector b;  // m
  Matrix C;  // D x m
  Vector e;  // D

  BiasedShallowNet(Matrix A_, Vector b_, Matrix C_, Vector e_)
      : A(std::move(A_)), b(std::move(b_)), C(std::move(C_)), e(std::move(e_)) {
    if (A.rows() < 1 || A.cols() < 1 || C.rows() < 1)
      throw UsageError("network matrices must be nonempty");
    if (C.cols() != A.rows())
      throw UsageError("C must have one column per hidden neuron");
    if (b.size() != A.rows()) throw UsageError("b must have one entry per neuron");
    if (e.size() != C.rows()) throw UsageError("e must match the output dimension");
    if (!all_finite(A) || !all_finite(C) || !b.allFinite() || !e.allFinite())
      throw UsageError("network weights must be finite");
    arch = Architecture(static_cast<int>(A.cols()), static_cast<int>(A.rows()),
                        static_cast<int>(C.rows()));
  }

  int d() const { return arch.d; }
  int m() const { return arch.m; }
  int out_dim() const { return arch.D; }
};

// Active-neuron indicator vector s in {0,1}^m; indexes a linear region.
struct SignPattern {
  std::vector<std::uint8_t> bits;

  SignPattern() = default;
  explicit SignPattern(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

  int size() const { return static_cast<int>(bits.size()); }
  bool active(int i) const { return bits[static_cast<size_t>(i)] != 0; }

  friend bool operator==(const SignPattern& a, const SignPattern& b) {
    return a.bits == b.bits;
  }
  friend auto operator<=>(const SignPattern& a, const SignPattern& b) {
    return a.bits <=> b.bits;
  }

  std::string str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto bit : bits) s.push_back(bit ? '1' : '0');
    return s;
  }
};

}  // namespace relustab

#pragma once

#include "relustab/canonical.hpp"
#include "relustab/network.hpp"

namespace relustab {

// Appends the two homogenization coordinates 1 and -1.
inline Vector augment_point(const Vector& x) {
  if (x.size() < 1) throw UsageError("augment_point: input must have d >= 1");
  Vector out(x.size() + 2);
  out.head(x.size()) = x;
  out(x.size()) = 1.0;
  out(x.size() + 1) = -1.0;
  return out;
}

// R(theta)(x) = C relu(A x + b) + e.
inline Vector eval_biased(const BiasedShallowNet& net, const Vector& x) {
  if (x.size() != net.d()) throw UsageError("eval_biased: dimension mismatch");
  return net.C * relu(net.A * x + net.b) + net.e;
}

// Embeds a biased shallow net into the bias-free restricted space two input
// dimensions up and one neuron wider, so that evaluating the lift at
// (x, 1, -1) reproduces the biased realization. Hidden biases split as
// b = b+ - b- with both parts >= 1; dead neurons and a vanishing output bias
// are replaced by placeholder directions whose ReLU input is identically
// zero at augmented points. Every neuron is balanced at the end.
//
// Degenerate inputs (e.g. two dead neurons) can produce parallel placeholder
// directions; run merge_parallel afterwards before relying on restricted-
// space membership.
inline ShallowNet lift_biased(const BiasedShallowNet& theta) {
  const int d = theta.d();
  const int m = theta.m();
  const int D = theta.out_dim();

  Matrix A = Matrix::Zero(m + 1, d + 2);
  Matrix C = Matrix::Zero(D, m + 1);

  for (int i = 0; i < m; ++i) {
    if (max_abs(theta.C.col(i)) == 0.0) {
      C.col(i) = Vector::Ones(D);
      A(i, d) = 1.0;
      A(i, d + 1) = 1.0;
      continue;
    }
    double bp = theta.b(i) >= 0.0 ? theta.b(i) + 1.0 : 1.0;
    double bm = theta.b(i) >= 0.0 ? 1.0 : -theta.b(i) + 1.0;
    A.row(i).head(d) = theta.A.row(i);
    A(i, d) = bp;
    A(i, d + 1) = bm;
    C.col(i) = theta.C.col(i);
  }

  if (max_abs(theta.e) != 0.0) {
    C.col(m) = theta.e;
    A(m, d) = 2.0;
    A(m, d + 1) = 1.0;
  } else {
    C.col(m) = Vector::Ones(D);
    A(m, d) = 1.0;
    A(m, d + 1) = 1.0;
  }

  return balance(ShallowNet(std::move(A), std::move(C)));
}

}  // namespace relustab

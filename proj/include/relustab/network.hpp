#pragma once

#include <algorithm>
#include <string>

#include "relustab/types.hpp"

namespace relustab {

// Scale-invariant guard for "x lies on the hyperplane of neuron i".
inline double boundary_tolerance(const RowVector& a, const Vector& x) {
  return 1e-10 * std::max(1.0, max_abs(a) * max_abs(x));
}

inline Vector relu(Vector v) {
  return v.cwiseMax(0.0);
}

// R(net)(x) = C relu(A x).
inline Vector eval(const ShallowNet& net, const Vector& x) {
  if (x.size() != net.d())
    throw UsageError("eval: input has length " + std::to_string(x.size()) +
                     ", expected " + std::to_string(net.d()));
  return net.C * relu(net.A * x);
}

namespace detail {

// Throws BoundaryError unless every nonzero direction sees x strictly off
// its hyperplane. Returns the activations A x.
inline Vector require_interior(const ShallowNet& net, const Vector& x) {
  Vector z = net.A * x;
  for (int i = 0; i < net.m(); ++i) {
    RowVector a = net.A.row(i);
    if (max_abs(a) == 0.0) continue;
    if (std::abs(z(i)) <= boundary_tolerance(a, x))
      throw BoundaryError(
          "point lies on the separating hyperplane of neuron " + std::to_string(i), i);
  }
  return z;
}

}  // namespace detail

// Jacobian of the realization on the interior of a linear region:
// sum of c_i a_i^T over active neurons. D x d.
inline Matrix jacobian_at(const ShallowNet& net, const Vector& x) {
  if (x.size() != net.d()) throw UsageError("jacobian_at: dimension mismatch");
  Vector z = detail::require_interior(net, x);
  Matrix J = Matrix::Zero(net.out_dim(), net.d());
  for (int i = 0; i < net.m(); ++i) {
    if (max_abs(net.A.row(i)) == 0.0) continue;
    if (z(i) > 0.0) J += net.C.col(i) * net.A.row(i);
  }
  return J;
}

// bits_i = 1 iff <a_i, x> > 0. Zero directions get bit 0.
inline SignPattern sign_pattern_at(const ShallowNet& net, const Vector& x) {
  if (x.size() != net.d()) throw UsageError("sign_pattern_at: dimension mismatch");
  Vector z = detail::require_interior(net, x);
  std::vector<std::uint8_t> bits(static_cast<size_t>(net.m()), 0);
  for (int i = 0; i < net.m(); ++i) {
    if (max_abs(net.A.row(i)) == 0.0) continue;
    bits[static_cast<size_t>(i)] = z(i) > 0.0 ? 1 : 0;
  }
  return SignPattern(std::move(bits));
}

// Jacobian determined by a sign pattern alone (no point needed).
inline Matrix jacobian_of_pattern(const ShallowNet& net, const SignPattern& s) {
  if (s.size() != net.m()) throw UsageError("pattern length must equal m");
  Matrix J = Matrix::Zero(net.out_dim(), net.d());
  for (int i = 0; i < net.m(); ++i)
    if (s.active(i)) J += net.C.col(i) * net.A.row(i);
  return J;
}

// Maximum norm on parameters: max absolute entrywise difference over A and C.
inline double param_distance(const ShallowNet& p, const ShallowNet& q) {
  if (!(p.arch == q.arch)) throw UsageError("param_distance: architecture mismatch");
  return std::max(max_abs(p.A - q.A), max_abs(p.C - q.C));
}

// Stacks hidden neurons of p and q into one net (same d and D).
inline ShallowNet concat(const ShallowNet& p, const ShallowNet& q) {
  if (p.d() != q.d() || p.out_dim() != q.out_dim())
    throw UsageError("concat: nets must share input and output dimensions");
  Matrix A(p.m() + q.m(), p.d());
  A << p.A, q.A;
  Matrix C(p.out_dim(), p.m() + q.m());
  C << p.C, q.C;
  return ShallowNet(std::move(A), std::move(C));
}

// Flips the sign of the output weights, i.e. realizes -R(net).
inline ShallowNet negate_outputs(const ShallowNet& net) {
  return ShallowNet(net.A, -net.C);
}

}  // namespace relustab

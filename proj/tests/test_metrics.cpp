#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "relustab/metrics.hpp"
#include "test_support.hpp"

using namespace relustab;
using testsupport::net;
using testsupport::vec;

TEST_CASE("seminorm closed forms") {
  // Exploding-gradient target at k = 2: the seminorm is k^2.
  auto g2 = net({{2, 0}, {2, -0.25}}, {{2, -2}});
  CHECK(seminorm(g2).value == Catch::Approx(4.0).epsilon(1e-12));

  auto zero = ShallowNet(Matrix::Zero(2, 2), Matrix::Zero(1, 2));
  CHECK(seminorm(zero).value == 0.0);

  auto ridge = net({{1, 2}}, {{3}});
  auto b = seminorm(ridge);
  CHECK(b.value == Catch::Approx(6.0));
  CHECK(b.argmax_pattern.bits == std::vector<std::uint8_t>{1});
  CHECK(b.cells() == 2);
}

TEST_CASE("sobolev distance closed forms") {
  auto gamma = net({{1, 0}, {1, 0}}, {{1, 1}});
  CHECK(sobolev_distance(gamma, gamma).value == 0.0);

  auto g2 = net({{1, 0}, {0, 1}}, {{2, 0.5}});
  CHECK(sobolev_distance(gamma, g2).value == Catch::Approx(0.5).epsilon(1e-12));

  for (int k : {1, 2, 5}) {
    double kd = k, s2 = std::sqrt(2.0);
    auto theta = net({{kd, kd, 1 / kd}, {-kd, kd, 1 / kd}, {0, -s2 * kd, 1 / (s2 * kd)}},
                     {{kd, kd, s2 * kd}});
    ShallowNet gam(-theta.A, theta.C);
    CHECK(sobolev_distance(theta, gam).value == Catch::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("distance equals seminorm of the stacked difference") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    int d = 1 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % 4);
    int D = 1 + static_cast<int>(rng() % 2);
    auto p = testsupport::random_net(rng, d, m, D);
    auto q = testsupport::random_net(rng, d, m + static_cast<int>(rng() % 2), D);
    double via_distance = sobolev_distance(p, q).value;
    double via_concat = seminorm(concat(p, negate_outputs(q))).value;
    CHECK(via_distance == via_concat);
  }
}

TEST_CASE("distance is a symmetric pseudometric") {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 15; ++rep) {
    int d = 1 + static_cast<int>(rng() % 3);
    auto a = testsupport::random_net(rng, d, 1 + static_cast<int>(rng() % 3), 1);
    auto b = testsupport::random_net(rng, d, 1 + static_cast<int>(rng() % 3), 1);
    auto c = testsupport::random_net(rng, d, 1 + static_cast<int>(rng() % 3), 1);
    double ab = sobolev_distance(a, b).value;
    double ba = sobolev_distance(b, a).value;
    double ac = sobolev_distance(a, c).value;
    double cb = sobolev_distance(c, b).value;
    CHECK(std::abs(ab - ba) <= 1e-12 * std::max(1.0, ab));
    CHECK(ab <= ac + cb + 1e-12 * std::max(1.0, ab));
  }
}

TEST_CASE("uniform norm over the box") {
  auto zero = ShallowNet(Matrix::Zero(1, 2), Matrix::Zero(1, 1));
  CHECK(uniform_norm_box(zero, 1.0, 11) == 0.0);

  auto g2 = net({{2, 0}, {2, -0.25}}, {{2, -2}});
  double u = uniform_norm_box(g2, 1.0, 201);
  CHECK(u <= 0.5 + 1e-12);
  CHECK(u >= 0.49);

  auto ridge = net({{1, 0}}, {{1}});
  CHECK(uniform_norm_box(ridge, 1.0, 3) == Catch::Approx(1.0));

  CHECK_THROWS_AS(uniform_norm_box(ridge, 1.0, 1), UsageError);
  auto wide = ShallowNet(Matrix::Ones(1, 5), Matrix::Ones(1, 1));
  CHECK_THROWS_AS(uniform_norm_box(wide, 1.0, 101), CapacityError);
}

TEST_CASE("poincare-type comparison on the box") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    int d = 1 + static_cast<int>(rng() % 2);
    auto p = testsupport::random_net(rng, d, 1 + static_cast<int>(rng() % 4), 1);
    double B = 0.5 + static_cast<double>(rng() % 3);
    double lhs = uniform_norm_box(p, B, 401);
    double rhs = std::sqrt(d) * 2.0 * B * std::sqrt(d) * seminorm(p).value;
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("realization equality") {
  auto p = net({{1, 1}, {0, 2}}, {{1, -1}});
  // Balanced rescaling: positively scale each direction, inverse on outputs.
  Matrix A2 = p.A;
  Matrix C2 = p.C;
  A2.row(0) *= 3.0;
  C2.col(0) /= 3.0;
  A2.row(1) *= 0.25;
  C2.col(1) /= 0.25;
  CHECK(realizations_equal(p, ShallowNet(A2, C2)).equal);

  // Zero-sum directions: sum rho(<a_i, x>) = sum rho(<-a_i, x>).
  auto lhs = net({{1, -0.5}, {-1, -0.5}, {0, 1}}, {{1, 1, 1}});
  ShallowNet rhs(-lhs.A, lhs.C);
  CHECK(realizations_equal(lhs, rhs).equal);

  // Antipodal triple: constant Jacobian gap (0, 0, 3).
  double k = 2, s2 = std::sqrt(2.0);
  auto theta = net({{k, k, 1 / k}, {-k, k, 1 / k}, {0, -s2 * k, 1 / (s2 * k)}},
                   {{k, k, s2 * k}});
  ShallowNet gam(-theta.A, theta.C);
  auto cmp = realizations_equal(theta, gam);
  CHECK(!cmp.equal);
  CHECK(cmp.worst_gap.rows() == 1);
  CHECK(cmp.worst_gap(0, 0) == Catch::Approx(0.0).margin(1e-9));
  CHECK(cmp.worst_gap(0, 1) == Catch::Approx(0.0).margin(1e-9));
  CHECK(cmp.worst_gap(0, 2) == Catch::Approx(3.0));
  // The gap is the same constant on every attainable cell.
  for (const auto& disc : cmp.discrepancies)
    CHECK(disc.gap == Catch::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("equal realizations agree pointwise on a grid") {
  auto p = net({{1, 1}, {0, 2}}, {{1, -1}});
  Matrix A2 = p.A;
  Matrix C2 = p.C;
  A2.row(0) *= 2.0;
  C2.col(0) /= 2.0;
  ShallowNet q(A2, C2);
  REQUIRE(realizations_equal(p, q).equal);
  ShallowNet diff = concat(p, negate_outputs(q));
  CHECK(uniform_norm_box(diff, 1.0, 101) <= 1e-8);
}

TEST_CASE("seminorm agrees with sampled jacobian maxima") {
  std::mt19937_64 rng(24);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    int d = 2;
    int m = 2 + static_cast<int>(rng() % 4);
    auto dirs = testsupport::guarded_directions(rng, m, d, 0.02);
    Matrix A(m, d);
    for (int i = 0; i < m; ++i) A.row(i) = dirs[static_cast<size_t>(i)];
    ShallowNet p(A, testsupport::random_matrix(rng, 1, m, -2, 2));

    double exact = seminorm(p).value;
    double sampled = 0.0;
    Vector x(d);
    for (int s = 0; s < 20000; ++s) {
      for (int j = 0; j < d; ++j) x(j) = normal(rng);
      try {
        sampled = std::max(sampled, max_abs(jacobian_at(p, x)));
      } catch (const BoundaryError&) {
      }
    }
    CHECK(sampled <= exact * (1 + 1e-9) + 1e-15);
    CHECK(sampled >= exact * (1 - 1e-9) - 1e-15);
  }
}

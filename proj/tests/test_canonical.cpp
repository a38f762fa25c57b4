#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "relustab/canonical.hpp"
#include "test_support.hpp"

using namespace relustab;
using testsupport::net;

TEST_CASE("zero pair normalization") {
  auto half_c = net({{1, 0}}, {{0}});
  auto fixed = normalize_zero_pairs(half_c);
  CHECK(max_abs(fixed.A) == 0.0);
  CHECK(max_abs(fixed.C) == 0.0);

  auto half_a = net({{0, 0}}, {{5}});
  auto fixed2 = normalize_zero_pairs(half_a);
  CHECK(max_abs(fixed2.A) == 0.0);
  CHECK(max_abs(fixed2.C) == 0.0);

  auto clean = net({{1, 2}, {3, 4}}, {{5, 6}});
  auto same = normalize_zero_pairs(clean);
  CHECK((same.A - clean.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((same.C - clean.C).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("balancing") {
  auto p = net({{2, 0}}, {{8}});
  auto b = balance(p);
  CHECK(b.A(0, 0) == Catch::Approx(4.0));
  CHECK(b.C(0, 0) == Catch::Approx(4.0));

  auto already = net({{4, 0}}, {{4}});
  auto same = balance(already);
  CHECK((same.A - already.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((same.C - already.C).cwiseAbs().maxCoeff() == 0.0);

  // ((k, 0), 1/k^2) at k = 2 balances to norm sqrt(1/2).
  auto seq = net({{2, 0}}, {{0.25}});
  auto bs = balance(seq);
  CHECK(bs.A(0, 0) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(bs.C(0, 0) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("balance is idempotent bit for bit") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    auto p = normalize_zero_pairs(
        testsupport::random_net(rng, 2 + static_cast<int>(rng() % 3),
                                1 + static_cast<int>(rng() % 5),
                                1 + static_cast<int>(rng() % 2)));
    auto once = balance(p);
    auto twice = balance(once);
    CHECK((once.A - twice.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((once.C - twice.C).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("merging parallel directions") {
  auto p = net({{1, 0}, {2, 0}}, {{1, 1}});
  auto merged = merge_parallel(p);
  CHECK(merged.A(0, 0) == 1.0);
  CHECK(merged.C(0, 0) == Catch::Approx(3.0));
  CHECK(max_abs(merged.A.row(1)) == 0.0);
  CHECK(max_abs(merged.C.col(1)) == 0.0);

  auto distinct = net({{1, 0}, {0, 1}}, {{1, 1}});
  auto same = merge_parallel(distinct);
  CHECK((same.A - distinct.A).cwiseAbs().maxCoeff() == 0.0);

  // Redundant-direction pair: both rows (1,0) with unit weights merge to
  // a single neuron realizing 2 rho(x_1).
  auto gamma = net({{1, 0}, {1, 0}}, {{1, 1}});
  auto m2 = merge_parallel(gamma);
  CHECK(m2.C(0, 0) == Catch::Approx(2.0));
  CHECK(max_abs(m2.A.row(1)) == 0.0);
  CHECK(realizations_equal(gamma, m2).equal);
}

TEST_CASE("merge is idempotent") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 30; ++rep) {
    auto p = normalize_zero_pairs(
        testsupport::random_net(rng, 2, 2 + static_cast<int>(rng() % 4), 1));
    // Plant a parallel copy.
    Matrix A = p.A;
    Matrix C = p.C;
    A.row(1) = 2.0 * A.row(0);
    ShallowNet planted(A, C);
    auto once = merge_parallel(planted);
    auto twice = merge_parallel(once);
    CHECK((once.A - twice.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((once.C - twice.C).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("normal forms preserve the realization") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 100; ++rep) {
    int d = 2 + static_cast<int>(rng() % 3);
    int m = 2 + static_cast<int>(rng() % 4);
    int D = 1 + static_cast<int>(rng() % 2);
    auto p = testsupport::random_net(rng, d, m, D);
    Matrix A = p.A;
    Matrix C = p.C;
    // Plant degeneracies: a zero pair half, a parallel copy.
    if (rep % 3 == 0) C.col(0).setZero();
    if (rep % 3 == 1) A.row(0).setZero();
    if (m >= 2 && rep % 2 == 0) A.row(1) = 0.5 * A.row(0);
    ShallowNet planted(A, C);

    auto n0 = normalize_zero_pairs(planted);
    CHECK(realizations_equal(planted, n0).equal);
    auto n1 = merge_parallel(n0);
    CHECK(realizations_equal(n0, n1).equal);
    auto n2 = balance(n1);
    CHECK(realizations_equal(n1, n2).equal);
  }
}

TEST_CASE("condition checks on the counterexample families") {
  // Redundant directions: C.2 fails on neurons (0, 1).
  auto gamma = net({{1, 0}, {1, 0}}, {{1, 1}});
  auto g2 = net({{1, 0}, {0, 1}}, {{2, 0.5}});
  auto rep = check_conditions(gamma, g2, 10.0);
  CHECK(!rep.c2_ok);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.condition == "C.2" && v.neurons == std::vector<int>{0, 1}) found = true;
  CHECK(found);

  // Antipodal pairs inside gamma: C.3b fails.
  auto opp = net({{1, -0.5}, {-1, -0.5}, {0, 1}, {-1, 0.5}, {1, 0.5}, {0, -1}},
                 {{1, 1, 1, -1, -1, -1}});
  Matrix Ap = Matrix::Zero(6, 2);
  Ap.row(0) = testsupport::rowvec({1.0, 0.0});
  Matrix Cp = Matrix::Zero(1, 6);
  Cp(0, 0) = 0.5;
  auto repb = check_conditions(opp, ShallowNet(Ap, Cp), 10.0);
  CHECK(!repb.c3b_ok);
}

TEST_CASE("restricted pairs satisfy the conditions with beta = sqrt(2r)") {
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 10; ++rep) {
    int d = 3 + static_cast<int>(rng() % 2);
    int m = 1 + static_cast<int>(rng() % 3);
    auto gamma = testsupport::random_restricted_net(rng, d, m, 1);
    auto theta = testsupport::random_restricted_partner(rng, gamma);
    double r = sobolev_distance(theta, gamma).value;
    auto report = check_conditions(gamma, theta, std::sqrt(2.0 * r));
    CHECK(report.all_ok());
  }
}

TEST_CASE("balanced nets satisfy C.1 with beta = sqrt(2r)") {
  std::mt19937_64 rng(35);
  for (int rep = 0; rep < 20; ++rep) {
    auto p = balance(normalize_zero_pairs(testsupport::random_net(rng, 3, 3, 1)));
    double max_product = 0.0;
    for (int i = 0; i < p.m(); ++i)
      max_product = std::max(max_product, max_abs(p.A.row(i)) * max_abs(p.C.col(i)));
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    double r = unif(rng) * max_product / 2.0 + max_product / 2.0;
    // Every neuron with product <= 2r has both norms equal sqrt(product).
    for (int i = 0; i < p.m(); ++i) {
      double prod = max_abs(p.A.row(i)) * max_abs(p.C.col(i));
      if (prod <= 2.0 * r)
        CHECK(max_abs(p.A.row(i)) <= std::sqrt(2.0 * r) + 1e-12);
    }
  }
}

TEST_CASE("restricted space membership") {
  auto good = balance(net({{0.3, 1, 1}, {-0.2, 0.5, 2}}, {{1, -1}}));
  CHECK(in_restricted_space(good).ok);

  auto zero_coord = net({{1, 0, 1}}, {{1}});
  CHECK(!in_restricted_space(zero_coord).ok);

  auto unbalanced = net({{2, 0, 1, 1}}, {{8}});
  auto rep = in_restricted_space(unbalanced);
  CHECK(!rep.ok);
  REQUIRE(!rep.reasons.empty());
  CHECK(rep.reasons[0] == "unbalanced neuron 0");

  // Redundant directions break C.2 even when balanced and positive.
  auto parallel = balance(net({{1, 1}, {2, 2}}, {{1, 1}}));
  CHECK(!in_restricted_space(parallel).ok);
}

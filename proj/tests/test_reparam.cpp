#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "relustab/reparam.hpp"
#include "test_support.hpp"

using namespace relustab;
using testsupport::net;

TEST_CASE("direction matching") {
  std::mt19937_64 rng(41);
  auto gamma = testsupport::random_restricted_net(rng, 3, 3, 1);
  auto identity = match_directions(gamma, gamma);
  CHECK(identity.i1.empty());
  CHECK(identity.i2.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(identity.pi[static_cast<size_t>(i)] == i);

  auto a = net({{1, 1, 1}}, {{1}});
  auto b = net({{2, 2, 2}}, {{0.5}});
  auto scaled = match_directions(a, b);
  CHECK(scaled.i2 == std::vector<int>{0});

  auto p = net({{1, 0, 1, 1}}, {{1}});
  auto q = net({{0, 1, 1, 1}}, {{1}});
  auto none = match_directions(p, q);
  CHECK(none.i1 == std::vector<int>{0});
  CHECK(none.i2.empty());
}

TEST_CASE("matching is symmetric on matched pairs") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    auto gamma = testsupport::random_restricted_net(rng, 3, 1 + static_cast<int>(rng() % 4), 1);
    auto theta = testsupport::random_restricted_partner(rng, gamma);
    auto fwd = match_directions(gamma, theta);
    auto bwd = match_directions(theta, gamma);
    for (int i : fwd.i2) {
      int j = fwd.pi[static_cast<size_t>(i)];
      CHECK(bwd.pi[static_cast<size_t>(j)] == i);
    }
  }
}

TEST_CASE("matching requires C.2") {
  auto gamma = net({{1, 0}, {2, 0}}, {{1, 1}});
  auto theta = net({{1, 0}, {0, 1}}, {{1, 1}});
  CHECK_THROWS_AS(match_directions(gamma, theta), ConditionError);
}

TEST_CASE("restricted reparametrization on a hand-checked pair") {
  auto gamma = net({{1, 1, 1}}, {{1}});
  auto theta = net({{2, 2, 2}}, {{2}});
  auto cert = reparametrize(gamma, theta, ReparamMode::restricted);
  CHECK(cert.r == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(cert.achieved == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(cert.bound == Catch::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(cert.achieved <= cert.bound);
  CHECK(cert.matching.cases[0] == NeuronCase::a1);
  CHECK(verify_certificate(gamma, theta, cert).passed());
}

TEST_CASE("reparametrization of theta equal to gamma is exact") {
  std::mt19937_64 rng(43);
  auto gamma = testsupport::random_restricted_net(rng, 4, 3, 2);
  auto cert = reparametrize(gamma, gamma, ReparamMode::restricted);
  // The joint-arrangement difference of identical nets cancels to rounding.
  CHECK(cert.r <= 1e-14);
  CHECK(cert.achieved == 0.0);
  CHECK(verify_certificate(gamma, gamma, cert).passed());
}

TEST_CASE("general mode rejects condition violations") {
  auto gamma = net({{1, 0}, {1, 0}}, {{1, 1}});
  auto g2 = net({{1, 0}, {0, 1}}, {{2, 0.5}});
  try {
    reparametrize(gamma, g2, ReparamMode::general, 10.0);
    FAIL("expected ConditionError");
  } catch (const ConditionError& e) {
    CHECK(!e.report().c2_ok);
  }
}

TEST_CASE("general mode needs beta and a single output") {
  auto gamma = net({{1, 0}}, {{1}});
  CHECK_THROWS_AS(reparametrize(gamma, gamma, ReparamMode::general), UsageError);
  auto multi = net({{1, 0}}, {{1}, {1}});
  CHECK_THROWS_AS(reparametrize(multi, multi, ReparamMode::general, 1.0), UsageError);
}

TEST_CASE("restricted mode enforces membership") {
  auto outside = net({{1, 0}}, {{1}});  // zero last coordinate
  CHECK_THROWS_AS(reparametrize(outside, outside, ReparamMode::restricted),
                  PreconditionError);
}

TEST_CASE("restricted bound holds on random pairs") {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 60; ++rep) {
    int d = 3 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % 4);
    int D = 1 + static_cast<int>(rng() % 2);
    auto gamma = testsupport::random_restricted_net(rng, d, m, D);
    auto theta = testsupport::random_restricted_partner(rng, gamma);
    auto cert = reparametrize(gamma, theta, ReparamMode::restricted);
    CHECK(cert.achieved <= 4.0 * std::sqrt(cert.r) + 1e-9);
    CHECK(realizations_equal(cert.phi, theta).equal);
    CHECK(verify_certificate(gamma, theta, cert).passed());
  }
}

namespace {

// A pair for the single-output theorem: gamma possibly unbalanced, theta
// sharing a few directions, both clearing the antipodal conditions. Returns
// the smallest beta that satisfies C.1.
std::pair<ShallowNet, ShallowNet> general_pair(std::mt19937_64& rng, int d, int m,
                                               double* beta_out) {
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  std::uniform_real_distribution<double> scale(0.3, 2.5);
  for (;;) {
    auto gamma = testsupport::random_net(rng, d, m, 1);
    Matrix A(m, d), C(1, m);
    for (int i = 0; i < m; ++i) {
      if (rng() % 2 == 0) {
        A.row(i) = gamma.A.row(i) * scale(rng);
      } else {
        for (int j = 0; j < d; ++j) A(i, j) = unif(rng);
      }
      C(0, i) = unif(rng);
    }
    ShallowNet theta(A, C);
    double r = sobolev_distance(theta, gamma).value;
    double beta = 0.0;
    for (int i = 0; i < m; ++i) {
      double prod = max_abs(gamma.A.row(i)) * max_abs(gamma.C.col(i));
      if (prod <= 2.0 * r)
        beta = std::max(beta, std::max(max_abs(gamma.A.row(i)),
                                       max_abs(gamma.C.col(i))));
    }
    auto report = check_conditions(gamma, theta, beta);
    if (!report.all_ok()) continue;
    *beta_out = beta;
    return {std::move(gamma), std::move(theta)};
  }
}

}  // namespace

TEST_CASE("general bound holds on conditioned pairs") {
  std::mt19937_64 rng(45);
  for (int rep = 0; rep < 40; ++rep) {
    int d = 2 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % 4);
    double beta = 0.0;
    auto [gamma, theta] = general_pair(rng, d, m, &beta);
    auto cert = reparametrize(gamma, theta, ReparamMode::general, beta);
    CHECK(cert.achieved <= beta + 2.0 * std::sqrt(cert.r) + 1e-9);
    CHECK(realizations_equal(cert.phi, theta).equal);
    CHECK(verify_certificate(gamma, theta, cert).passed());
  }
}

TEST_CASE("verification catches tampering") {
  std::mt19937_64 rng(46);
  auto gamma = testsupport::random_restricted_net(rng, 3, 2, 1);
  auto theta = testsupport::random_restricted_partner(rng, gamma);
  auto cert = reparametrize(gamma, theta, ReparamMode::restricted);
  REQUIRE(verify_certificate(gamma, theta, cert).passed());

  auto tampered = cert;
  Matrix A = tampered.phi.A;
  A(0, 0) += 10.0 * (cert.bound + 1.0);
  tampered.phi = ShallowNet(A, tampered.phi.C);
  CHECK(!verify_certificate(gamma, theta, tampered).realization_ok);

  auto understated = cert;
  understated.r = cert.r / 2.0 - 1.0;
  CHECK(!verify_certificate(gamma, theta, understated).bound_ok);
}

TEST_CASE("correspondence recovery") {
  auto theta = net({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 2, 3}});
  auto id = recover_correspondence(theta, theta);
  CHECK(id.pi == std::vector<int>{0, 1, 2});
  CHECK(max_abs(Vector(id.lambda - Vector::Ones(3))) <= 1e-12);

  // Swap the first two neurons and rescale neuron 0 by 2.
  Matrix A(3, 3), C(1, 3);
  A << 0, 2, 0, 1, 0, 0, 0, 0, 1;
  C << 1.0, 1, 3;
  ShallowNet phi(A, C);
  auto sw = recover_correspondence(theta, phi);
  CHECK(sw.pi == std::vector<int>{1, 0, 2});
  CHECK(sw.lambda(0) == Catch::Approx(2.0));
  CHECK(sw.lambda(1) == Catch::Approx(1.0));

  // Rank-deficient theta is rejected.
  auto deficient = net({{1, 0}, {2, 0}}, {{1, 1}});
  CHECK_THROWS_AS(recover_correspondence(deficient, deficient), PreconditionError);

  // A different realization is flagged inconsistent.
  auto other = net({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{9, 2, 3}});
  Matrix A2 = other.A;
  A2(0, 1) = 0.7;  // direction not parallel to any theta row
  CHECK_THROWS_AS(recover_correspondence(theta, ShallowNet(A2, other.C)),
                  InconsistencyError);
}

TEST_CASE("planted permutations and scalings are recovered exactly") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  for (int rep = 0; rep < 20; ++rep) {
    int d = 3 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % std::min(3, d));
    ShallowNet theta = [&] {
      for (;;) {
        auto cand = testsupport::random_net(rng, d, m, 1 + static_cast<int>(rng() % 2));
        bool ok = true;
        for (int i = 0; i < m; ++i)
          if (max_abs(cand.C.col(i)) < 0.05) ok = false;
        if (ok) return cand;
      }
    }();
    std::vector<int> perm(static_cast<size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix A(m, theta.d()), C(theta.out_dim(), m);
    Vector lambda(m);
    for (int i = 0; i < m; ++i) {
      lambda(i) = pos(rng);
      A.row(i) = lambda(i) * theta.A.row(perm[static_cast<size_t>(i)]);
      C.col(i) = theta.C.col(perm[static_cast<size_t>(i)]) / lambda(i);
    }
    auto co = recover_correspondence(theta, ShallowNet(A, C));
    for (int i = 0; i < m; ++i) {
      CHECK(co.pi[static_cast<size_t>(i)] == perm[static_cast<size_t>(i)]);
      CHECK(std::abs(co.lambda(i) - lambda(i)) <= 1e-9 * lambda(i));
    }
  }
}

TEST_CASE("restricted uniqueness at distance zero") {
  // Distinct restricted parametrizations of one realization differ only by
  // neuron order; the recovered scalings are 1 after balancing.
  std::mt19937_64 rng(48);
  auto gamma = testsupport::random_restricted_net(rng, 4, 3, 1);
  // Need independent rows for the recovery preconditions.
  if (relustab::detail::row_rank(gamma.A, 1e-9) == gamma.m()) {
    Matrix A(3, 4), C(1, 3);
    std::vector<int> perm = {2, 0, 1};
    for (int i = 0; i < 3; ++i) {
      A.row(i) = gamma.A.row(perm[static_cast<size_t>(i)]);
      C.col(i) = gamma.C.col(perm[static_cast<size_t>(i)]);
    }
    ShallowNet theta(A, C);
    auto cert = reparametrize(gamma, theta, ReparamMode::restricted);
    CHECK(cert.r <= 1e-12);
    CHECK(cert.achieved <= 1e-9);
    auto co = recover_correspondence(theta, cert.phi);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(co.lambda(i) - 1.0) <= 1e-9);
  }
}

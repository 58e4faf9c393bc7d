#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/models.hpp"
#include "pinchkit/rng.hpp"
#include "pinchkit/theta.hpp"

using namespace pinchkit;
using namespace pinchkit::theta;

namespace {

PointData random_point(int n, int m, double c, std::uint64_t seed) {
  RngStream stream(seed, 0x7E58ull, 0);
  std::vector<Eigen::MatrixXd> ops;
  for (int a = 0; a < m; ++a) ops.push_back(stream.symmetric_normal_matrix(n, 0.6));
  return make_point_data(n, m, c, std::move(ops));
}

SubspaceSplit random_split(int n, int q, std::uint64_t seed) {
  RngStream stream(seed, 0x5B17ull, 0);
  return SubspaceSplit{q, stream.orthogonal(n)};
}

}  // namespace

TEST_CASE("umbilical point: theta is -q(n-q) lambda^2 for every split") {
  const int n = 6;
  const double lam = 0.8;
  const PointData p = models::umbilical_sphere(n, 2, 0.0, lam);
  for (int q : {1, 2, 3, 5}) {
    std::vector<int> subset;
    for (int i = 0; i < q; ++i) subset.push_back(i);
    const double want = -double(q) * (n - q) * lam * lam;
    CHECK(theta_q_basis(p, coordinate_split(n, subset)) == doctest::Approx(want).epsilon(1e-12));
    CHECK(theta_q_basis(p, random_split(n, q, 100 + q)) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("zero second fundamental form gives zero") {
  std::vector<Eigen::MatrixXd> ops{Eigen::MatrixXd::Zero(5, 5)};
  const PointData p = make_point_data(5, 1, 1.0, std::move(ops));
  CHECK(theta_q_basis(p, random_split(5, 2, 3)) == 0.0);
}

TEST_CASE("theta matches the four-index oracle on random data") {
  for (std::uint64_t seed : {4ull, 5ull, 6ull}) {
    const PointData p = random_point(6, 3, 0.5, seed);
    for (int q : {1, 2, 4}) {
      const auto split = random_split(6, q, seed + 50);
      const double fast = theta_q_basis(p, split);
      const double slow = oracles::theta_four_index(p, split.basis, q);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    }
  }
}

TEST_CASE("theta is invariant under block rotations of the split") {
  const PointData p = random_point(7, 2, 0.0, 8);
  const int q = 3;
  const auto split = random_split(7, q, 21);
  const double base = theta_q_basis(p, split);
  RngStream stream(33, 0xB10Cull, 0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd rot = Eigen::MatrixXd::Zero(7, 7);
    rot.topLeftCorner(q, q) = stream.orthogonal(q);
    rot.bottomRightCorner(7 - q, 7 - q) = stream.orthogonal(7 - q);
    const SubspaceSplit rotated{q, split.basis * rot};
    CHECK(theta_q_basis(p, rotated) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("subspace form equals basis form") {
  for (std::uint64_t seed : {14ull, 15ull}) {
    const PointData p = random_point(6, 2, 1.0, seed);
    for (int q : {1, 3, 5}) {
      const auto split = random_split(6, q, seed + 7);
      const Eigen::MatrixXd v = split.basis.leftCols(q);
      const double via_basis = theta_q_basis(p, split);
      const double via_proj = theta_q_subspace(p, v * v.transpose());
      CHECK(via_basis == doctest::Approx(via_proj).epsilon(1e-10));
    }
  }
}

TEST_CASE("subspace form rejects non-projections") {
  const PointData p = random_point(5, 1, 0.0, 2);
  CHECK_THROWS_AS(theta_q_subspace(p, Eigen::MatrixXd::Zero(4, 4)), NotAProjection);
  CHECK_THROWS_AS(theta_q_subspace(p, 0.5 * Eigen::MatrixXd::Identity(5, 5)), NotAProjection);
  CHECK_THROWS_AS(theta_q_subspace(p, Eigen::MatrixXd::Identity(5, 5)), NotAProjection);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(5, 5);
  asym(0, 0) = 1.0;
  asym(0, 1) = 1e-3;
  CHECK_THROWS_AS(theta_q_subspace(p, asym), NotAProjection);
}

TEST_CASE("split validation") {
  const PointData p = random_point(5, 1, 0.0, 9);
  SubspaceSplit bad{2, Eigen::MatrixXd::Identity(4, 4)};
  CHECK_THROWS_AS(theta_q_basis(p, bad), DimensionMismatch);
  SubspaceSplit skewed{2, Eigen::MatrixXd::Identity(5, 5)};
  skewed.basis(0, 1) = 0.5;  // not orthonormal
  CHECK_THROWS_AS(theta_q_basis(p, skewed), DomainError);
  CHECK_THROWS_AS(coordinate_split(5, {0, 0}), DimensionMismatch);
  CHECK_THROWS_AS(coordinate_split(5, {0, 7}), DimensionMismatch);
  CHECK_THROWS_AS(coordinate_split(5, {0, 1, 2, 3, 4}), DimensionMismatch);
}

TEST_CASE("commuting family: certified maximum equals subset enumeration") {
  const int n = 6, q = 2, m = 2;
  RngStream stream(77, 0xD1A6ull, 0);
  const Eigen::MatrixXd frame = stream.orthogonal(n);
  std::vector<Eigen::VectorXd> diags;
  std::vector<Eigen::MatrixXd> ops;
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = stream.uniform(-1.0, 1.0);
    diags.push_back(d);
    ops.push_back(frame.transpose() * d.asDiagonal() * frame);
  }
  const PointData p = make_point_data(n, m, 0.0, std::move(ops));

  const double oracle = oracles::subset_max(n, q, [&](const std::vector<int>& subset) {
    double value = 0.0;
    for (const auto& d : diags) {
      double tv = 0.0;
      for (int i : subset) tv += d(i);
      value -= tv * (d.sum() - tv);
    }
    return value;
  });

  const auto res = maximize_theta(p, q);
  CHECK(res.global_certified);
  CHECK(res.value == doctest::Approx(oracle).epsilon(1e-8));
  // the reported split really attains the reported value
  CHECK(theta_q_basis(p, res.split) == doctest::Approx(res.value).epsilon(1e-10));
}

TEST_CASE("umbilical data is certified with constant objective") {
  const PointData p = models::umbilical_sphere(6, 1, 0.0, 1.0);
  const auto res = maximize_theta(p, 2);
  CHECK(res.global_certified);
  CHECK(res.value == doctest::Approx(-2.0 * 4.0).epsilon(1e-10));
}

TEST_CASE("generic ascent dominates subset starts and never regresses with more starts") {
  const PointData p = random_point(6, 2, 0.0, 55);
  const int q = 2;
  const double best_subset = oracles::subset_max(6, q, [&](const std::vector<int>& subset) {
    return theta_q_basis(p, coordinate_split(6, subset));
  });
  OptimizerConfig cfg;
  cfg.starts = 2;
  const auto small = maximize_theta(p, q, cfg);
  CHECK_FALSE(small.global_certified);
  CHECK(small.value >= best_subset - 1e-9);
  // same seed, more starts: the multistart max can only grow
  cfg.starts = 12;
  const auto large = maximize_theta(p, q, cfg);
  CHECK(large.value >= small.value - 1e-12);
  // the returned split is a genuine orthonormal frame attaining the value
  CHECK(theta_q_basis(p, large.split) == doctest::Approx(large.value).epsilon(1e-10));
}

TEST_CASE("torus model attains the threshold at q = k") {
  const auto [p, spec] = models::einstein_torus(7, 3, 1.0, 0.25, 2);
  const auto res = homology_verdict(p, 3);
  CHECK(res.verdict == Verdict::EQUALITY);
  CHECK(res.value == doctest::Approx(res.threshold).epsilon(1e-9));
  // threshold is q(n-q)c
  CHECK(res.threshold == doctest::Approx(3.0 * 4.0 * 0.25).epsilon(1e-14));
}

TEST_CASE("umbilical verdict is strict for H > 0, c = 0") {
  const PointData p = models::umbilical_sphere(6, 1, 0.0, 0.9);
  const auto res = homology_verdict(p, 2);
  CHECK(res.verdict == Verdict::STRICT);
  CHECK(res.value < 0.0);
}

TEST_CASE("q = 1 is accepted by theta ops") {
  const PointData p = random_point(5, 2, 1.0, 77);
  CHECK_NOTHROW(theta_q_basis(p, random_split(5, 1, 1)));
  CHECK_NOTHROW(maximize_theta(p, 1));
  CHECK_THROWS_AS(maximize_theta(p, 0), DomainError);
  CHECK_THROWS_AS(maximize_theta(p, 5), DomainError);
}

TEST_CASE("binomial gating helper") {
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(8, 4) == 70);
  CHECK(binomial(10, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(200, 100) == (1ll << 60));  // saturates
}

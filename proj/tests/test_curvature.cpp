#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/models.hpp"
#include "pinchkit/point_data.hpp"
#include "pinchkit/rng.hpp"

using namespace pinchkit;

namespace {

PointData random_point(int n, int m, double c, std::uint64_t seed) {
  RngStream stream(seed, 0x7E57ull, 0);
  std::vector<Eigen::MatrixXd> ops;
  for (int a = 0; a < m; ++a) ops.push_back(stream.symmetric_normal_matrix(n, 0.5));
  return make_point_data(n, m, c, std::move(ops));
}

}  // namespace

TEST_CASE("umbilical point: closed-form curvature") {
  const double h = 0.75, c = 0.25;
  const int n = 6;
  const PointData p = models::umbilical_sphere(n, 2, c, h);
  const auto summary = curvature::summarize(p);
  CHECK(summary.H == doctest::Approx(h).epsilon(1e-14));
  CHECK(summary.S == doctest::Approx(n * h * h).epsilon(1e-14));
  // Ric = (n-1)(c + H^2) Identity
  const double want = (n - 1) * (c + h * h);
  CHECK((summary.ric - want * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(summary.ric_min == doctest::Approx(want).epsilon(1e-12));
  CHECK(summary.rho == doctest::Approx(n * (n - 1) * (c + h * h)).epsilon(1e-12));
}

TEST_CASE("ricci tensor matches the triple-loop oracle") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const PointData p = random_point(7, 3, 0.5, seed);
    const Eigen::MatrixXd fast = curvature::ricci_tensor(p);
    const Eigen::MatrixXd slow = oracles::ricci_triple_loop(p);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sff norm and scalar curvature match entrywise oracles") {
  const PointData p = random_point(6, 2, 1.0, 17);
  CHECK(curvature::sff_norm_sq(p) ==
        doctest::Approx(oracles::sff_norm_sq_entrywise(p)).epsilon(1e-14));
  const double rho = curvature::scalar_curvature(p);
  CHECK(rho == doctest::Approx(oracles::ricci_triple_loop(p).trace()).epsilon(1e-12));
}

TEST_CASE("ricci_min is below every sampled direction value") {
  const PointData p = random_point(6, 3, 0.0, 23);
  const auto [ric_min, direction] = curvature::ricci_min(p);
  CHECK(ric_min <= oracles::ricci_min_sampled(p, 2000, 99) + 1e-12);
  // the reported direction attains the reported value
  const Eigen::MatrixXd ric = curvature::ricci_tensor(p);
  CHECK(double(direction.transpose() * ric * direction) ==
        doctest::Approx(ric_min).epsilon(1e-10));
  CHECK(direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("curvature is equivariant under tangent frame changes") {
  const PointData p = random_point(6, 2, 0.25, 31);
  RngStream stream(5, 0xF4A3ull, 0);
  const Eigen::MatrixXd q = stream.orthogonal(6);
  std::vector<Eigen::MatrixXd> rotated;
  for (const auto& h : p.shape_ops) rotated.push_back(q.transpose() * h * q);
  const PointData pr = make_point_data(6, 2, 0.25, std::move(rotated));

  const auto s0 = curvature::summarize(p);
  const auto s1 = curvature::summarize(pr);
  CHECK(s1.H == doctest::Approx(s0.H).epsilon(1e-12));
  CHECK(s1.S == doctest::Approx(s0.S).epsilon(1e-12));
  CHECK(s1.rho == doctest::Approx(s0.rho).epsilon(1e-10));
  CHECK(s1.ric_min == doctest::Approx(s0.ric_min).epsilon(1e-10));
  const Eigen::MatrixXd conjugated = q.transpose() * s0.ric * q;
  CHECK((s1.ric - conjugated).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("curvature is invariant under normal frame mixing") {
  const PointData p = random_point(5, 3, 1.0, 41);
  RngStream stream(6, 0xF4A4ull, 0);
  const Eigen::MatrixXd o = stream.orthogonal(3);
  std::vector<Eigen::MatrixXd> mixed(3, Eigen::MatrixXd::Zero(5, 5));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) mixed[a] += o(b, a) * p.shape_ops[b];
  const PointData pm = make_point_data(5, 3, 1.0, std::move(mixed));

  const auto s0 = curvature::summarize(p);
  const auto s1 = curvature::summarize(pm);
  CHECK(s1.H == doctest::Approx(s0.H).epsilon(1e-12));
  CHECK(s1.S == doctest::Approx(s0.S).epsilon(1e-12));
  CHECK((s1.ric - s0.ric).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exact path agrees with float path and itself") {
  // small rational data: diag + off-diagonal entries
  const int n = 5, m = 2;
  std::vector<std::vector<Rat>> ops(m, std::vector<Rat>(n * n, Rat(0)));
  auto at = [&](int a, int i, int j) -> Rat& { return ops[a][static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) at(0, i, i) = Rat(i + 1, 3);
  at(0, 0, 1) = at(0, 1, 0) = Rat(1, 7);
  for (int i = 0; i < n; ++i) at(1, i, i) = Rat(1, 2);
  at(1, 2, 3) = at(1, 3, 2) = Rat(-2, 5);
  const PointData p = make_exact_point_data(n, m, Rat(1, 4), ops);

  const auto exact = curvature::exact_curvature(p);
  const auto summary = curvature::summarize(p);
  CHECK(to_double(exact.H2) == doctest::Approx(summary.H * summary.H).epsilon(1e-14));
  CHECK(to_double(exact.S) == doctest::Approx(summary.S).epsilon(1e-14));
  CHECK(to_double(exact.rho) == doctest::Approx(summary.rho).epsilon(1e-12));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(to_double(exact.ric[static_cast<std::size_t>(i) * n + j]) ==
            doctest::Approx(summary.ric(i, j)).epsilon(1e-12));
}

TEST_CASE("exact path requires exact data") {
  const PointData p = random_point(5, 1, 0.0, 3);
  CHECK_THROWS_AS(curvature::exact_curvature(p), DomainError);
}

TEST_CASE("point data validation rejects bad shapes and asymmetry") {
  std::vector<Eigen::MatrixXd> ops{Eigen::MatrixXd::Zero(4, 4)};
  CHECK_THROWS_AS(make_point_data(5, 1, 0.0, ops), DimensionError);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(5, 5);
  bad(0, 1) = 1.0;  // asymmetric far beyond tolerance
  CHECK_THROWS_AS(make_point_data(5, 1, 0.0, {bad}), SymmetryError);

  // tiny asymmetry is symmetrized away
  Eigen::MatrixXd almost = Eigen::MatrixXd::Identity(5, 5);
  almost(0, 1) = 1e-12;
  const PointData p = make_point_data(5, 1, 0.0, {almost});
  CHECK(p.shape_ops[0](0, 1) == doctest::Approx(5e-13).epsilon(1e-3));
  CHECK(p.shape_ops[0](0, 1) == p.shape_ops[0](1, 0));
}

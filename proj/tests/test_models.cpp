#include <doctest.h>

#include <cmath>

#include "pinchkit/bounds.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/models.hpp"

using namespace pinchkit;
using namespace pinchkit::models;

TEST_CASE("torus closed-form parameters") {
  const auto [p, spec] = einstein_torus(7, 3, 2.0, 0.0, 2);
  const double r = 2.0;
  CHECK(spec.a == doctest::Approx(std::sqrt(3.0 / 2.0) / r).epsilon(1e-14));
  CHECK(spec.b == doctest::Approx(std::sqrt(2.0 / 3.0) / r).epsilon(1e-14));
  CHECK(spec.H_u == doctest::Approx(1.0 / r).epsilon(1e-14));
  CHECK(spec.H_g ==
        doctest::Approx(1.0 / (r * 7.0 * std::sqrt(6.0))).epsilon(1e-12));
  CHECK(spec.ric_value == doctest::Approx(5.0 / (r * r)).epsilon(1e-14));
  // a b = 1/r^2 and rho1^2 + rho2^2 = r^2
  CHECK(spec.a * spec.b == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(spec.rho1 * spec.rho1 + spec.rho2 * spec.rho2 ==
        doctest::Approx(r * r).epsilon(1e-12));
  // operators: diag(a I_k, -b I_{n-k}) and H_u I
  CHECK(p.shape_ops[0](0, 0) == doctest::Approx(spec.a));
  CHECK(p.shape_ops[0](6, 6) == doctest::Approx(-spec.b));
  CHECK((p.shape_ops[1] - spec.H_u * Eigen::MatrixXd::Identity(7, 7))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("torus point is Einstein with the alpha value") {
  for (int n : {5, 6, 8, 11})
    for (int k = 2; 2 * k <= n; ++k)
      for (double c : {0.0, 0.25}) {
        const auto [p, spec] = einstein_torus(n, k, 1.0, c, 2);
        const auto ric = curvature::ricci_tensor(p);
        const Eigen::MatrixXd target =
            spec.ric_value * Eigen::MatrixXd::Identity(n, n);
        INFO("n=", n, " k=", k, " c=", c);
        CHECK((ric - target).cwiseAbs().maxCoeff() < 1e-10);
        // the pinching bound is attained
        CHECK(bounds::alpha(n, k, spec.H, c) ==
              doctest::Approx(spec.ric_value).epsilon(1e-12));
      }
}

TEST_CASE("exact torus identities hold over a grid") {
  for (int n : {5, 6, 7, 9, 12})
    for (int k = 2; 2 * k <= n; ++k)
      for (const Rat& r_sq : {Rat(1), Rat(4), Rat(9, 4)})
        for (const Rat& c : {Rat(0), Rat(1, 4)}) {
          const auto checks = verify_torus_exact(n, k, r_sq, c);
          INFO("n=", n, " k=", k);
          CHECK(checks.ricci_einstein);
          CHECK(checks.alpha_attained);
          CHECK(checks.h_sq_splits);
          CHECK(checks.ab_inverse_r_sq);
          CHECK(checks.factor_ricci);
          CHECK(checks.radii_split);
          CHECK(checks.minimal_iff_2k);
          CHECK(checks.all());
        }
}

TEST_CASE("exact spec sidecar carries the rational ground truth") {
  const auto [p, spec] = einstein_torus_exact(6, 3, Rat(1), Rat(0), 2);
  REQUIRE(spec.exact);
  CHECK(spec.ric_q == Rat(4));       // (n-2)/r^2
  CHECK(spec.hg2_q == Rat(0));       // n = 2k: hypersurface minimal in the sphere
  CHECK(spec.hu2_q == Rat(1));       // 1/r^2 - c = 1
  CHECK(spec.h2_q == Rat(1));        // H^2 = H_g^2 + H_u^2
  CHECK(spec.ab_q == Rat(1));        // a b = 1/r^2
  CHECK(spec.a2_q == Rat(1));        // (n-k-1)/(k-1)/r^2 = 1
  CHECK(spec.rho1_sq_q + spec.rho2_sq_q == spec.r2_q);
}

TEST_CASE("clifford minimal is the n = 2k torus") {
  const auto [cp, cspec] = clifford_minimal(3, 1.0, 0.0, 2);
  const auto [tp, tspec] = einstein_torus(6, 3, 1.0, 0.0, 2);
  CHECK(cspec.n == 6);
  CHECK(cspec.k == 3);
  for (int al = 0; al < 2; ++al)
    CHECK((cp.shape_ops[al] - tp.shape_ops[al]).cwiseAbs().maxCoeff() == 0.0);
  // minimal inside the sphere: H_g = 0, H = H_u
  CHECK(cspec.H_g == 0.0);
  CHECK(cspec.H == doctest::Approx(cspec.H_u).epsilon(1e-15));
}

TEST_CASE("composition: hypersurface plus umbilical normal equals the model") {
  const int n = 7, k = 2;
  const double r = 2.0, c = 0.1;
  const PointData inner = torus_hypersurface_in_sphere(n, k, r);
  CHECK(inner.m == 1);
  CHECK(inner.c == doctest::Approx(1.0 / (r * r)).epsilon(1e-15));
  const PointData composed = compose_umbilical(inner, r, c, 3);
  const auto [direct, spec] = einstein_torus(n, k, r, c, 3);
  REQUIRE(composed.m == 3);
  CHECK(composed.c == c);
  for (int al = 0; al < 3; ++al)
    CHECK((composed.shape_ops[al] - direct.shape_ops[al]).cwiseAbs().maxCoeff() <
          1e-15);
  // mismatched inner curvature is rejected
  const PointData wrong = make_point_data(
      n, 1, 0.3, {inner.shape_ops[0]});
  CHECK_THROWS_AS(compose_umbilical(wrong, r, c, 3), CurvatureMismatch);
}

TEST_CASE("mean-direction principal values") {
  const int n = 7, k = 2;
  const double c = 0.25;
  const auto [p, spec] = einstein_torus(n, k, 1.0, c, 2);
  const auto [lam, mu] = principal_values_closed_form(n, k, spec.H, c);
  CHECK(lam == doctest::Approx(spec.lambda1).epsilon(1e-12));
  CHECK(mu == doctest::Approx(spec.mu1).epsilon(1e-12));
  // trace identity: k lambda + (n-k) mu = n H
  CHECK(k * lam + (n - k) * mu == doctest::Approx(n * spec.H).epsilon(1e-12));
  // n = 2k collapses to (H, H)
  const auto [lam2, mu2] = principal_values_closed_form(8, 4, 0.7, 0.0);
  CHECK(lam2 == 0.7);
  CHECK(mu2 == 0.7);
  CHECK_THROWS_AS(principal_values_closed_form(7, 2, 0.0, 0.25), DomainError);
}

TEST_CASE("synthetic equality fixtures are deterministic") {
  const auto a = equality_case_synthetic(6, 2, 2, {1.0, 0.2}, {-0.5, 0.2}, 0.0, 77);
  const auto b = equality_case_synthetic(6, 2, 2, {1.0, 0.2}, {-0.5, 0.2}, 0.0, 77);
  const auto c = equality_case_synthetic(6, 2, 2, {1.0, 0.2}, {-0.5, 0.2}, 0.0, 78);
  for (int al = 0; al < 2; ++al)
    CHECK((a.shape_ops[al] - b.shape_ops[al]).cwiseAbs().maxCoeff() == 0.0);
  bool differs = false;
  for (int al = 0; al < 2; ++al)
    differs = differs || (a.shape_ops[al] - c.shape_ops[al]).cwiseAbs().maxCoeff() > 1e-3;
  CHECK(differs);
  // the full fixture exposes the frames that built the data
  const auto fx = equality_case_synthetic_full(6, 2, 2, {1.0, 0.2}, {-0.5, 0.2}, 0.0, 77);
  for (int al = 0; al < 2; ++al)
    CHECK((fx.data.shape_ops[al] - a.shape_ops[al]).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd q = fx.tangent_frame;
  CHECK((q * q.transpose() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <
        1e-12);
  const Eigen::MatrixXd o = fx.normal_mixer;
  CHECK((o * o.transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("model domain errors") {
  CHECK_THROWS_AS(einstein_torus(6, 1, 1.0, 0.0, 2), DomainError);
  CHECK_THROWS_AS(einstein_torus(6, 4, 1.0, 0.0, 2), DomainError);
  CHECK_THROWS_AS(einstein_torus(6, 2, 0.0, 0.0, 2), DomainError);
  CHECK_THROWS_AS(einstein_torus(6, 2, 1.0, 2.0, 2), DomainError);   // c > 1/r^2
  CHECK_THROWS_AS(einstein_torus(6, 2, 1.0, -0.5, 2), DomainError);  // c < 0
  CHECK_THROWS_AS(einstein_torus(6, 2, 1.0, 0.0, 1), DomainError);   // needs m >= 2
  CHECK_THROWS_AS(einstein_torus_exact(6, 2, Rat(-1), Rat(0), 2), DomainError);
  CHECK_THROWS_AS(umbilical_sphere(6, 1, 0.0, -1.0), DomainError);
}

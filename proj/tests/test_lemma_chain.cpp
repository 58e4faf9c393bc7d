#include <doctest.h>

#include <cmath>

#include "pinchkit/bounds.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/models.hpp"
#include "pinchkit/rng.hpp"
#include "pinchkit/theta.hpp"

using namespace pinchkit;
using namespace pinchkit::theta;

namespace {

SubspaceSplit first_coordinates(int n, int q) {
  std::vector<int> subset;
  for (int i = 0; i < q; ++i) subset.push_back(i);
  return coordinate_split(n, subset);
}

}  // namespace

TEST_CASE("chain records thirteen named lines") {
  const auto [p, spec] = models::einstein_torus(6, 2, 1.0, 0.0, 2);
  const auto record = verify_lemma_chain(p, 2, 2, first_coordinates(6, 2));
  REQUIRE(record.lines.size() == 13);
  CHECK(record.lines.front().name == "s1.identity");
  CHECK(record.lines.back().name == "final.bound");
  CHECK(record.q == 2);
  CHECK(record.k == 2);
}

TEST_CASE("torus at q = k: every slack vanishes in the adapted basis") {
  for (int n : {6, 7, 9})
    for (int k = 2; 2 * k <= n; ++k)
      for (double c : {0.0, 0.25}) {
        const auto [p, spec] = models::einstein_torus(n, k, 1.0, c, 2);
        const auto record = verify_lemma_chain(p, k, k, first_coordinates(n, k));
        CHECK(record.hypothesis_met);
        for (const auto& line : record.lines) {
          INFO("n=", n, " k=", k, " c=", c, " line=", line.name);
          CHECK(std::abs(line.slack) < 1e-9);
        }
        CHECK(std::abs(record.final_slack) < 1e-9);
        CHECK(record.bound_holds);
        // the threshold is attained: Theta_k = k(n-k)c
        CHECK(record.theta == doctest::Approx(record.threshold).epsilon(1e-9));
      }
}

TEST_CASE("umbilical point: final slack is q(n-q)(c+H^2)") {
  const int n = 6;
  const double h = 0.7, c = 0.25;
  const PointData p = models::umbilical_sphere(n, 2, c, h);
  for (int k : {2, 3})
    for (int q = 2; q <= k; ++q) {
      const auto record = verify_lemma_chain(p, k, q, first_coordinates(n, q));
      CHECK(record.hypothesis_met);
      CHECK(record.final_slack ==
            doctest::Approx(q * (n - q) * (c + h * h)).epsilon(1e-10));
      CHECK(record.min_slack >= -1e-10);
    }
}

TEST_CASE("seeded pinched instances keep every slack nonnegative") {
  int built = 0;
  for (int i = 0; i < 30; ++i) {
    RngStream params(1000 + static_cast<std::uint64_t>(i), 0xAB1Eull, 0);
    const int n = 5 + static_cast<int>(params.next_below(4));
    const int m = 1 + static_cast<int>(params.next_below(4));
    const double c = (params.next_below(2) == 0) ? 0.0 : 1.0;
    const int k = 2 + static_cast<int>(params.next_below(static_cast<std::uint64_t>(n / 2 - 1)));
    auto p = random_pinched_instance(n, m, c, k, params);
    if (!p) continue;
    ++built;
    RngStream split_stream(2000 + static_cast<std::uint64_t>(i), 0xAB1Full, 0);
    for (int q = 2; q <= k; ++q) {
      const SubspaceSplit random_split{q, split_stream.orthogonal(n)};
      for (const auto& split : {first_coordinates(n, q), random_split}) {
        const auto record = verify_lemma_chain(*p, k, q, split);
        INFO("i=", i, " n=", n, " k=", k, " q=", q);
        CHECK(record.hypothesis_met);
        CHECK(record.min_slack >= -1e-10);
        CHECK(record.bound_holds);
      }
    }
  }
  CHECK(built >= 25);  // the generator accepts nearly everything at this scale
}

TEST_CASE("generator honors the requested margin") {
  RngStream stream(4242, 0xAB20ull, 0);
  const auto p = random_pinched_instance(6, 2, 1.0, 3, stream, 0.05);
  REQUIRE(p);
  const auto [means, h] = curvature::mean_curvature_vector(*p);
  const auto [ric_min, dir] = curvature::ricci_min(*p);
  const double alpha = bounds::alpha(6, 3, h, 1.0);
  // margin is at least the requested fraction (bisection may land above)
  CHECK(ric_min - alpha >= 0.05 * (1.0 + h * h) - 1e-8);
}

TEST_CASE("generator is deterministic in the stream") {
  RngStream s1(7, 0xAB21ull, 0);
  RngStream s2(7, 0xAB21ull, 0);
  const auto a = random_pinched_instance(5, 2, 0.0, 2, s1);
  const auto b = random_pinched_instance(5, 2, 0.0, 2, s2);
  REQUIRE(a);
  REQUIRE(b);
  for (int alpha = 0; alpha < 2; ++alpha)
    CHECK((a->shape_ops[alpha] - b->shape_ops[alpha]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hypothesis failure is reported, not thrown") {
  // spread diagonal: mean curvature zero, Ricci far below alpha
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(6, 6);
  op(0, 0) = 3.0;
  op(1, 1) = -3.0;
  const PointData p = make_point_data(6, 1, 1.0, {op});
  const auto record = verify_lemma_chain(p, 3, 2, first_coordinates(6, 2));
  CHECK_FALSE(record.hypothesis_met);
  CHECK(record.pinch_margin < 0.0);
  CHECK(record.lines.size() == 13);
}

TEST_CASE("chain preconditions") {
  const auto [p, spec] = models::einstein_torus(6, 3, 1.0, 0.0, 2);
  CHECK_THROWS_AS(verify_lemma_chain(p, 3, 1, first_coordinates(6, 1)), DomainError);
  CHECK_THROWS_AS(verify_lemma_chain(p, 3, 4, first_coordinates(6, 4)), DomainError);
  CHECK_THROWS_AS(verify_lemma_chain(p, 4, 2, first_coordinates(6, 2)), DomainError);
  // split q must match the chain q
  CHECK_THROWS_AS(verify_lemma_chain(p, 3, 2, first_coordinates(6, 3)), DimensionMismatch);
  // n >= 5 on the data itself
  Eigen::MatrixXd small = Eigen::MatrixXd::Identity(4, 4);
  const PointData tiny = make_point_data(4, 1, 1.0, {small});
  CHECK_THROWS_AS(verify_lemma_chain(tiny, 2, 2, first_coordinates(4, 2)), DomainError);
}

TEST_CASE("equality lines carry the equality flag") {
  const auto [p, spec] = models::einstein_torus(7, 2, 1.0, 0.25, 3);
  const auto record = verify_lemma_chain(p, 2, 2, first_coordinates(7, 2));
  int equalities = 0;
  for (const auto& line : record.lines)
    if (line.equality_line) {
      ++equalities;
      CHECK(std::abs(line.slack) < 1e-9);
    }
  CHECK(equalities == 4);  // s1/s2 identities, the combination, the threshold collapse
}

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinchkit/point_data.hpp"
#include "pinchkit/rng.hpp"

namespace pinchkit::theta {

// ==== Lawson-Simons functional over tangent q-planes ====

// An orthonormal basis of the tangent space whose first q columns span
// the distinguished subspace V.
struct SubspaceSplit {
  int q = 0;
  Eigen::MatrixXd basis;
};

// split adapted to a coordinate subset (indices ascending, complement after)
SubspaceSplit coordinate_split(int n, std::vector<int> subset);

// Theta_q = sum_{i<=q<j} sum_alpha (2 h(ei,ej)^2 - h(ei,ei) h(ej,ej))
double theta_q_basis(const PointData& p, const SubspaceSplit& split);

// basis-free form on a rank-q orthogonal projection:
// Theta_q = sum_alpha (2 |P_perp H P|_F^2 - tr(P H) tr(P_perp H))
double theta_q_subspace(const PointData& p, const Eigen::MatrixXd& projection);

enum class Verdict { STRICT, EQUALITY, VIOLATED };
std::string to_string(Verdict v);

struct OptimizerConfig {
  int starts = 32;            // random multistart count
  std::uint64_t seed = 42;
  int max_iters = 500;
  double grad_tol = 1e-10;    // Riemannian gradient norm stopping rule
  long subset_cap = 10000;    // enumerate coordinate subsets when C(n,q) <= cap
};

struct ThetaResult {
  double value = 0.0;
  SubspaceSplit split;
  double threshold = 0.0;  // q(n-q)c
  Verdict verdict = Verdict::STRICT;
  bool global_certified = false;
  double equality_tol = 0.0;
  int starts_used = 0;
  int iterations = 0;  // ascent iterations summed over starts
};

// Maximize Theta_q over the Grassmannian Gr(q, n). When the shape
// operators commute within 1e-10 (1 + S), an exhaustive coordinate-subset
// search in a simultaneous near-eigenbasis certifies the global maximum;
// otherwise projected-gradient ascent with QR retraction runs from
// `starts` seeded random points plus every coordinate-subset start under
// the cap, and the result is a certified lower bound only.
ThetaResult maximize_theta(const PointData& p, int q, const OptimizerConfig& cfg = {});

// maximize_theta followed by the verdict against q(n-q)c with the
// equality band 1e-8 (1 + |q(n-q)c|)
ThetaResult homology_verdict(const PointData& p, int q, const OptimizerConfig& cfg = {});

// ==== pinching lemma chain ====

struct ChainLine {
  std::string name;
  double value = 0.0;      // the bound on Theta_q this line certifies
  double slack = 0.0;      // this line minus the line it follows from
  bool equality_line = false;  // slack is an identity residual, not an estimate
};

struct ChainRecord {
  int q = 0;
  int k = 0;
  double theta = 0.0;
  double threshold = 0.0;     // q(n-q)c
  bool hypothesis_met = false;
  double pinch_margin = 0.0;  // Ric_min - alpha(n,k,H,c)
  std::vector<ChainLine> lines;
  double min_slack = 0.0;
  double final_slack = 0.0;   // q(n-q)c - Theta_q
  bool bound_holds = false;
};

// Evaluates every intermediate estimate of the two scaling chains and
// their convex combination in the given split basis, recording the slack
// at each step. The pinching hypothesis is reported, not assumed: when it
// fails the chain is still evaluated and the pinching step's slack may go
// negative.
ChainRecord verify_lemma_chain(const PointData& p, int k, int q, const SubspaceSplit& split);

// Random instance satisfying the pinching hypothesis with margin
// margin_frac (c + H^2): i.i.d. symmetric operators, the first shifted by
// t * Identity with t found by bisection in [0, 10]. Returns nothing when
// no shift in range reaches the target margin.
std::optional<PointData> random_pinched_instance(int n, int m, double c, int k,
                                                 RngStream& stream, double margin_frac = 0.05);

// C(n, q) with saturation, for subset-enumeration gating
long long binomial(int n, int q);

}  // namespace pinchkit::theta

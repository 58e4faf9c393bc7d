#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "pinchkit/point_data.hpp"
#include "pinchkit/rational.hpp"

namespace pinchkit::curvature {

// ==== Gauss-equation curvature quantities ====
//
// All operations are pure functions of one PointData. The float path is
// the default; the exact path works entry-by-entry on the rational layer
// and is used by the model-space identity checks.

struct CurvatureSummary {
  std::vector<double> mean_vector;  // c_alpha = trace(H_alpha)/n
  double H = 0.0;                   // |(c_alpha)|
  double S = 0.0;                   // sum of squared Frobenius norms
  Eigen::MatrixXd ric;              // symmetric n x n
  double rho = 0.0;                 // scalar curvature
  double ric_min = 0.0;             // smallest Ricci eigenvalue
  Eigen::VectorXd ric_min_direction;
};

std::pair<std::vector<double>, double> mean_curvature_vector(const PointData& p);

// Ric_ij = (n-1) c delta_ij + sum_alpha (n c_alpha h_ij - sum_k h_ik h_jk)
Eigen::MatrixXd ricci_tensor(const PointData& p);

// computed both as trace(ricci_tensor) and as n(n-1)c + n^2 H^2 - S;
// throws InternalInconsistency when the two disagree beyond a tolerance
// scaled by the summand magnitudes (the identity cancels near rho = 0)
double scalar_curvature(const PointData& p);

double sff_norm_sq(const PointData& p);

// smallest eigenvalue with its eigenvector under the deterministic sign
// convention (first nonnegligible component positive)
std::pair<double, Eigen::VectorXd> ricci_min(const PointData& p);

CurvatureSummary summarize(const PointData& p);

// ==== exact-rational path ====

struct ExactCurvature {
  std::vector<Rat> mean_vector;
  Rat H2;   // squared mean curvature
  Rat S;
  std::vector<Rat> ric;  // n x n row-major
  Rat rho;
};

// requires p.exact; both scalar-curvature forms are asserted equal
ExactCurvature exact_curvature(const PointData& p);

}  // namespace pinchkit::curvature

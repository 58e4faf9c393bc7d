#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pinchkit/rational.hpp"

namespace pinchkit {

// ==== pointwise second-fundamental-form data ====
//
// One point of an immersion: tangent dimension n, codimension m, ambient
// sectional curvature c, and the m shape operators H_alpha in a fixed
// orthonormal tangent/normal frame. Always carries float matrices; when
// `exact` is set the rational layer mirrors them losslessly and the
// exact curvature path becomes available.

struct PointData {
  int n = 0;
  int m = 0;
  double c = 0.0;
  std::vector<Eigen::MatrixXd> shape_ops;
  std::string label;

  bool exact = false;
  Rat c_exact;
  // m blocks of n*n entries, row-major; valid only when exact
  std::vector<std::vector<Rat>> shape_ops_exact;

  const Rat& exact_entry(int alpha, int i, int j) const {
    return shape_ops_exact[alpha][static_cast<std::size_t>(i) * n + j];
  }
};

// Checks dimensions and the symmetry policy, then symmetrizes in place.
// Asymmetry up to 1e-9*(1 + max|entry|) is treated as serialization
// round-off; beyond that the data is rejected. Exact-layer entries must
// mirror the float layer and be exactly symmetric after ingestion.
void validate_point_data(PointData& p);

PointData make_point_data(int n, int m, double c, std::vector<Eigen::MatrixXd> shape_ops,
                          std::string label = "");

PointData make_exact_point_data(int n, int m, Rat c, std::vector<std::vector<Rat>> shape_ops,
                                std::string label = "");

}  // namespace pinchkit

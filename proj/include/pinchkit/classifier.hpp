#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pinchkit/point_data.hpp"
#include "pinchkit/theta.hpp"

namespace pinchkit::classify {

// ==== equality-case structure detection and the pointwise verdict ====

struct BlockStructure {
  int k = 0;
  // first k columns span the lambda eigenspace, remaining n-k the mu one
  Eigen::MatrixXd basis;
  std::vector<double> lambdas;  // per normal direction
  std::vector<double> mus;
  std::vector<double> eta1;  // principal-normal coefficients, equal to lambdas
  std::vector<double> eta2;
  double residual = 0.0;  // max deviation from exact block-scalar form
  bool degenerate = false;  // umbilical: lambda = mu for every alpha
};

struct DetectConfig {
  double tol = 1e-8;        // block residual acceptance, scaled by (1 + max entry)
  std::uint64_t seed = 42;  // generic-combination weight stream
};

// margin = Ric_min - alpha(n, k, H, c); the hypothesis holds iff >= -tol
double check_pinching(const PointData& p, int k);

// Simultaneous block-scalar diagonalization: commutator gate, seeded
// generic combination, spectral-gap clustering into sizes (k, n-k),
// per-direction constancy check. Absent when the data has no such
// structure within tolerance. Umbilical data comes back flagged
// degenerate with basis = identity.
std::optional<BlockStructure> equality_case_detect(const PointData& p, int k,
                                                   const DetectConfig& cfg = {});

// eta1 = (lambda_alpha), eta2 = (mu_alpha); validates the bilinear
// reconstruction II(X, Y) = <X_V, Y_V> eta1 + <X_W, Y_W> eta2 on seeded
// random vector pairs before returning
std::tuple<std::vector<double>, std::vector<double>, bool> principal_normals(
    const PointData& p, const BlockStructure& s);

// rank of the half-vectorized shape-operator family; equals the first
// normal space dimension dim span{II(X,Y)}
int first_normal_rank(const PointData& p, double tol = 1e-10);

// pointwise flat normal bundle: all shape operators commute
bool normal_flatness(const PointData& p, double tol = 1e-10);

enum class PointClass { STRICT_PINCHED_VANISHING, EQUALITY_TORUS_STRUCTURE, NOT_PINCHED };
std::string to_string(PointClass v);

struct PointVerdict {
  double pinching_margin = 0.0;
  PointClass verdict = PointClass::NOT_PINCHED;
  std::optional<BlockStructure> structure;
  double einstein_residual = 0.0;  // max |Ric - alpha Identity| when structure found
  double tol = 0.0;                // margin tolerance in force
};

struct ClassifyConfig {
  double margin_tol = 1e-9;  // scaled by (1 + |alpha|)
  DetectConfig detect;
  theta::OptimizerConfig optimizer;
};

// Pointwise mirror of the dichotomy: not pinched, strictly pinched with
// the vanishing verdict, or the equality case with detected torus block
// structure and the Einstein identity Ric = alpha Identity. An EQUALITY
// verdict whose structure cannot be detected (or fails the Einstein
// check) raises ClassificationInconsistent rather than guessing.
PointVerdict classify_point(const PointData& p, int k, const ClassifyConfig& cfg = {});

}  // namespace pinchkit::classify

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "pinchkit/point_data.hpp"
#include "pinchkit/rational.hpp"

namespace pinchkit::models {

// ==== model immersions and their ground-truth quantities ====
//
// The torus model S^k(rho1) x S^{n-k}(rho2) in S^{n+1}(r) composed into a
// space form of curvature c. Its float PointData carries the two nonzero
// shape operators diag(a I_k, -b I_{n-k}) and H_u Identity. Every model
// identity is polynomial in the squared quantities (r^2, a^2, b^2, ab,
// H_u^2, ...), so the exact layer works with those as rationals and the
// identities check machine-exact; the matrices themselves stay float.

struct ModelSpec {
  int n = 0, k = 0, m = 0;
  double r = 0.0, c = 0.0;
  double a = 0.0;        // k-block principal curvature of the hypersurface normal
  double b = 0.0;        // (n-k)-block, carried positive; the operator holds -b
  double H_u = 0.0;      // umbilical composition curvature, sqrt(1/r^2 - c)
  double c_bar = 0.0;    // 1/r^2
  double H_g = 0.0;      // hypersurface mean curvature inside the sphere
  double H = 0.0;        // total mean curvature, H^2 = H_g^2 + H_u^2
  double lambda1 = 0.0;  // mean-direction principal values; 0 when H = 0
  double mu1 = 0.0;
  double rho1 = 0.0, rho2 = 0.0;  // factor radii
  double ric_value = 0.0;         // (n-2)/r^2

  bool exact = false;  // rational layer valid
  Rat r2_q, c_q, a2_q, b2_q, ab_q, hu2_q, hg2_q, h2_q, ric_q, rho1_sq_q, rho2_sq_q;
};

// totally umbilical point: H_1 = H Identity, remaining operators zero
PointData umbilical_sphere(int n, int m, double c, double H);

// Einstein torus hypersurface of S^{n+1}(r) composed into curvature c.
// Construction is validated internally: the Gauss-equation Ricci matrix
// must equal ((n-2)/r^2) Identity and the mean-direction principal values
// must match their closed forms.
std::pair<PointData, ModelSpec> einstein_torus(int n, int k, double r, double c, int m);

// exact-rational variant, parameterized by r^2 so radii stay symbolic
std::pair<PointData, ModelSpec> einstein_torus_exact(int n, int k, const Rat& r_sq, const Rat& c,
                                                     int m);

// n = 2k specialization; k = 2 tolerated for table generation even
// though the pinching theory needs n >= 5
std::pair<PointData, ModelSpec> clifford_minimal(int k, double r, double c, int m);
std::pair<PointData, ModelSpec> clifford_minimal_exact(int k, const Rat& r_sq, const Rat& c, int m);

// the inner factor of the torus model: the hypersurface alone, ambient
// curvature 1/r^2, single shape operator diag(a I_k, -b I_{n-k})
PointData torus_hypersurface_in_sphere(int n, int k, double r);

// append the umbilical normal of S(r) in the outer space form: requires
// the inner ambient curvature to equal 1/r^2, adds H_u Identity with
// H_u = sqrt(1/r^2 - c_outer), pads with zero operators to m_outer
PointData compose_umbilical(const PointData& inner, double r, double c_outer, int m_outer);

// mean-direction principal values
//   lambda1 = H + (n-2k) phi(k) (c+H^2) / (k H)
//   mu1     = H - (n-2k) phi(k) (c+H^2) / ((n-k) H)
// n = 2k returns (H, H) without the division; H = 0 is out of domain
std::pair<double, double> principal_values_closed_form(int n, int k, double H, double c);

// ==== synthetic equality-case fixtures ====

struct SyntheticEquality {
  PointData data;
  Eigen::MatrixXd tangent_frame;  // Q: operators are mixtures of Q^T diag(...) Q
  Eigen::MatrixXd normal_mixer;   // O: H'_alpha = sum_beta O(beta, alpha) H_beta
  // ground truth before mixing
  std::vector<double> lambdas, mus;
};

SyntheticEquality equality_case_synthetic_full(int n, int k, int m,
                                               const std::vector<double>& lambdas,
                                               const std::vector<double>& mus, double c,
                                               std::uint64_t seed);

PointData equality_case_synthetic(int n, int k, int m, const std::vector<double>& lambdas,
                                  const std::vector<double>& mus, double c, std::uint64_t seed);

// ==== exact identity suite (rational-squared mode) ====

struct TorusExactChecks {
  bool ricci_einstein = false;   // both Ricci block values equal (n-2)/r^2
  bool alpha_attained = false;   // alpha(n, k, H_model, c) equals (n-2)/r^2
  bool h_sq_splits = false;      // H^2 = H_g^2 + H_u^2
  bool ab_inverse_r_sq = false;  // a b = 1/r^2
  bool factor_ricci = false;     // (k-1)/rho1^2 = (n-k-1)/rho2^2 = (n-2)/r^2
  bool radii_split = false;      // rho1^2 + rho2^2 = r^2
  bool minimal_iff_2k = false;   // trace H_1 = 0 exactly iff n = 2k
  bool all() const {
    return ricci_einstein && alpha_attained && h_sq_splits && ab_inverse_r_sq && factor_ricci &&
           radii_split && minimal_iff_2k;
  }
};

TorusExactChecks verify_torus_exact(int n, int k, const Rat& r_sq, const Rat& c);

}  // namespace pinchkit::models

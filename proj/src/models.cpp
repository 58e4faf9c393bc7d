#include "pinchkit/models.hpp"

#include <cmath>

#include "pinchkit/bounds.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/detail/linalg.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/rng.hpp"

namespace pinchkit::models {

namespace {

void require_torus_params(int n, int k, double r, double c, int m, int min_n) {
  if (n < min_n)
    throw DomainError("torus model: n must be >= " + std::to_string(min_n) + ", got " +
                      std::to_string(n));
  if (k < 2 || 2 * k > n)
    throw DomainError("torus model: k must satisfy 2 <= k <= n/2, got k=" + std::to_string(k));
  if (m < 2) throw DomainError("torus model: m must be >= 2, got " + std::to_string(m));
  if (!(r > 0)) throw DomainError("torus model: r must be positive");
  if (c < 0) throw DomainError("torus model: c must be >= 0");
  if (1.0 / (r * r) < c - 1e-15)
    throw DomainError("torus model: umbilical factor needs 1/r^2 >= c");
}

// float construction shared by the torus entry points; min_n = 4 admits
// the k = 2 Clifford table case
std::pair<PointData, ModelSpec> build_torus(int n, int k, double r, double c, int m, int min_n) {
  require_torus_params(n, k, r, c, m, min_n);

  ModelSpec spec;
  spec.n = n;
  spec.k = k;
  spec.m = m;
  spec.r = r;
  spec.c = c;
  spec.rho1 = std::sqrt(static_cast<double>(k - 1) / (n - 2)) * r;
  spec.rho2 = std::sqrt(static_cast<double>(n - k - 1) / (n - 2)) * r;
  spec.a = std::sqrt(static_cast<double>(n - k - 1) / (k - 1)) / r;
  spec.b = std::sqrt(static_cast<double>(k - 1) / (n - k - 1)) / r;
  spec.c_bar = 1.0 / (r * r);
  spec.H_u = std::sqrt(std::max(0.0, spec.c_bar - c));
  spec.H_g = (n - 2.0 * k) / (r * n * std::sqrt(static_cast<double>(k - 1) * (n - k - 1)));
  spec.H = std::sqrt(spec.H_g * spec.H_g + spec.H_u * spec.H_u);
  spec.ric_value = (n - 2.0) / (r * r);

  std::vector<Eigen::MatrixXd> ops(m, Eigen::MatrixXd::Zero(n, n));
  ops[0].topLeftCorner(k, k) = spec.a * Eigen::MatrixXd::Identity(k, k);
  ops[0].bottomRightCorner(n - k, n - k) = -spec.b * Eigen::MatrixXd::Identity(n - k, n - k);
  ops[1] = spec.H_u * Eigen::MatrixXd::Identity(n, n);
  PointData p = make_point_data(n, m, c, std::move(ops), "einstein_torus");

  // mean-direction principal values of the constructed data
  if (spec.H > 1e-14) {
    spec.lambda1 = (spec.H_g * spec.a + spec.H_u * spec.H_u) / spec.H;
    spec.mu1 = (-spec.H_g * spec.b + spec.H_u * spec.H_u) / spec.H;
  }

  // internal validation: the Gauss-equation Ricci matrix must be Einstein
  // at exactly the advertised value
  const Eigen::MatrixXd ric = curvature::ricci_tensor(p);
  const double ric_defect =
      detail::max_abs(ric - spec.ric_value * Eigen::MatrixXd::Identity(n, n));
  if (ric_defect > 1e-10 * (1.0 + std::abs(spec.ric_value)))
    throw InternalInconsistency("torus construction is not Einstein: defect " +
                                std::to_string(ric_defect));
  if (n >= 5 && spec.H > 1e-12) {
    const auto [lam, mu] = principal_values_closed_form(n, k, spec.H, c);
    if (std::abs(lam - spec.lambda1) > 1e-10 * (1.0 + std::abs(lam)) ||
        std::abs(mu - spec.mu1) > 1e-10 * (1.0 + std::abs(mu)))
      throw InternalInconsistency("torus principal values disagree with their closed forms");
  }
  return {std::move(p), std::move(spec)};
}

void fill_exact_layer(ModelSpec& spec, int n, int k, const Rat& r_sq, const Rat& c) {
  spec.exact = true;
  spec.r2_q = r_sq;
  spec.c_q = c;
  spec.rho1_sq_q = Rat(k - 1, n - 2) * r_sq;
  spec.rho2_sq_q = Rat(n - k - 1, n - 2) * r_sq;
  spec.a2_q = Rat(n - k - 1, k - 1) / r_sq;
  spec.b2_q = Rat(k - 1, n - k - 1) / r_sq;
  spec.ab_q = 1 / r_sq;
  spec.hu2_q = 1 / r_sq - c;
  spec.hg2_q = Rat((n - 2 * k) * (n - 2 * k)) / (r_sq * n * n * (k - 1) * (n - k - 1));
  spec.h2_q = spec.hg2_q + spec.hu2_q;
  spec.ric_q = Rat(n - 2) / r_sq;
}

}  // namespace

PointData umbilical_sphere(int n, int m, double c, double H) {
  if (n < 2) throw DomainError("umbilical_sphere: n must be >= 2");
  if (m < 1) throw DomainError("umbilical_sphere: m must be >= 1");
  if (H < 0) throw DomainError("umbilical_sphere: H must be >= 0");
  std::vector<Eigen::MatrixXd> ops(m, Eigen::MatrixXd::Zero(n, n));
  ops[0] = H * Eigen::MatrixXd::Identity(n, n);
  return make_point_data(n, m, c, std::move(ops), "umbilical_sphere");
}

std::pair<PointData, ModelSpec> einstein_torus(int n, int k, double r, double c, int m) {
  return build_torus(n, k, r, c, m, 5);
}

std::pair<PointData, ModelSpec> einstein_torus_exact(int n, int k, const Rat& r_sq, const Rat& c,
                                                     int m) {
  if (r_sq <= 0) throw DomainError("torus model: r^2 must be positive");
  if (c < 0) throw DomainError("torus model: c must be >= 0");
  if (1 / r_sq < c) throw DomainError("torus model: umbilical factor needs 1/r^2 >= c");
  auto [p, spec] = build_torus(n, k, std::sqrt(to_double(r_sq)), to_double(c), m, 5);
  fill_exact_layer(spec, n, k, r_sq, c);
  return {std::move(p), std::move(spec)};
}

std::pair<PointData, ModelSpec> clifford_minimal(int k, double r, double c, int m) {
  if (k < 2) throw DomainError("clifford model: k must be >= 2");
  auto result = build_torus(2 * k, k, r, c, m, 4);
  result.first.label = "clifford_minimal";
  return result;
}

std::pair<PointData, ModelSpec> clifford_minimal_exact(int k, const Rat& r_sq, const Rat& c,
                                                       int m) {
  if (k < 2) throw DomainError("clifford model: k must be >= 2");
  if (r_sq <= 0) throw DomainError("clifford model: r^2 must be positive");
  auto [p, spec] = build_torus(2 * k, k, std::sqrt(to_double(r_sq)), to_double(c), m, 4);
  p.label = "clifford_minimal";
  fill_exact_layer(spec, 2 * k, k, r_sq, c);
  return {std::move(p), std::move(spec)};
}

PointData torus_hypersurface_in_sphere(int n, int k, double r) {
  auto [p, spec] = build_torus(n, k, r, 0.0, 2, 4);
  // keep only the hypersurface operator; the ambient is the sphere itself
  std::vector<Eigen::MatrixXd> ops = {p.shape_ops[0]};
  return make_point_data(n, 1, spec.c_bar, std::move(ops), "torus_hypersurface");
}

PointData compose_umbilical(const PointData& inner, double r, double c_outer, int m_outer) {
  const double c_bar = 1.0 / (r * r);
  if (std::abs(inner.c - c_bar) > 1e-10 * (1.0 + c_bar))
    throw CurvatureMismatch("inner ambient curvature " + std::to_string(inner.c) +
                            " disagrees with 1/r^2 = " + std::to_string(c_bar));
  if (c_bar < c_outer - 1e-15)
    throw DomainError("compose_umbilical: needs 1/r^2 >= outer curvature");
  if (m_outer < inner.m + 1)
    throw DomainError("compose_umbilical: m_outer must be at least inner m + 1");
  const double h_u = std::sqrt(std::max(0.0, c_bar - c_outer));
  std::vector<Eigen::MatrixXd> ops = inner.shape_ops;
  ops.push_back(h_u * Eigen::MatrixXd::Identity(inner.n, inner.n));
  while (static_cast<int>(ops.size()) < m_outer)
    ops.push_back(Eigen::MatrixXd::Zero(inner.n, inner.n));
  return make_point_data(inner.n, m_outer, c_outer, std::move(ops), inner.label);
}

std::pair<double, double> principal_values_closed_form(int n, int k, double H, double c) {
  if (k < 2 || 2 * k > n)
    throw DomainError("principal values: k must satisfy 2 <= k <= n/2");
  if (!(H > 0)) throw DomainError("principal values: formulas need H > 0");
  if (!(c + H * H > 0)) throw DomainError("principal values: need c + H^2 > 0");
  if (n == 2 * k) return {H, H};
  const double phi_k = bounds::phi(n, k).value;
  const double shift = (n - 2.0 * k) * phi_k * (c + H * H);
  return {H + shift / (k * H), H - shift / ((n - k) * H)};
}

SyntheticEquality equality_case_synthetic_full(int n, int k, int m,
                                               const std::vector<double>& lambdas,
                                               const std::vector<double>& mus, double c,
                                               std::uint64_t seed) {
  if (n < 5) throw DomainError("synthetic equality data: n must be >= 5");
  if (k < 2 || 2 * k > n)
    throw DomainError("synthetic equality data: k must satisfy 2 <= k <= n/2");
  if (static_cast<int>(lambdas.size()) != m || static_cast<int>(mus.size()) != m)
    throw DimensionMismatch("synthetic equality data: lambda/mu lists must have length m");

  RngStream tangent_stream(seed, 0x7A46ull);
  RngStream normal_stream(seed, 0x4E4Dull);
  const Eigen::MatrixXd q = tangent_stream.orthogonal(n);
  const Eigen::MatrixXd o = normal_stream.orthogonal(m);

  std::vector<Eigen::MatrixXd> conjugated(m);
  for (int beta = 0; beta < m; ++beta) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    d.topLeftCorner(k, k) = lambdas[beta] * Eigen::MatrixXd::Identity(k, k);
    d.bottomRightCorner(n - k, n - k) = mus[beta] * Eigen::MatrixXd::Identity(n - k, n - k);
    conjugated[beta] = q.transpose() * d * q;
  }
  std::vector<Eigen::MatrixXd> ops(m, Eigen::MatrixXd::Zero(n, n));
  for (int alpha = 0; alpha < m; ++alpha)
    for (int beta = 0; beta < m; ++beta) ops[alpha] += o(beta, alpha) * conjugated[beta];

  SyntheticEquality out;
  out.data = make_point_data(n, m, c, std::move(ops), "synthetic_equality");
  out.tangent_frame = q;
  out.normal_mixer = o;
  out.lambdas = lambdas;
  out.mus = mus;
  return out;
}

PointData equality_case_synthetic(int n, int k, int m, const std::vector<double>& lambdas,
                                  const std::vector<double>& mus, double c, std::uint64_t seed) {
  return equality_case_synthetic_full(n, k, m, lambdas, mus, c, seed).data;
}

TorusExactChecks verify_torus_exact(int n, int k, const Rat& r_sq, const Rat& c) {
  if (n < 5) throw DomainError("verify_torus_exact: n must be >= 5");
  if (k < 2 || 2 * k > n) throw DomainError("verify_torus_exact: k must satisfy 2 <= k <= n/2");
  if (r_sq <= 0) throw DomainError("verify_torus_exact: r^2 must be positive");
  if (c < 0 || 1 / r_sq < c) throw DomainError("verify_torus_exact: needs 0 <= c <= 1/r^2");

  ModelSpec spec;
  fill_exact_layer(spec, n, k, r_sq, c);
  const Rat& a2 = spec.a2_q;
  const Rat& b2 = spec.b2_q;
  const Rat& ab = spec.ab_q;
  const Rat& hu2 = spec.hu2_q;

  TorusExactChecks checks;
  // Gauss-equation Ricci values on the two blocks; the off-diagonal
  // entries vanish structurally for block-scalar operators
  const Rat ric_top = (n - 1) * c + (k - 1) * a2 - (n - k) * ab + (n - 1) * hu2;
  const Rat ric_bottom = (n - 1) * c + (n - k - 1) * b2 - k * ab + (n - 1) * hu2;
  checks.ricci_einstein = (ric_top == spec.ric_q) && (ric_bottom == spec.ric_q);
  checks.alpha_attained = bounds::alpha_exact(n, k, spec.h2_q, c) == spec.ric_q;
  checks.h_sq_splits = spec.h2_q == spec.hg2_q + spec.hu2_q;
  checks.ab_inverse_r_sq = a2 * b2 == ab * ab && ab == 1 / r_sq;
  checks.factor_ricci = Rat(k - 1) / spec.rho1_sq_q == spec.ric_q &&
                        Rat(n - k - 1) / spec.rho2_sq_q == spec.ric_q;
  checks.radii_split = spec.rho1_sq_q + spec.rho2_sq_q == r_sq;
  // trace H_1 = k a - (n-k) b with a, b > 0: zero iff k^2 a^2 = (n-k)^2 b^2
  const bool trace_zero = Rat(k * k) * a2 == Rat((n - k) * (n - k)) * b2;
  checks.minimal_iff_2k = trace_zero == (n == 2 * k);
  return checks;
}

}  // namespace pinchkit::models

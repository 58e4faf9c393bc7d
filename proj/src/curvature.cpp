#include "pinchkit/curvature.hpp"

#include <cmath>

#include "pinchkit/detail/linalg.hpp"
#include "pinchkit/errors.hpp"

namespace pinchkit::curvature {

std::pair<std::vector<double>, double> mean_curvature_vector(const PointData& p) {
  std::vector<double> c_alpha(p.m);
  double sum_sq = 0.0;
  for (int alpha = 0; alpha < p.m; ++alpha) {
    c_alpha[alpha] = p.shape_ops[alpha].trace() / p.n;
    sum_sq += c_alpha[alpha] * c_alpha[alpha];
  }
  return {std::move(c_alpha), std::sqrt(sum_sq)};
}

Eigen::MatrixXd ricci_tensor(const PointData& p) {
  const auto [c_alpha, h] = mean_curvature_vector(p);
  (void)h;
  Eigen::MatrixXd ric =
      (p.n - 1) * p.c * Eigen::MatrixXd::Identity(p.n, p.n);
  for (int alpha = 0; alpha < p.m; ++alpha) {
    const Eigen::MatrixXd& ha = p.shape_ops[alpha];
    ric += p.n * c_alpha[alpha] * ha - ha * ha;
  }
  // the Gauss sum of symmetric matrices is symmetric; enforce it exactly
  return 0.5 * (ric + ric.transpose());
}

double sff_norm_sq(const PointData& p) {
  double s = 0.0;
  for (const auto& ha : p.shape_ops) s += ha.squaredNorm();
  return s;
}

double scalar_curvature(const PointData& p) {
  const double trace_form = ricci_tensor(p).trace();
  const auto [c_alpha, h] = mean_curvature_vector(p);
  (void)c_alpha;
  const double s = sff_norm_sq(p);
  const double identity_form = p.n * (p.n - 1) * p.c + p.n * p.n * h * h - s;
  // scale by the summands, not the result: the identity cancels near 0
  const double scale = p.n * (p.n - 1) * std::abs(p.c) + p.n * p.n * h * h + s + 1.0;
  if (std::abs(trace_form - identity_form) > 1e-12 * scale)
    throw InternalInconsistency("scalar curvature paths disagree: trace " +
                                std::to_string(trace_form) + " vs identity " +
                                std::to_string(identity_form));
  return trace_form;
}

std::pair<double, Eigen::VectorXd> ricci_min(const PointData& p) {
  const auto [values, vectors] = detail::eig_sym(ricci_tensor(p));
  return {values(0), vectors.col(0)};
}

CurvatureSummary summarize(const PointData& p) {
  CurvatureSummary s;
  auto [c_alpha, h] = mean_curvature_vector(p);
  s.mean_vector = std::move(c_alpha);
  s.H = h;
  s.S = sff_norm_sq(p);
  s.ric = ricci_tensor(p);
  s.rho = scalar_curvature(p);
  auto [rmin, direction] = ricci_min(p);
  s.ric_min = rmin;
  s.ric_min_direction = std::move(direction);
  return s;
}

ExactCurvature exact_curvature(const PointData& p) {
  if (!p.exact) throw DomainError("exact_curvature requires rational point data");
  const int n = p.n;
  ExactCurvature out;
  out.mean_vector.resize(p.m);
  out.H2 = 0;
  out.S = 0;
  for (int alpha = 0; alpha < p.m; ++alpha) {
    Rat trace = 0;
    for (int i = 0; i < n; ++i) trace += p.exact_entry(alpha, i, i);
    out.mean_vector[alpha] = trace / n;
    out.H2 += out.mean_vector[alpha] * out.mean_vector[alpha];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Rat& e = p.exact_entry(alpha, i, j);
        out.S += e * e;
      }
  }
  out.ric.assign(static_cast<std::size_t>(n) * n, Rat(0));
  for (int i = 0; i < n; ++i) out.ric[static_cast<std::size_t>(i) * n + i] = (n - 1) * p.c_exact;
  for (int alpha = 0; alpha < p.m; ++alpha) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Rat term = n * out.mean_vector[alpha] * p.exact_entry(alpha, i, j);
        for (int k = 0; k < n; ++k) term -= p.exact_entry(alpha, i, k) * p.exact_entry(alpha, j, k);
        out.ric[static_cast<std::size_t>(i) * n + j] += term;
        if (i != j) out.ric[static_cast<std::size_t>(j) * n + i] += term;
      }
  }
  Rat trace_form = 0;
  for (int i = 0; i < n; ++i) trace_form += out.ric[static_cast<std::size_t>(i) * n + i];
  const Rat identity_form = n * (n - 1) * p.c_exact + n * n * out.H2 - out.S;
  if (trace_form != identity_form)
    throw InternalInconsistency("exact scalar curvature paths disagree");
  out.rho = trace_form;
  return out;
}

}  // namespace pinchkit::curvature

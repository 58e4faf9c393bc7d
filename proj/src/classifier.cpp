#include "pinchkit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinchkit/bounds.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/detail/linalg.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/rng.hpp"

namespace pinchkit::classify {

namespace {

double max_entry(const PointData& p) {
  double worst = 0.0;
  for (const auto& ha : p.shape_ops)
    if (ha.size() > 0) worst = std::max(worst, ha.cwiseAbs().maxCoeff());
  return worst;
}

// largest off-diagonal magnitude of B^T H B restricted to block-scalar
// deviation: per alpha, distance from diag(lambda I_k, mu I_{n-k})
double block_residual(const PointData& p, const Eigen::MatrixXd& basis, int k,
                      std::vector<double>& lambdas, std::vector<double>& mus) {
  const int n = p.n;
  lambdas.assign(p.m, 0.0);
  mus.assign(p.m, 0.0);
  double residual = 0.0;
  for (int alpha = 0; alpha < p.m; ++alpha) {
    const Eigen::MatrixXd d = basis.transpose() * p.shape_ops[alpha] * basis;
    double lam = 0.0, mu = 0.0;
    for (int i = 0; i < k; ++i) lam += d(i, i);
    for (int j = k; j < n; ++j) mu += d(j, j);
    lam /= k;
    mu /= (n - k);
    lambdas[alpha] = lam;
    mus[alpha] = mu;
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(n, n);
    target.topLeftCorner(k, k) = lam * Eigen::MatrixXd::Identity(k, k);
    target.bottomRightCorner(n - k, n - k) = mu * Eigen::MatrixXd::Identity(n - k, n - k);
    residual = std::max(residual, detail::max_abs(d - target));
  }
  return residual;
}

}  // namespace

double check_pinching(const PointData& p, int k) {
  if (p.n < 5) throw DomainError("check_pinching: n must be >= 5");
  if (k < 2 || 2 * k > p.n)
    throw DomainError("check_pinching: k must satisfy 2 <= k <= n/2, got " + std::to_string(k));
  const auto [c_alpha, big_h] = curvature::mean_curvature_vector(p);
  (void)c_alpha;
  const auto [ric_min, dir] = curvature::ricci_min(p);
  (void)dir;
  return ric_min - bounds::alpha(p.n, k, big_h, p.c);
}

std::optional<BlockStructure> equality_case_detect(const PointData& p, int k,
                                                   const DetectConfig& cfg) {
  const int n = p.n;
  if (k < 1 || k > n - 1) throw DomainError("equality_case_detect: k outside [1, n-1]");
  const double scale = 1.0 + max_entry(p);
  const double accept = cfg.tol * scale;

  // umbilical short-circuit: every operator is scalar, any split works
  {
    double umbilical_residual = 0.0;
    for (int alpha = 0; alpha < p.m; ++alpha) {
      const double mean = p.shape_ops[alpha].trace() / n;
      umbilical_residual = std::max(
          umbilical_residual,
          detail::max_abs(p.shape_ops[alpha] - mean * Eigen::MatrixXd::Identity(n, n)));
    }
    if (umbilical_residual <= accept) {
      BlockStructure s;
      s.k = k;
      s.basis = Eigen::MatrixXd::Identity(n, n);
      s.lambdas.resize(p.m);
      s.mus.resize(p.m);
      for (int alpha = 0; alpha < p.m; ++alpha)
        s.lambdas[alpha] = s.mus[alpha] = p.shape_ops[alpha].trace() / n;
      s.eta1 = s.lambdas;
      s.eta2 = s.mus;
      s.residual = umbilical_residual;
      s.degenerate = true;
      return s;
    }
  }

  // block-scalar families commute; anything else cannot carry the structure
  if (!normal_flatness(p, 1e-8)) return std::nullopt;

  // seeded generic combination; retry while the spectral clustering is
  // ambiguous (split gap under 10x the within-cluster spread)
  for (int attempt = 0; attempt < 5; ++attempt) {
    RngStream weights_stream(cfg.seed, 0xB10C5ull, static_cast<std::uint64_t>(attempt));
    const Eigen::VectorXd w = weights_stream.unit_vector(p.m);
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(n, n);
    for (int alpha = 0; alpha < p.m; ++alpha) combo += w(alpha) * p.shape_ops[alpha];
    const auto [values, vectors] = detail::eig_sym(combo);

    // candidate split positions: sizes (k, n-k) and (n-k, k)
    std::vector<int> positions;
    positions.push_back(k);
    if (n - k != k) positions.push_back(n - k);
    int best_position = -1;
    double best_gap = -1.0;
    for (int pos : positions) {
      const double gap = values(pos) - values(pos - 1);
      if (gap > best_gap) {
        best_gap = gap;
        best_position = pos;
      }
    }
    double within = 0.0;
    for (int i = 1; i < n; ++i) {
      if (i == best_position) continue;
      within = std::max(within, values(i) - values(i - 1));
    }
    const bool ambiguous = best_gap < 10.0 * std::max(within, 1e-14 * scale);
    if (ambiguous && attempt + 1 < 5) continue;

    // lambda block: the cluster containing eigenvector 0 when sizes tie,
    // otherwise the size-k cluster
    const int low_size = best_position;
    Eigen::MatrixXd basis(n, n);
    bool lambda_first;
    if (low_size == k)
      lambda_first = true;
    else if (low_size == n - k)
      lambda_first = false;
    else
      return std::nullopt;
    if (n == 2 * k) lambda_first = true;  // deterministic tie rule
    if (lambda_first) {
      basis = vectors;
    } else {
      basis.leftCols(k) = vectors.rightCols(k);
      basis.rightCols(n - k) = vectors.leftCols(n - k);
    }

    BlockStructure s;
    s.k = k;
    s.basis = basis;
    s.residual = block_residual(p, basis, k, s.lambdas, s.mus);
    if (s.residual > accept) {
      if (ambiguous) return std::nullopt;
      continue;  // clean clustering but wrong structure: one more weight draw
    }
    s.eta1 = s.lambdas;
    s.eta2 = s.mus;
    s.degenerate = false;
    return s;
  }
  return std::nullopt;
}

std::tuple<std::vector<double>, std::vector<double>, bool> principal_normals(
    const PointData& p, const BlockStructure& s) {
  if (static_cast<int>(s.lambdas.size()) != p.m || static_cast<int>(s.mus.size()) != p.m ||
      s.basis.rows() != p.n || s.basis.cols() != p.n)
    throw InvalidStructure("block structure sized inconsistently with the point data");
  const int n = p.n;
  const int k = s.k;
  const double scale = 1.0 + max_entry(p);

  // validate the bilinear reconstruction II(X,Y) = <Xv,Yv> eta1 + <Xw,Yw> eta2
  RngStream stream(0x9D2C5680ull, 0xE7A1ull);
  double reconstruction_residual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = stream.normal_vector(n);
    const Eigen::VectorXd y = stream.normal_vector(n);
    const Eigen::VectorXd xs = s.basis.transpose() * x;
    const Eigen::VectorXd ys = s.basis.transpose() * y;
    const double inner_v = xs.head(k).dot(ys.head(k));
    const double inner_w = xs.tail(n - k).dot(ys.tail(n - k));
    for (int alpha = 0; alpha < p.m; ++alpha) {
      const double actual = x.dot(p.shape_ops[alpha] * y);
      const double predicted = inner_v * s.lambdas[alpha] + inner_w * s.mus[alpha];
      reconstruction_residual =
          std::max(reconstruction_residual, std::abs(actual - predicted) /
                                                (1.0 + std::abs(inner_v) + std::abs(inner_w)));
    }
  }
  if (reconstruction_residual > 1e-6 * scale)
    throw InvalidStructure("bilinear reconstruction fails: residual " +
                           std::to_string(reconstruction_residual));

  double diff_sq = 0.0, norm_sq = 0.0;
  for (int alpha = 0; alpha < p.m; ++alpha) {
    const double d = s.lambdas[alpha] - s.mus[alpha];
    diff_sq += d * d;
    norm_sq += s.lambdas[alpha] * s.lambdas[alpha] + s.mus[alpha] * s.mus[alpha];
  }
  const bool distinct = std::sqrt(diff_sq) > 1e-8 * (1.0 + std::sqrt(norm_sq));
  return {s.lambdas, s.mus, distinct};
}

int first_normal_rank(const PointData& p, double tol) {
  const int n = p.n;
  const int cols = n * (n + 1) / 2;
  Eigen::MatrixXd vech(p.m, cols);
  const double sqrt2 = std::sqrt(2.0);
  for (int alpha = 0; alpha < p.m; ++alpha) {
    int col = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        // off-diagonal weight sqrt(2) makes the rows an isometric image
        // of the symmetric matrices, so singular values are frame-free
        vech(alpha, col++) = (i == j) ? p.shape_ops[alpha](i, j)
                                      : sqrt2 * p.shape_ops[alpha](i, j);
      }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vech);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma(i) > tol * sigma(0)) ++rank;
  return rank;
}

bool normal_flatness(const PointData& p, double tol) {
  const double s = curvature::sff_norm_sq(p);
  for (int a = 0; a < p.m; ++a)
    for (int b = a + 1; b < p.m; ++b) {
      const Eigen::MatrixXd comm =
          p.shape_ops[a] * p.shape_ops[b] - p.shape_ops[b] * p.shape_ops[a];
      if (comm.norm() > tol * (1.0 + s)) return false;
    }
  return true;
}

std::string to_string(PointClass v) {
  switch (v) {
    case PointClass::STRICT_PINCHED_VANISHING: return "STRICT_PINCHED_VANISHING";
    case PointClass::EQUALITY_TORUS_STRUCTURE: return "EQUALITY_TORUS_STRUCTURE";
    case PointClass::NOT_PINCHED: return "NOT_PINCHED";
  }
  return "?";
}

PointVerdict classify_point(const PointData& p, int k, const ClassifyConfig& cfg) {
  if (p.n < 5) throw DomainError("classify_point: n must be >= 5");
  if (k < 2 || 2 * k > p.n)
    throw DomainError("classify_point: k must satisfy 2 <= k <= n/2");

  const auto [c_alpha, big_h] = curvature::mean_curvature_vector(p);
  (void)c_alpha;
  const double alpha = bounds::alpha(p.n, k, big_h, p.c);

  PointVerdict out;
  out.pinching_margin = check_pinching(p, k);
  out.tol = cfg.margin_tol * (1.0 + std::abs(alpha));
  if (out.pinching_margin < -out.tol) {
    out.verdict = PointClass::NOT_PINCHED;
    return out;
  }

  const theta::ThetaResult verdict = theta::homology_verdict(p, k, cfg.optimizer);
  if (verdict.verdict == theta::Verdict::STRICT) {
    out.verdict = PointClass::STRICT_PINCHED_VANISHING;
    return out;
  }
  if (verdict.verdict == theta::Verdict::VIOLATED)
    throw ClassificationInconsistent(
        "pinched point reports Theta_k above the threshold: max " +
        std::to_string(verdict.value) + " vs " + std::to_string(verdict.threshold));

  // equality: the block structure and the Einstein identity must both hold
  out.structure = equality_case_detect(p, k, cfg.detect);
  if (!out.structure)
    throw ClassificationInconsistent(
        "Theta_k attains the threshold but no block structure is detectable");
  const Eigen::MatrixXd ric = curvature::ricci_tensor(p);
  out.einstein_residual = detail::max_abs(
      ric - alpha * Eigen::MatrixXd::Identity(p.n, p.n));
  const double einstein_tol = 1e-8 * (1.0 + std::abs(alpha));
  if (out.einstein_residual > einstein_tol)
    throw ClassificationInconsistent("equality case without the Einstein identity: residual " +
                                     std::to_string(out.einstein_residual));
  out.verdict = PointClass::EQUALITY_TORUS_STRUCTURE;
  return out;
}

}  // namespace pinchkit::classify

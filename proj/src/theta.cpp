#include "pinchkit/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinchkit/bounds.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/detail/linalg.hpp"
#include "pinchkit/errors.hpp"

namespace pinchkit::theta {

namespace {

constexpr double SPLIT_ORTHONORMALITY_TOL = 1e-10;

void require_split(const PointData& p, const SubspaceSplit& split) {
  if (split.basis.rows() != p.n || split.basis.cols() != p.n)
    throw DimensionMismatch("split basis is " + std::to_string(split.basis.rows()) + "x" +
                            std::to_string(split.basis.cols()) + ", point has n=" +
                            std::to_string(p.n));
  if (split.q < 1 || split.q > p.n - 1)
    throw DimensionMismatch("split q=" + std::to_string(split.q) + " outside [1, n-1]");
  if (detail::orthonormality_defect(split.basis) > SPLIT_ORTHONORMALITY_TOL)
    throw DomainError("split basis columns are not orthonormal");
}

// objective in Stiefel coordinates: X is n x q with orthonormal columns
double objective(const PointData& p, const Eigen::MatrixXd& x) {
  double value = 0.0;
  for (const auto& ha : p.shape_ops) {
    const Eigen::MatrixXd hx = ha * x;
    const Eigen::MatrixXd t = x.transpose() * hx;  // q x q
    const double tv = t.trace();
    value += 2.0 * (hx.squaredNorm() - t.squaredNorm()) - tv * (ha.trace() - tv);
  }
  return value;
}

// Euclidean gradient of the objective at X
Eigen::MatrixXd euclidean_gradient(const PointData& p, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (const auto& ha : p.shape_ops) {
    const Eigen::MatrixXd hx = ha * x;
    const Eigen::MatrixXd t = x.transpose() * hx;
    const double tv = t.trace();
    grad += 4.0 * (ha * hx) - 8.0 * hx * t - 2.0 * (ha.trace() - 2.0 * tv) * hx;
  }
  return grad;
}

struct AscentOutcome {
  double value = 0.0;
  Eigen::MatrixXd x;
  int iterations = 0;
};

// projected-gradient ascent with QR retraction and Armijo backtracking
AscentOutcome ascend(const PointData& p, Eigen::MatrixXd x, const OptimizerConfig& cfg) {
  double f = objective(p, x);
  double step = 1.0;
  int iterations = 0;
  for (; iterations < cfg.max_iters; ++iterations) {
    const Eigen::MatrixXd egrad = euclidean_gradient(p, x);
    const Eigen::MatrixXd rgrad = egrad - x * (x.transpose() * egrad);
    const double gnorm_sq = rgrad.squaredNorm();
    if (std::sqrt(gnorm_sq) < cfg.grad_tol) break;
    double eta = step;
    bool accepted = false;
    Eigen::MatrixXd candidate;
    double candidate_value = f;
    for (int backtrack = 0; backtrack < 40; ++backtrack) {
      candidate = detail::orthonormalize(x + eta * rgrad);
      candidate_value = objective(p, candidate);
      if (candidate_value >= f + 1e-4 * eta * gnorm_sq) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    x = candidate;
    f = candidate_value;
    step = std::min(eta * 2.0, 1.0e3);
  }
  return {f, std::move(x), iterations};
}

// complete an n x q orthonormal frame to a full split basis
SubspaceSplit complete_split(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  const int q = static_cast<int>(x.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  Eigen::MatrixXd basis = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
  for (int j = 0; j < q; ++j)
    if (r(j, j) < 0) basis.col(j) = -basis.col(j);
  return {q, std::move(basis)};
}

bool next_combination(std::vector<int>& idx, int n) {
  const int q = static_cast<int>(idx.size());
  for (int i = q - 1; i >= 0; --i) {
    if (idx[i] < n - q + i) {
      ++idx[i];
      for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double max_pairwise_commutator(const PointData& p) {
  double worst = 0.0;
  for (int a = 0; a < p.m; ++a)
    for (int b = a + 1; b < p.m; ++b) {
      const Eigen::MatrixXd comm =
          p.shape_ops[a] * p.shape_ops[b] - p.shape_ops[b] * p.shape_ops[a];
      worst = std::max(worst, comm.norm());
    }
  return worst;
}

double max_entry(const PointData& p) {
  double worst = 0.0;
  for (const auto& ha : p.shape_ops)
    if (ha.size() > 0) worst = std::max(worst, ha.cwiseAbs().maxCoeff());
  return worst;
}

void attach_verdict(ThetaResult& result, const PointData& p, int q) {
  result.threshold = static_cast<double>(q) * (p.n - q) * p.c;
  result.equality_tol = 1e-8 * (1.0 + std::abs(result.threshold));
  if (result.value < result.threshold - result.equality_tol)
    result.verdict = Verdict::STRICT;
  else if (result.value <= result.threshold + result.equality_tol)
    result.verdict = Verdict::EQUALITY;
  else
    result.verdict = Verdict::VIOLATED;
}

}  // namespace

long long binomial(int n, int q) {
  if (q < 0 || q > n) return 0;
  q = std::min(q, n - q);
  long long result = 1;
  for (int i = 1; i <= q; ++i) {
    // saturate before the multiply can overflow; only used for gating
    if (result > (1ll << 60) / (n - q + i)) return 1ll << 60;
    result = result * (n - q + i) / i;
  }
  return result;
}

SubspaceSplit coordinate_split(int n, std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  const int q = static_cast<int>(subset.size());
  if (q < 1 || q > n - 1) throw DimensionMismatch("coordinate subset size outside [1, n-1]");
  std::vector<bool> used(n, false);
  for (int idx : subset) {
    if (idx < 0 || idx >= n) throw DimensionMismatch("coordinate index out of range");
    if (used[idx]) throw DimensionMismatch("repeated coordinate index");
    used[idx] = true;
  }
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n);
  int col = 0;
  for (int idx : subset) basis(idx, col++) = 1.0;
  for (int i = 0; i < n; ++i)
    if (!used[i]) basis(i, col++) = 1.0;
  return {q, std::move(basis)};
}

double theta_q_basis(const PointData& p, const SubspaceSplit& split) {
  require_split(p, split);
  const int q = split.q;
  const auto v = split.basis.leftCols(q);
  const auto w = split.basis.rightCols(p.n - q);
  double value = 0.0;
  for (const auto& ha : p.shape_ops) {
    const Eigen::MatrixXd hv = ha * v;
    const Eigen::MatrixXd cross = w.transpose() * hv;
    const double tv = (v.transpose() * hv).trace();
    const double tw = (w.transpose() * ha * w).trace();
    value += 2.0 * cross.squaredNorm() - tv * tw;
  }
  return value;
}

double theta_q_subspace(const PointData& p, const Eigen::MatrixXd& projection) {
  if (projection.rows() != p.n || projection.cols() != p.n)
    throw NotAProjection("projection is " + std::to_string(projection.rows()) + "x" +
                         std::to_string(projection.cols()) + ", point has n=" +
                         std::to_string(p.n));
  const double sym_defect = detail::max_abs(projection - projection.transpose());
  const double idem_defect = detail::max_abs(projection * projection - projection);
  if (sym_defect > 1e-9 || idem_defect > 1e-9)
    throw NotAProjection("matrix fails P = P^T = P^2 within 1e-9");
  const double trace = projection.trace();
  const double rank = std::round(trace);
  if (std::abs(trace - rank) > 1e-9 || rank < 1 || rank > p.n - 1)
    throw NotAProjection("projection rank " + std::to_string(trace) + " outside [1, n-1]");
  double value = 0.0;
  for (const auto& ha : p.shape_ops) {
    const Eigen::MatrixXd hp = ha * projection;
    const Eigen::MatrixXd php = projection * hp;
    const double tv = hp.trace();
    value += 2.0 * (hp.squaredNorm() - php.squaredNorm()) - tv * (ha.trace() - tv);
  }
  return value;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::STRICT: return "STRICT";
    case Verdict::EQUALITY: return "EQUALITY";
    case Verdict::VIOLATED: return "VIOLATED";
  }
  return "?";
}

ThetaResult maximize_theta(const PointData& p, int q, const OptimizerConfig& cfg) {
  if (q < 1 || q > p.n - 1)
    throw DomainError("maximize_theta: q must lie in [1, n-1], got " + std::to_string(q));
  const int n = p.n;
  const double s = curvature::sff_norm_sq(p);
  const long long subsets = binomial(n, q);
  const double scale = 1.0 + max_entry(p);

  ThetaResult result;
  result.value = -std::numeric_limits<double>::infinity();

  // certified path: simultaneous near-eigenbasis plus exhaustive subsets
  if (max_pairwise_commutator(p) <= 1e-10 * (1.0 + s) && subsets <= cfg.subset_cap) {
    Eigen::MatrixXd best_basis;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 5; ++attempt) {
      RngStream weights_stream(cfg.seed, 0xC0117EC7ull, static_cast<std::uint64_t>(attempt));
      const Eigen::VectorXd w = weights_stream.unit_vector(p.m);
      Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(n, n);
      for (int alpha = 0; alpha < p.m; ++alpha) combo += w(alpha) * p.shape_ops[alpha];
      const auto [values, vectors] = detail::eig_sym(combo);
      (void)values;
      double residual = 0.0;
      for (const auto& ha : p.shape_ops) {
        const Eigen::MatrixXd d = vectors.transpose() * ha * vectors;
        const Eigen::MatrixXd off = d - Eigen::MatrixXd(d.diagonal().asDiagonal());
        residual = std::max(residual, detail::max_abs(off));
      }
      if (residual < best_residual) {
        best_residual = residual;
        best_basis = vectors;
      }
      if (best_residual <= 1e-9 * scale) break;
    }
    if (best_residual <= 1e-7 * scale) {
      std::vector<int> idx(q);
      for (int i = 0; i < q; ++i) idx[i] = i;
      do {
        SubspaceSplit candidate{q, Eigen::MatrixXd(n, n)};
        int col = 0;
        std::vector<bool> used(n, false);
        for (int i : idx) {
          candidate.basis.col(col++) = best_basis.col(i);
          used[i] = true;
        }
        for (int i = 0; i < n; ++i)
          if (!used[i]) candidate.basis.col(col++) = best_basis.col(i);
        const double value = theta_q_basis(p, candidate);
        if (value > result.value) {
          result.value = value;
          result.split = std::move(candidate);
        }
        ++result.starts_used;
      } while (next_combination(idx, n));
      result.global_certified = true;
      attach_verdict(result, p, q);
      return result;
    }
    // ambiguous eigenbasis: fall through to the ascent path
  }

  // ascent path: coordinate-subset starts first, then seeded random starts
  std::vector<Eigen::MatrixXd> start_points;
  if (subsets <= cfg.subset_cap) {
    std::vector<int> idx(q);
    for (int i = 0; i < q; ++i) idx[i] = i;
    do {
      Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, q);
      for (int i = 0; i < q; ++i) x(idx[i], i) = 1.0;
      start_points.push_back(std::move(x));
    } while (next_combination(idx, n));
  }
  for (int start = 0; start < cfg.starts; ++start) {
    RngStream start_stream(cfg.seed, 0x57A27711ull, static_cast<std::uint64_t>(start));
    start_points.push_back(detail::orthonormalize(start_stream.normal_matrix(n, q)));
  }

  for (const auto& x0 : start_points) {
    AscentOutcome outcome = ascend(p, x0, cfg);
    result.iterations += outcome.iterations;
    if (outcome.value > result.value) {
      result.value = outcome.value;
      result.split = complete_split(outcome.x);
    }
    ++result.starts_used;
  }
  result.global_certified = false;
  attach_verdict(result, p, q);
  return result;
}

ThetaResult homology_verdict(const PointData& p, int q, const OptimizerConfig& cfg) {
  return maximize_theta(p, q, cfg);
}

ChainRecord verify_lemma_chain(const PointData& p, int k, int q, const SubspaceSplit& split) {
  if (p.n < 5) throw DomainError("lemma chain requires n >= 5");
  if (k < 2 || 2 * k > p.n)
    throw DomainError("lemma chain requires 2 <= k <= n/2, got k=" + std::to_string(k));
  if (q < 2 || q > k)
    throw DomainError("lemma chain requires 2 <= q <= k, got q=" + std::to_string(q));
  require_split(p, split);
  if (split.q != q) throw DimensionMismatch("split q disagrees with chain q");

  const int n = p.n;
  const auto [c_alpha, big_h] = curvature::mean_curvature_vector(p);
  const double h_sq = big_h * big_h;
  const double s = curvature::sff_norm_sq(p);
  const Eigen::MatrixXd ric = curvature::ricci_tensor(p);
  const auto [ric_min, ric_dir] = curvature::ricci_min(p);
  (void)ric_dir;
  const double alpha = bounds::alpha(n, k, big_h, p.c);
  const double c = p.c;

  // block quantities in the split basis, accumulated over alpha
  double theta = 0.0;
  double a_term = 0.0;      // sum_alpha c_alpha (tr_V - q c_alpha)
  double v_penalty = 0.0;   // sum_alpha (q sum_{i<=q} d_i^2 - tr_V^2), Cauchy-Schwarz gap
  double w_penalty = 0.0;   // same for the complement block
  double sum_c_tv = 0.0;    // sum_alpha c_alpha tr_V
  for (int alpha = 0; alpha < p.m; ++alpha) {
    const Eigen::MatrixXd d = split.basis.transpose() * p.shape_ops[alpha] * split.basis;
    const double tv = d.topLeftCorner(q, q).trace();
    const double tw = d.bottomRightCorner(n - q, n - q).trace();
    double dv_sq = 0.0, dw_sq = 0.0;
    for (int i = 0; i < q; ++i) dv_sq += d(i, i) * d(i, i);
    for (int j = q; j < n; ++j) dw_sq += d(j, j) * d(j, j);
    const double cross = d.topRightCorner(q, n - q).squaredNorm();
    theta += 2.0 * cross - tv * tw;
    a_term += c_alpha[alpha] * (tv - q * c_alpha[alpha]);
    v_penalty += q * dv_sq - tv * tv;
    w_penalty += (n - q) * dw_sq - tw * tw;
    sum_c_tv += c_alpha[alpha] * tv;
  }
  double ric_v_diag = 0.0;  // sum_{i<=q} Ric(e_i, e_i) in the split basis
  {
    const Eigen::MatrixXd ric_split = split.basis.transpose() * ric * split.basis;
    for (int i = 0; i < q; ++i) ric_v_diag += ric_split(i, i);
  }

  const double threshold = static_cast<double>(q) * (n - q) * c;
  ChainRecord record;
  record.q = q;
  record.k = k;
  record.theta = theta;
  record.threshold = threshold;
  record.pinch_margin = ric_min - alpha;
  record.hypothesis_met = record.pinch_margin >= -1e-9 * (1.0 + std::abs(alpha));

  auto push = [&record](std::string name, double value, double slack, bool equality) {
    record.lines.push_back({std::move(name), value, slack, equality});
  };

  // first chain: eliminate tr_W by tr_W = n c_alpha - tr_V, then bound
  // tr_V^2 <= q sum d_i^2, substitute the Gauss equation, drop to Ric_min
  const double s1_identity = theta;
  const double s1_cs = s1_identity + v_penalty;
  const double s1_gauss = q * (q * (n - 1) * c - ric_v_diag) + n * (q - 1) * sum_c_tv;
  const double s1_ric_min =
      q * q * ((n - 1) * (c + h_sq) - ric_min) - q * (n - q) * h_sq + n * (q - 1) * a_term;
  push("s1.identity", s1_identity, s1_identity - theta, true);
  push("s1.cauchy_schwarz", s1_cs, s1_cs - s1_identity, false);
  push("s1.gauss_ricci", s1_gauss, s1_gauss - s1_cs, false);
  push("s1.ric_min", s1_ric_min, s1_ric_min - s1_gauss, false);

  // second chain: split the trace product with weights (n-q)/n and q/n,
  // Cauchy-Schwarz on both blocks, absorb the diagonal squares into S,
  // then drop the scalar curvature to n Ric_min
  const double s2_identity = theta;
  const double s2_cs =
      s2_identity + static_cast<double>(n - q) / n * v_penalty + static_cast<double>(q) / n * w_penalty;
  double s2_regroup = static_cast<double>(q) * (n - q) / n * s;
  for (int alpha = 0; alpha < p.m; ++alpha)
    s2_regroup -= q * n * c_alpha[alpha] * c_alpha[alpha];
  s2_regroup -= (n - 2 * q) * (a_term + q * h_sq);
  const double s2_ric_min =
      q * (n - q) * ((n - 1) * (c + h_sq) - ric_min) - q * (n - q) * h_sq - (n - 2 * q) * a_term;
  push("s2.identity", s2_identity, s2_identity - theta, true);
  push("s2.cauchy_schwarz", s2_cs, s2_cs - s2_identity, false);
  push("s2.regroup_sff", s2_regroup, s2_regroup - s2_cs, false);
  push("s2.ric_min", s2_ric_min, s2_ric_min - s2_regroup, false);

  // convex combination with weights (n-2q)/(q(n-2)) and n(q-1)/(q(n-2))
  const double w1 = static_cast<double>(n - 2 * q) / (q * (n - 2));
  const double w2 = static_cast<double>(n) * (q - 1) / (q * (n - 2));
  const double combined = w1 * s1_ric_min + w2 * s2_ric_min;
  const double d_q = q * (n - 2 * q) + n * (q - 1) * (n - q);
  const double closed_form =
      d_q / (n - 2.0) * ((n - 1) * (c + h_sq) - ric_min) - q * (n - q) * h_sq;
  const double phi_k = bounds::phi(n, k).value;
  const double phi_q = bounds::phi(n, q).value;
  const double pinched = d_q * phi_k * (c + h_sq) - q * (n - q) * h_sq;
  const double monotone = d_q * phi_q * (c + h_sq) - q * (n - q) * h_sq;
  push("combine.closed_form", closed_form, closed_form - combined, true);
  push("combine.pinching", pinched, pinched - closed_form, false);
  push("combine.phi_monotone", monotone, monotone - pinched, false);
  push("final.threshold", threshold, threshold - monotone, true);
  push("final.bound", threshold, threshold - theta, false);

  record.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& line : record.lines) record.min_slack = std::min(record.min_slack, line.slack);
  record.final_slack = threshold - theta;
  record.bound_holds = record.final_slack >= -1e-10;
  return record;
}

std::optional<PointData> random_pinched_instance(int n, int m, double c, int k,
                                                 RngStream& stream, double margin_frac) {
  if (n < 5) throw DomainError("pinched instance requires n >= 5");
  if (k < 2 || 2 * k > n) throw DomainError("pinched instance requires 2 <= k <= n/2");
  // entry scale keeps the umbilical-shift root inside the search bracket
  const double scale = 0.3 / std::sqrt(static_cast<double>(n));
  std::vector<Eigen::MatrixXd> base;
  base.reserve(m);
  for (int alpha = 0; alpha < m; ++alpha) base.push_back(stream.symmetric_normal_matrix(n, scale));

  auto margin_at = [&](double t) {
    std::vector<Eigen::MatrixXd> ops = base;
    ops[0] += t * Eigen::MatrixXd::Identity(n, n);
    PointData p = make_point_data(n, m, c, std::move(ops));
    const auto [c_alpha, big_h] = curvature::mean_curvature_vector(p);
    (void)c_alpha;
    const auto [ric_min, dir] = curvature::ricci_min(p);
    (void)dir;
    const double alpha_bound = bounds::alpha(n, k, big_h, c);
    return ric_min - alpha_bound - margin_frac * (c + big_h * big_h);
  };

  double t = 0.0;
  if (margin_at(0.0) < 0.0) {
    double lo = 0.0, hi = 10.0;
    if (margin_at(hi) < 0.0) return std::nullopt;  // no root in the mandated bracket
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (margin_at(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    t = hi;
  }
  std::vector<Eigen::MatrixXd> ops = std::move(base);
  ops[0] += t * Eigen::MatrixXd::Identity(n, n);
  return make_point_data(n, m, c, std::move(ops));
}

}  // namespace pinchkit::theta

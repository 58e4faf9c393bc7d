#pragma once

// Independent slow-path oracles for the test suite. Everything here is
// written the naive way on purpose: four-index loops, entrywise sums,
// direction sampling. The library must agree with these, never the
// other way around.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

#include "pinchkit/point_data.hpp"
#include "pinchkit/rng.hpp"

namespace oracles {

using Big = boost::multiprecision::cpp_bin_float_50;

// Theta_q by the literal four-index definition over the split columns
inline double theta_four_index(const pinchkit::PointData& p, const Eigen::MatrixXd& basis,
                               int q) {
  const int n = p.n;
  double total = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = q; j < n; ++j)
      for (int alpha = 0; alpha < p.m; ++alpha) {
        double hij = 0.0, hii = 0.0, hjj = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const double h = p.shape_ops[static_cast<std::size_t>(alpha)](a, b);
            hij += basis(a, i) * h * basis(b, j);
            hii += basis(a, i) * h * basis(b, i);
            hjj += basis(a, j) * h * basis(b, j);
          }
        total += 2.0 * hij * hij - hii * hjj;
      }
  return total;
}

// Gauss-equation Ricci by the triple loop, no matrix algebra
inline Eigen::MatrixXd ricci_triple_loop(const pinchkit::PointData& p) {
  const int n = p.n;
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double entry = (i == j) ? (n - 1) * p.c : 0.0;
      for (int alpha = 0; alpha < p.m; ++alpha) {
        const Eigen::MatrixXd& h = p.shape_ops[static_cast<std::size_t>(alpha)];
        double trace = 0.0;
        for (int t = 0; t < n; ++t) trace += h(t, t);
        entry += trace * h(i, j);
        for (int t = 0; t < n; ++t) entry -= h(i, t) * h(j, t);
      }
      ric(i, j) = entry;
    }
  return ric;
}

// squared SFF norm by entrywise summation
inline double sff_norm_sq_entrywise(const pinchkit::PointData& p) {
  double s = 0.0;
  for (const auto& h : p.shape_ops)
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j) s += h(i, j) * h(i, j);
  return s;
}

// lower bound on the smallest Ricci eigenvalue by direction sampling;
// the true minimum is <= this for every sample count
inline double ricci_min_sampled(const pinchkit::PointData& p, int samples,
                                std::uint64_t seed) {
  const Eigen::MatrixXd ric = ricci_triple_loop(p);
  pinchkit::RngStream stream(seed, 0x0A5EDull, 0);
  double best = 1e300;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd v = stream.unit_vector(p.n);
    best = std::min(best, double(v.transpose() * ric * v));
  }
  return best;
}

// b(n,k,H) through 50-digit floats, radical and all
inline double b_bound_highprec(int n, int k, double H) {
  const Big nn(n), kk(k), h(H);
  const Big radical = sqrt(nn * nn * h * h + 4 * kk * (nn - kk));
  const Big value = nn * (kk - 1) / kk + (nn * (kk - 1) * h / (2 * kk * kk)) * (nn * h + radical);
  return value.convert_to<double>();
}

// exhaustive coordinate-subset Theta_q maximum via the library's
// evaluation of explicitly constructed splits
template <typename ThetaFn>
double subset_max(int n, int q, ThetaFn&& theta_of_subset) {
  std::vector<int> idx(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) idx[static_cast<std::size_t>(i)] = i;
  double best = -1e300;
  for (;;) {
    best = std::max(best, theta_of_subset(idx));
    int pos = q - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - q + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < q; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace oracles

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace pinchkit {

// ==== deterministic keyed RNG streams ====
//
// SplitMix64 core with explicit stream keying. Every randomized routine
// in the toolkit derives its stream from (master seed, key1, key2), so a
// computation's draws never depend on what ran before it or on which
// worker thread executes it. Uniform and normal variates are generated
// from raw u64s by fixed arithmetic: byte-identical runs are part of the
// report contract, and the standard <random> distributions do not
// guarantee a portable sequence.

class RngStream {
 public:
  explicit RngStream(std::uint64_t master, std::uint64_t key1 = 0, std::uint64_t key2 = 0) {
    state_ = mix(master + GOLDEN);
    state_ = mix(state_ ^ (key1 + GOLDEN));
    state_ = mix(state_ ^ (key2 + GOLDEN));
    has_cached_normal_ = false;
    cached_normal_ = 0.0;
  }

  std::uint64_t next_u64() {
    state_ += GOLDEN;
    return mix(state_);
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; second variate cached
  double normal() {
    if (has_cached_normal_) {
      has_cached_normal_ = false;
      return cached_normal_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
  }

  // unbiased integer in [0, bound) by rejection
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  // row-major fill order, part of the determinism contract
  Eigen::MatrixXd normal_matrix(int rows, int cols) {
    Eigen::MatrixXd a(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = normal();
    return a;
  }

  Eigen::MatrixXd symmetric_normal_matrix(int n, double scale) {
    Eigen::MatrixXd a = normal_matrix(n, n);
    return scale * 0.5 * (a + a.transpose());
  }

  // Haar-like orthogonal matrix: QR of a Gaussian matrix with the sign
  // of each R diagonal entry pushed into Q, which makes the result a
  // deterministic function of the stream
  Eigen::MatrixXd orthogonal(int n) {
    const Eigen::MatrixXd g = normal_matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
  }

  // unit vector uniform on the sphere
  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd v = normal_vector(n);
    const double norm = v.norm();
    if (norm == 0.0) {
      v.setZero();
      v(0) = 1.0;
      return v;
    }
    return v / norm;
  }

 private:
  static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool has_cached_normal_;
  double cached_normal_;
};

}  // namespace pinchkit

#pragma once

#include <Eigen/Dense>
#include <utility>

namespace pinchkit::detail {

// ==== shared dense linear algebra helpers ====

// Symmetric eigendecomposition with the reproducibility conventions:
// eigenvalues ascending (Eigen guarantees this), every eigenvector
// sign-fixed so its first component of nonnegligible size is positive.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> eig_sym(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();
  const int n = static_cast<int>(values.size());
  for (int j = 0; j < n; ++j) {
    const double cutoff = 1e-12 * vectors.col(j).norm();
    for (int i = 0; i < n; ++i) {
      const double entry = vectors(i, j);
      if (std::abs(entry) > cutoff) {
        if (entry < 0) vectors.col(j) = -vectors.col(j);
        break;
      }
    }
  }
  return {std::move(values), std::move(vectors)};
}

// Thin QR orthonormalization with positive R diagonal, deterministic.
inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const int cols = static_cast<int>(x.cols());
  Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(cols);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline double max_abs(const Eigen::MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// deviation from orthonormal columns, |X^T X - I|_max
inline double orthonormality_defect(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd gram = x.transpose() * x;
  return max_abs(gram - Eigen::MatrixXd::Identity(x.cols(), x.cols()));
}

}  // namespace pinchkit::detail

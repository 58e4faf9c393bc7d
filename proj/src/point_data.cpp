#include "pinchkit/point_data.hpp"

#include <cmath>
#include <utility>

#include "pinchkit/errors.hpp"

namespace pinchkit {

namespace {

std::string entry_name(int alpha, int i, int j) {
  return "shape_operators[" + std::to_string(alpha) + "](" + std::to_string(i) + "," +
         std::to_string(j) + ")";
}

}  // namespace

void validate_point_data(PointData& p) {
  if (p.n < 2) throw DimensionError("n must be at least 2, got " + std::to_string(p.n));
  if (p.m < 1) throw DimensionError("m must be at least 1, got " + std::to_string(p.m));
  if (static_cast<int>(p.shape_ops.size()) != p.m)
    throw DimensionError("shape_operators holds " + std::to_string(p.shape_ops.size()) +
                         " matrices, declared m=" + std::to_string(p.m));

  double max_entry = 0.0;
  for (const auto& h : p.shape_ops)
    if (h.size() > 0) max_entry = std::max(max_entry, h.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * (1.0 + max_entry);

  for (int alpha = 0; alpha < p.m; ++alpha) {
    Eigen::MatrixXd& h = p.shape_ops[alpha];
    if (h.rows() != p.n || h.cols() != p.n)
      throw DimensionError("shape_operators[" + std::to_string(alpha) + "] is " +
                           std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                           ", expected " + std::to_string(p.n) + "x" + std::to_string(p.n));
    for (int i = 0; i < p.n; ++i)
      for (int j = i + 1; j < p.n; ++j) {
        const double asym = std::abs(h(i, j) - h(j, i));
        if (asym > tol)
          throw SymmetryError(entry_name(alpha, i, j) + " asymmetric by " + std::to_string(asym) +
                              ", tolerance " + std::to_string(tol));
      }
    h = 0.5 * (h + h.transpose()).eval();
  }

  if (p.exact) {
    if (static_cast<int>(p.shape_ops_exact.size()) != p.m)
      throw DimensionError("exact layer holds " + std::to_string(p.shape_ops_exact.size()) +
                           " matrices, declared m=" + std::to_string(p.m));
    const std::size_t want = static_cast<std::size_t>(p.n) * p.n;
    for (int alpha = 0; alpha < p.m; ++alpha) {
      auto& entries = p.shape_ops_exact[alpha];
      if (entries.size() != want)
        throw DimensionError("exact shape_operators[" + std::to_string(alpha) + "] has " +
                             std::to_string(entries.size()) + " entries, expected " +
                             std::to_string(want));
      for (int i = 0; i < p.n; ++i)
        for (int j = i + 1; j < p.n; ++j) {
          Rat& upper = entries[static_cast<std::size_t>(i) * p.n + j];
          Rat& lower = entries[static_cast<std::size_t>(j) * p.n + i];
          if (upper != lower) {
            const double asym = std::abs(to_double(Rat(upper - lower)));
            if (asym > tol)
              throw SymmetryError("exact " + entry_name(alpha, i, j) + " asymmetric beyond tolerance");
            const Rat mean = (upper + lower) / 2;
            upper = mean;
            lower = mean;
          }
        }
      // re-mirror the float layer from the exact one
      for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.n; ++j)
          p.shape_ops[alpha](i, j) = to_double(entries[static_cast<std::size_t>(i) * p.n + j]);
    }
    p.c = to_double(p.c_exact);
  }
}

PointData make_point_data(int n, int m, double c, std::vector<Eigen::MatrixXd> shape_ops,
                          std::string label) {
  PointData p;
  p.n = n;
  p.m = m;
  p.c = c;
  p.shape_ops = std::move(shape_ops);
  p.label = std::move(label);
  validate_point_data(p);
  return p;
}

PointData make_exact_point_data(int n, int m, Rat c, std::vector<std::vector<Rat>> shape_ops,
                                std::string label) {
  PointData p;
  p.n = n;
  p.m = m;
  p.exact = true;
  p.c_exact = std::move(c);
  p.c = to_double(p.c_exact);
  p.shape_ops_exact = std::move(shape_ops);
  p.label = std::move(label);
  p.shape_ops.assign(m, Eigen::MatrixXd::Zero(n, n));
  validate_point_data(p);
  return p;
}

}  // namespace pinchkit

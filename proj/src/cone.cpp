#include "conebill/cone.hpp"

#include <cmath>
#include <string>

namespace conebill {

ConeSpec make_cone(const MatrixXd& columns) {
  const Eigen::Index m = columns.rows();
  const Eigen::Index n = columns.cols();
  if (m < 1 || n < 1) throw Error(ErrorCode::DimensionMismatch, "cone needs dim >= 1 and at least one normal");
  if (n > m)
    throw Error(ErrorCode::DegenerateArrangement,
                std::to_string(n) + " normals in R^" + std::to_string(m) + " cannot be independent");

  ConeSpec cone;
  cone.normals_.resize(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = columns.col(i).norm();
    if (!(norm > 0) || !std::isfinite(norm))
      throw Error(ErrorCode::ZeroVector, "normal " + std::to_string(i) + " has zero or non-finite length");
    if (std::abs(norm - 1.0) > kNormWarningTolerance) cone.renormalized_ = true;
    cone.normals_.col(i) = columns.col(i) / norm;
  }

  const double lmin = min_eigenvalue(MatrixXd(cone.normals_.transpose() * cone.normals_));
  cone.sigma_min_ = std::sqrt(std::max(lmin, 0.0));
  if (!(cone.sigma_min_ > kIndependenceThreshold))
    throw Error(ErrorCode::DegenerateArrangement, "normals are linearly dependent (sigma_min = " +
                                                      std::to_string(cone.sigma_min_) + ")");
  return cone;
}

ConeSpec make_cone(Eigen::Index dim, const std::vector<VectorXd>& normals) {
  MatrixXd columns(dim, static_cast<Eigen::Index>(normals.size()));
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "normal " + std::to_string(i) + " has " +
                                                    std::to_string(normals[i].size()) + " components, expected " +
                                                    std::to_string(dim));
    columns.col(static_cast<Eigen::Index>(i)) = normals[i];
  }
  return make_cone(columns);
}

GramMatrix gram(const ConeSpec& cone) {
  GramMatrix g = cone.normals().transpose() * cone.normals();
  // exact symmetry and unit diagonal
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) g(j, i) = g(i, j);
  }
  return g;
}

double lambda_min(const ConeSpec& cone) { return min_eigenvalue(gram(cone)); }

ReducedCone reduce_to_span(const ConeSpec& cone) {
  const Eigen::Index n = cone.walls();
  Eigen::HouseholderQR<MatrixXd> qr(cone.normals());
  MatrixXd basis = qr.householderQ() * MatrixXd::Identity(cone.dim(), n);
  // Re-orthonormalize once (classical Gram-Schmidt pass) to keep Gram drift at rounding level.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) basis.col(j) -= basis.col(k).dot(basis.col(j)) * basis.col(k);
    basis.col(j).normalize();
  }
  MatrixXd reduced = basis.transpose() * cone.normals();
  return {make_cone(reduced), std::move(basis)};
}

ReducedCone reduce_to_span(Eigen::Index dim, const std::vector<VectorXd>& normals) {
  return reduce_to_span(make_cone(dim, normals));
}

VectorXd margins(const ConeSpec& cone, const VectorXd& point) {
  if (point.size() != cone.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "point has " + std::to_string(point.size()) + " components, cone dim is " + std::to_string(cone.dim()));
  return cone.normals().transpose() * point;
}

bool contains(const ConeSpec& cone, const VectorXd& point, double tol) {
  return (margins(cone, point).array() >= -tol).all();
}

ConeSpec flip_normal(const ConeSpec& cone, Eigen::Index i) {
  MatrixXd columns = cone.normals();
  columns.col(i) = -columns.col(i);
  return make_cone(columns);
}

}  // namespace conebill
